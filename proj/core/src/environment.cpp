#include "serpent/environment.hpp"

#include <cmath>
#include <random>

#include "serpent/errors.hpp"
#include "serpent/json_fields.hpp"

namespace serpent {

double sigma_for_width(double width) { return width / (2.0 * std::sqrt(2.0 * std::log(2.0))); }

void Environment::validate() const {
  if (!(bounds.xmax > bounds.xmin && bounds.ymax > bounds.ymin)) {
    throw ValidationError("bounds: xmax > xmin and ymax > ymin required");
  }
  if (!(field.k_height >= 1.0)) throw ValidationError("field.k_height must be >= 1");
  if (!(field.amplitude >= 0.0)) throw ValidationError("field.amplitude must be >= 0");
  if (!(field.sigma_x > 0.0 && field.sigma_y > 0.0)) {
    throw ValidationError("field.sigma_x and field.sigma_y must be > 0");
  }
  for (std::size_t k = 0; k < pegs.size(); ++k) {
    const Peg& p = pegs[k];
    if (!(p.diameter > 0.0)) {
      throw ValidationError("pegs[" + std::to_string(k) + "].diameter must be > 0");
    }
    if (!bounds.contains(p.center())) {
      throw ValidationError("pegs[" + std::to_string(k) + "] center lies outside bounds");
    }
  }
}

double lateral_drag_at(const Environment& env, double x, double y) {
  const double inv_x = 1.0 / (2.0 * env.field.sigma_x * env.field.sigma_x);
  const double inv_y = 1.0 / (2.0 * env.field.sigma_y * env.field.sigma_y);
  double sum = 0.0;
  for (const Peg& p : env.pegs) {
    const double dx = x - p.cx, dy = y - p.cy;
    sum += std::exp(-(dx * dx * inv_x + dy * dy * inv_y));
  }
  return env.field.k_height + env.field.amplitude * sum;
}

Mat3 drag_matrix(const Environment& env, const Point& link_com_world) {
  Mat3 k = Mat3::Identity();
  k(1, 1) = lateral_drag_at(env, link_com_world.x(), link_com_world.y());
  return k;
}

Environment load_environment(const std::string& text) {
  const Json doc = parse_json(text);
  ObjectReader root(doc, "");
  Environment env;
  env.units = root.string_or("units", env.units);

  ObjectReader b = root.object("bounds");
  env.bounds = {b.number("xmin"), b.number("xmax"), b.number("ymin"), b.number("ymax")};
  b.finish();

  if (root.has("field")) {
    ObjectReader f = root.object("field");
    env.field.k_height = f.number_or("k_height", env.field.k_height);
    env.field.amplitude = f.number_or("amplitude", env.field.amplitude);
    env.field.sigma_x = f.number_or("sigma_x", env.field.sigma_x);
    env.field.sigma_y = f.number_or("sigma_y", env.field.sigma_y);
    f.finish();
  }

  if (root.has("pegs")) {
    const Json& pegs = root.at("pegs");
    if (!pegs.is_array()) throw ParseError("pegs", "expected an array");
    for (std::size_t k = 0; k < pegs.size(); ++k) {
      ObjectReader p(pegs[k], "pegs[" + std::to_string(k) + "]");
      Peg peg;
      peg.cx = p.number("cx");
      peg.cy = p.number("cy");
      peg.diameter = p.number_or("diameter", peg.diameter);
      p.finish();
      env.pegs.push_back(peg);
    }
  }
  root.finish();
  env.validate();
  return env;
}

Environment load_environment_file(const std::string& path) { return load_environment(read_text_file(path)); }

std::string save_environment(const Environment& env) {
  Json doc;
  doc["units"] = env.units;
  doc["bounds"] = {{"xmin", env.bounds.xmin},
                   {"xmax", env.bounds.xmax},
                   {"ymin", env.bounds.ymin},
                   {"ymax", env.bounds.ymax}};
  doc["field"] = {{"k_height", env.field.k_height},
                  {"amplitude", env.field.amplitude},
                  {"sigma_x", env.field.sigma_x},
                  {"sigma_y", env.field.sigma_y}};
  doc["pegs"] = Json::array();
  for (const Peg& p : env.pegs) {
    doc["pegs"].push_back({{"cx", p.cx}, {"cy", p.cy}, {"diameter", p.diameter}});
  }
  return doc.dump(2) + "\n";
}

Environment generate_grid(const GridSpec& spec) {
  if (!(spec.spacing > 0.0)) throw ValidationError("grid spacing must be > 0");
  if (spec.rows < 1 || spec.cols < 1) throw ValidationError("grid needs at least one row and column");
  if (!(spec.jitter >= 0.0 && spec.jitter <= 0.25)) {
    throw ValidationError("grid jitter must lie in [0, 0.25]");
  }
  Environment env;
  env.field = spec.field;
  const double s = spec.spacing;
  env.bounds = {-s, spec.cols * s, -s, spec.rows * s};

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> offset(-spec.jitter * s, spec.jitter * s);
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      Peg p{c * s, r * s, spec.diameter};
      if (spec.jitter > 0.0) {
        p.cx += offset(rng);
        p.cy += offset(rng);
      }
      env.pegs.push_back(p);
    }
  }
  env.validate();
  return env;
}

}  // namespace serpent
