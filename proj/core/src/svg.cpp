#include "serpent/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "serpent/errors.hpp"

namespace serpent {

namespace {

constexpr int kColorLevels = 64;

// Locale independent fixed-point formatting.
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string color_for(double t) {
  // Dark blue -> teal -> yellow.
  static const std::array<std::array<double, 3>, 5> stops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - static_cast<double>(i);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

struct Canvas {
  Bounds b;
  double scale;

  double px(double x) const { return (x - b.xmin) * scale; }
  double py(double y) const { return (b.ymax - y) * scale; }
};

std::string points_attr(const Canvas& cv, const std::vector<Point>& pts) {
  std::string s;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) s += ' ';
    s += num(cv.px(pts[k].x())) + "," + num(cv.py(pts[k].y()));
  }
  return s;
}

}  // namespace

const char* to_string(Layer layer) {
  switch (layer) {
    case Layer::pegs:
      return "pegs";
    case Layer::field:
      return "field";
    case Layer::roadmap:
      return "roadmap";
    case Layer::trajectory:
      return "trajectory";
    case Layer::plan:
      return "plan";
  }
  return "unknown";
}

Layer parse_layer(const std::string& name) {
  for (Layer l : {Layer::pegs, Layer::field, Layer::roadmap, Layer::trajectory, Layer::plan}) {
    if (name == to_string(l)) return l;
  }
  throw ValidationError("unknown plot layer '" + name + "'");
}

bool PlotSpec::has(Layer layer) const { return std::find(layers.begin(), layers.end(), layer) != layers.end(); }

void PlotSpec::validate() const {
  if (layers.empty()) throw ValidationError("plot needs at least one layer");
  if (width <= 0) throw ValidationError("plot width must be positive");
  if (scale < 0.0 || !std::isfinite(scale)) throw ValidationError("plot scale must be >= 0");
  if (heatmap_resolution <= 0) throw ValidationError("heatmap resolution must be positive");
}

FieldSamples sample_field(const Environment& env, int resolution) {
  FieldSamples out;
  out.x0 = env.bounds.xmin;
  out.y0 = env.bounds.ymin;
  out.dx = env.bounds.width() / resolution;
  out.dy = env.bounds.height() / resolution;
  out.values.resize(resolution, resolution);
  for (int r = 0; r < resolution; ++r) {
    for (int c = 0; c < resolution; ++c) {
      const Point p = out.cell_center(r, c);
      out.values(r, c) = lateral_drag_at(env, p.x(), p.y());
    }
  }
  return out;
}

std::string render_svg(const PlotInputs& in, const PlotSpec& spec) {
  spec.validate();
  if (!in.env) throw ValidationError("plot needs an environment");
  if (spec.has(Layer::roadmap) && !in.roadmap) throw ValidationError("roadmap layer requested without a roadmap");
  if (spec.has(Layer::trajectory) && !in.trajectory) {
    throw ValidationError("trajectory layer requested without a trajectory");
  }
  if (spec.has(Layer::plan) && in.plan.empty()) throw ValidationError("plan layer requested without a plan");

  const Environment& env = *in.env;
  const Canvas cv{env.bounds, spec.scale > 0.0 ? spec.scale : spec.width / env.bounds.width()};
  const double w = env.bounds.width() * cv.scale;
  const double h = env.bounds.height() * cv.scale;

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
       "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
  s += "<!-- units: " + env.units + " -->\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"#ffffff\"/>\n";

  for (Layer layer : {Layer::field, Layer::roadmap, Layer::pegs, Layer::trajectory, Layer::plan}) {
    if (!spec.has(layer)) continue;
    s += "<g id=\"" + std::string(to_string(layer)) + "\">\n";
    switch (layer) {
      case Layer::field: {
        const int n = spec.heatmap_resolution;
        const FieldSamples f = sample_field(env, n);
        const double lo = f.values.minCoeff();
        const double hi = f.values.maxCoeff();
        const double range = hi > lo ? hi - lo : 1.0;
        auto level = [&](int r, int c) {
          return std::min(kColorLevels - 1, static_cast<int>((f.values(r, c) - lo) / range * kColorLevels));
        };
        // Runs of equal color along each row become one rect.
        for (int r = 0; r < n; ++r) {
          int c = 0;
          while (c < n) {
            const int lv = level(r, c);
            int e = c + 1;
            while (e < n && level(r, e) == lv) ++e;
            const double x = cv.px(f.x0 + c * f.dx);
            const double y = cv.py(f.y0 + (r + 1) * f.dy);
            s += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num((e - c) * f.dx * cv.scale) +
                 "\" height=\"" + num(f.dy * cv.scale) + "\" fill=\"" +
                 color_for((lv + 0.5) / kColorLevels) + "\"/>\n";
            c = e;
          }
        }
        break;
      }
      case Layer::roadmap:
        for (const VoronoiEdge& e : in.roadmap->edges()) {
          s += "<polyline points=\"" + points_attr(cv, e.polyline) +
               "\" fill=\"none\" stroke=\"#1f4fd8\" stroke-width=\"1.5\"/>\n";
        }
        break;
      case Layer::pegs:
        for (const Peg& p : env.pegs) {
          s += "<circle cx=\"" + num(cv.px(p.cx)) + "\" cy=\"" + num(cv.py(p.cy)) + "\" r=\"" +
               num(0.5 * p.diameter * cv.scale) + "\" fill=\"#505050\" stroke=\"#000000\"/>\n";
        }
        break;
      case Layer::trajectory: {
        std::vector<Point> pts;
        pts.reserve(in.trajectory->size());
        for (const StepRecord& r : *in.trajectory) pts.push_back(r.com);
        s += "<polyline points=\"" + points_attr(cv, pts) +
             "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1\"/>\n";
        break;
      }
      case Layer::plan:
        s += "<polyline points=\"" + points_attr(cv, in.plan) +
             "\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"2\" stroke-dasharray=\"6 3\"/>\n";
        for (const Point& p : in.plan) {
          s += "<rect x=\"" + num(cv.px(p.x()) - 3.0) + "\" y=\"" + num(cv.py(p.y()) - 3.0) +
               "\" width=\"6.000\" height=\"6.000\" fill=\"#2ca02c\"/>\n";
        }
        break;
    }
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace serpent
