#include "serpent/presets.hpp"

#include <algorithm>
#include <cmath>

#include "serpent/errors.hpp"

namespace serpent {

namespace {

// Round half to even, at 1/8 resolution.
double eighth(double v) { return std::nearbyint(v * 8.0) / 8.0; }

// Offset of an open polyline by `w` to its left (negative: right), with
// mitred joins. Direction is preserved.
std::vector<Point> offset_polyline(const std::vector<Point>& line, double w) {
  const std::size_t n = line.size();
  auto normal = [&](std::size_t k) {
    const Point d = (line[k + 1] - line[k]).normalized();
    return Point(-d.y(), d.x());
  };
  std::vector<Point> out;
  out.push_back(line.front() + w * normal(0));
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Point n0 = normal(k - 1), n1 = normal(k);
    const Point bis = (n0 + n1).normalized();
    out.push_back(line[k] + bis * (w / bis.dot(n0)));
  }
  out.push_back(line.back() + w * normal(n - 2));
  return out;
}

// n + 1 points equally spaced by arc length, n = round(length / step).
std::vector<Point> subdivide(const std::vector<Point>& line, double step) {
  std::vector<double> arc{0.0};
  for (std::size_t k = 1; k < line.size(); ++k) arc.push_back(arc.back() + (line[k] - line[k - 1]).norm());
  const double total = arc.back();
  const int n = std::max(1, static_cast<int>(std::nearbyint(total / step)));
  std::vector<Point> pts;
  std::size_t seg = 0;
  for (int i = 0; i <= n; ++i) {
    const double s = i * total / n;
    while (seg + 2 < line.size() && arc[seg + 1] < s) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double t = len > 0.0 ? std::clamp((s - arc[seg]) / len, 0.0, 1.0) : 0.0;
    pts.push_back(line[seg] + t * (line[seg + 1] - line[seg]));
  }
  return pts;
}

}  // namespace

Scenario fig16_scenario(double d) {
  // Keeps the pair from touching each other or the rows at y = 0 and y = 30.
  if (!(d > 4.0 && d <= 20.0)) throw ValidationError("fig16 distance d must lie in (4, 20]");
  GridSpec grid;
  grid.rows = 6;
  grid.cols = 6;
  grid.spacing = 10.0;
  Scenario sc;
  sc.name = "fig16";
  sc.env = generate_grid(grid);
  sc.env.pegs[kFig16MarkedPegs[0]].cy = 15.0 - 0.5 * d;
  sc.env.pegs[kFig16MarkedPegs[1]].cy = 15.0 + 0.5 * d;
  sc.env.validate();
  sc.start = {-5.0, -5.0};
  sc.goal = {55.0, 55.0};
  return sc;
}

Scenario y_scenario() {
  // Dense arch: up at slope 3/4, a flat top, back down to the shared exit.
  const Point fork{30.0, 0.0};
  const Point up{fork.x() + 32.0, 24.0};
  const Point top{up.x() + 10.0, 24.0};
  const Point join{top.x() + 32.0, 0.0};
  const std::vector<Point> arch{{-10.0, 0.0}, fork, up, top, join, {join.x() + 40.0, 0.0}};
  constexpr double half_width = 2.5, wall_step = 5.0, sparse_y = -12.0, sparse_step = 10.0;

  std::vector<Point> pegs;
  for (double side : {half_width, -half_width}) {
    for (const Point& p : subdivide(offset_polyline(arch, side), wall_step)) {
      const Point q{eighth(p.x()), eighth(p.y())};
      bool clear = true;
      for (const Point& r : pegs) clear = clear && (q - r).squaredNorm() >= 16.0;
      if (clear) pegs.push_back(q);
    }
  }
  // One sparse row keeps the free corridor on the roadmap.
  const int n = static_cast<int>(std::nearbyint((join.x() - fork.x()) / sparse_step));
  for (int i = 0; i <= n; ++i) pegs.push_back({eighth(fork.x() + i * (join.x() - fork.x()) / n), sparse_y});

  Scenario sc;
  sc.name = "y";
  sc.env.bounds = {-20.0, join.x() + 50.0, sparse_y - 12.0, 44.0};
  sc.env.field.k_height = 1.0;
  sc.env.field.amplitude = 24.0;
  for (const Point& p : pegs) sc.env.pegs.push_back({p.x(), p.y(), 4.0});
  sc.env.validate();
  sc.start = {0.0, 0.0};
  sc.goal = {join.x() + 25.0, 0.0};
  sc.speed_threshold = 1.0;
  return sc;
}

Scenario corridor_scenario() {
  Scenario sc;
  sc.name = "corridor";
  sc.env.bounds = {-10.0, 70.0, -15.0, 15.0};
  for (int i = 0; i <= 12; ++i) {
    sc.env.pegs.push_back({5.0 * i, 5.0, 4.0});
    sc.env.pegs.push_back({5.0 * i, -5.0, 4.0});
  }
  sc.env.validate();
  sc.start = {0.0, 0.0};
  sc.goal = {60.0, 0.0};
  return sc;
}

std::vector<std::string> preset_names() { return {"fig16", "y", "corridor"}; }

Scenario preset(const std::string& name, double d) {
  if (name == "fig16") return fig16_scenario(d);
  if (name == "y") return y_scenario();
  if (name == "corridor") return corridor_scenario();
  throw ValidationError("unknown preset '" + name + "' (expected fig16, y or corridor)");
}

}  // namespace serpent
