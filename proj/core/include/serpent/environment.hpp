#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "serpent/se2.hpp"

namespace serpent {

struct Peg {
  double cx = 0.0;
  double cy = 0.0;
  double diameter = 4.0;

  Point center() const { return {cx, cy}; }
  bool operator==(const Peg&) const = default;
};

/// sigma that makes a Gaussian's full width at half maximum equal to `width`.
double sigma_for_width(double width);

/// Lateral drag field: k_height plus one Gaussian hump per peg.
struct FieldParams {
  double k_height = 4.0;
  double amplitude = 12.0;
  double sigma_x = sigma_for_width(4.0);
  double sigma_y = sigma_for_width(4.0);

  bool operator==(const FieldParams&) const = default;
};

struct Bounds {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;

  bool contains(const Point& p) const {
    return p.x() >= xmin && p.x() <= xmax && p.y() >= ymin && p.y() <= ymax;
  }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool operator==(const Bounds&) const = default;
};

struct Environment {
  std::string units = "in";
  Bounds bounds;
  FieldParams field;
  std::vector<Peg> pegs;

  /// Throws ValidationError.
  void validate() const;
  bool operator==(const Environment&) const = default;
};

/// k_height + sum_k A exp(-((x-xk)^2/(2 sx^2) + (y-yk)^2/(2 sy^2))).
double lateral_drag_at(const Environment& env, double x, double y);

/// diag(1, lateral_drag_at(com), 1).
Mat3 drag_matrix(const Environment& env, const Point& link_com_world);

/// Parses the JSON environment document. Throws ParseError or ValidationError.
Environment load_environment(const std::string& text);
Environment load_environment_file(const std::string& path);
std::string save_environment(const Environment& env);

struct GridSpec {
  int rows = 1;
  int cols = 1;
  double spacing = 10.0;
  double jitter = 0.0;  // max per-axis offset as a fraction of spacing, <= 0.25
  std::uint64_t seed = 0;
  double diameter = 4.0;
  FieldParams field;
};

/// Peg grid with origin at (0, 0), row-major, padded by one spacing on each side.
Environment generate_grid(const GridSpec& spec);

}  // namespace serpent
