#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "serpent/environment.hpp"
#include "serpent/locomotion.hpp"
#include "serpent/roadmap.hpp"

namespace serpent {

enum class Layer { pegs, field, roadmap, trajectory, plan };

const char* to_string(Layer layer);
/// Accepts "pegs", "field", "roadmap", "trajectory", "plan". Throws ValidationError.
Layer parse_layer(const std::string& name);

struct PlotSpec {
  std::vector<Layer> layers{Layer::pegs};
  int width = 800;  // pixels; height follows the bounds aspect ratio
  /// Pixels per length unit. 0 fits the bounds into `width`.
  double scale = 0.0;
  int heatmap_resolution = 200;

  bool has(Layer layer) const;
  void validate() const;
};

struct PlotInputs {
  const Environment* env = nullptr;
  const Roadmap* roadmap = nullptr;
  const Trajectory* trajectory = nullptr;
  std::vector<Point> plan;  // planned vertex positions
};

/// Field samples at cell centers; row 0 is ymin. values(r, c).
struct FieldSamples {
  Eigen::MatrixXd values;
  double x0 = 0.0, y0 = 0.0, dx = 0.0, dy = 0.0;

  Point cell_center(int r, int c) const { return {x0 + (c + 0.5) * dx, y0 + (r + 0.5) * dy}; }
};

FieldSamples sample_field(const Environment& env, int resolution);

/// Throws ValidationError when a requested layer has no input.
std::string render_svg(const PlotInputs& inputs, const PlotSpec& spec);

}  // namespace serpent
