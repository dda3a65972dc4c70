#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "serpent/planner.hpp"

namespace serpent::cli {

/// Settings shared by `sim` and `plan`. Controller and planner defaults are
/// scaled to the robot before file values are applied.
struct RunConfig {
  std::string environment;  // path to the environment file
  RobotParams robot;
  ControllerParams controller = ControllerParams::defaults_for(RobotParams{});
  PlannerParams planner = PlannerParams::defaults_for(RobotParams{});
  double dt = 0.05;
  double t_end = 60.0;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  std::optional<Point> start;
  std::optional<Point> goal;
  std::optional<double> heading;
  /// Path for `sim`; empty means free swimming.
  std::vector<Point> path;

  /// Throws ValidationError.
  void validate() const;
};

/// Parses a run configuration. Relative environment and output paths are resolved against
/// `base_dir`. Throws ParseError or ValidationError.
RunConfig parse_run_config(const std::string& text, const std::string& base_dir = "");

/// Loads a file and checks that the environment it names exists.
RunConfig load_run_config(const std::string& path);

std::string save_run_config(const RunConfig& config);

}  // namespace serpent::cli
