#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "serpent/locomotion.hpp"
#include "serpent/se2.hpp"

namespace serpent::cli {

/// Stable process exit codes.
enum ExitCode : int { kSuccess = 0, kError = 1, kPlannerFailure = 2 };

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Planner thread count after applying SERPENT_SIM_THREADS as a cap. 0 means
/// hardware concurrency, both in the request and in the variable.
int effective_threads(int requested);

/// Parses "x,y".
Point parse_point(const std::string& text);

/// Reads back the columns written by trajectory_csv.
Trajectory parse_trajectory_csv(const std::string& text);

/// Planned vertex positions from a plan document.
std::vector<Point> parse_plan_positions(const std::string& text);

}  // namespace serpent::cli
