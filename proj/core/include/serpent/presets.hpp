#pragma once

#include <optional>
#include <string>
#include <vector>

#include "serpent/environment.hpp"

namespace serpent {

/// A named environment with the start and goal it was built for.
struct Scenario {
  std::string name;
  Environment env;
  Point start = Point::Zero();
  Point goal = Point::Zero();
  /// Replaces the robot-scaled planner speed threshold when set.
  std::optional<double> speed_threshold;
};

/// 6x6 grid, spacing 10. The pegs at (30, 10) and (30, 20) are re-spaced to a
/// vertical distance d about y = 15. Start and goal sit at opposite corners.
Scenario fig16_scenario(double d);

/// Two routes between a shared entry and exit: a peg-free straight corridor
/// nearer the goal, and an arched corridor walled by pegs. Low baseline drag
/// makes the free corridor too slow to cross.
Scenario y_scenario();

/// Two straight rows of pegs around the x axis.
Scenario corridor_scenario();

std::vector<std::string> preset_names();

/// "fig16" (uses d), "y" or "corridor". Throws ValidationError for other names
/// or a d outside (4, 20].
Scenario preset(const std::string& name, double d = 10.0);

/// Index of the two pegs fig16 moves.
inline constexpr int kFig16MarkedPegs[2] = {9, 15};

}  // namespace serpent
