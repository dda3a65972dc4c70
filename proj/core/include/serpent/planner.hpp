#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "serpent/environment.hpp"
#include "serpent/locomotion.hpp"
#include "serpent/path_control.hpp"
#include "serpent/roadmap.hpp"

namespace serpent {

struct PlannerParams {
  double speed_threshold = 0.2;  // length/s
  double speed_window = 2.0;     // s
  int node_length = 3;           // vertices per search node
  double edge_time_budget = 60.0;
  double arrival_radius = 4.0;
  int max_expansions = 200;
  bool resim_on_backtrack = false;
  /// Sibling edges evaluated speculatively in parallel; 0 = hardware concurrency.
  int threads = 1;

  /// Threshold 0.1 link lengths/s, arrival radius 2 link lengths (the default LOS radius).
  static PlannerParams defaults_for(const RobotParams& robot);
  void validate() const;
};

/// Everything a closed-loop simulation needs besides the environment.
struct SimulationSetup {
  RobotParams robot;
  ControllerParams controller;
  double dt = 0.05;
  SolverOptions solver;
};

/// Robot state plus the controller memory needed to continue it exactly.
struct Snapshot {
  SimState state;
  PathFollower follower;
  /// Most recent COM speeds, oldest first; the stall window spans edge boundaries.
  std::deque<double> recent_speeds;

  bool operator==(const Snapshot& o) const {
    return state == o.state && follower == o.follower && recent_speeds == o.recent_speeds;
  }
};

/// Straight body trailing behind a head placed at `head`.
Snapshot initial_snapshot(const SimulationSetup& setup, const Pose& head);

enum class EdgeStatus { reached, too_slow, timeout };
const char* to_string(EdgeStatus status);

struct EdgeOutcome {
  EdgeStatus status = EdgeStatus::timeout;
  bool solver_failure = false;
  std::string diagnostic;
  Trajectory trace;
  std::vector<SpeedSample> speeds;
  Snapshot end;
};

/// Runs the closed loop along the straight leg from -> to, starting from `start`.
EdgeOutcome evaluate_edge(const Snapshot& start, const Point& from, const Point& to, const Environment& env,
                          const SimulationSetup& setup, const PlannerParams& params);

/// Same, addressed by roadmap vertex ids. Throws GraphError when they are not adjacent.
EdgeOutcome evaluate_edge(const Snapshot& start, int from_v, int to_v, const Roadmap& roadmap,
                          const Environment& env, const SimulationSetup& setup, const PlannerParams& params);

struct EdgeRecord {
  int from = -1;
  int to = -1;
  EdgeStatus status = EdgeStatus::timeout;
  bool solver_failure = false;
  double duration = 0.0;
  double min_window_speed = 0.0;  // NaN when no full window elapsed
  bool accepted = false;          // part of the final lineage
};

/// One search node: the last node_length vertices of the lineage.
struct PlanNode {
  std::vector<int> window;
  int parent = -1;
};

struct PlanResult {
  bool success = false;
  std::string failure_reason;
  Roadmap roadmap;  // input roadmap with start and goal spliced in
  Point start = Point::Zero();
  Point goal = Point::Zero();
  int start_vertex = -1;
  int goal_vertex = -1;
  Snapshot initial;
  /// Accepted lineage (the best partial path on failure).
  std::vector<int> vertices;
  std::vector<PlanNode> nodes;
  std::vector<EdgeRecord> evaluations;
  std::vector<Trajectory> edge_traces;  // per accepted lineage edge
  Trajectory trajectory;                // edge_traces concatenated
  int expansions = 0;
  int backtracks = 0;
};

struct PlanRequest {
  Point start = Point::Zero();
  Point goal = Point::Zero();
  /// Initial head heading; defaults to facing the goal.
  std::optional<double> start_heading;
};

/// Greedy depth-first search over the roadmap; each edge is accepted only if
/// the simulated robot reaches its far vertex without stalling.
PlanResult plan(const PlanRequest& request, const Roadmap& roadmap, const Environment& env,
                const SimulationSetup& setup, const PlannerParams& params);

struct ReplayResult {
  Trajectory trajectory;
  bool reached_goal = false;
  /// Index of the first record that differs from the plan's trajectory.
  std::optional<std::size_t> divergent_step;
  std::string message;
};

/// Re-simulates a successful plan end to end without backtracking.
ReplayResult replay(const PlanResult& result, const Environment& env, const SimulationSetup& setup,
                    const PlannerParams& params);

/// `replay_csv` names the replay trajectory file; empty writes null.
std::string save_plan(const PlanResult& result, const std::string& units, const std::string& replay_csv);

}  // namespace serpent
