#include "serpent/planner.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

#include "serpent/errors.hpp"
#include "serpent/json_fields.hpp"

namespace serpent {

PlannerParams PlannerParams::defaults_for(const RobotParams& robot) {
  PlannerParams p;
  p.speed_threshold = 0.1 * robot.link_length;
  p.arrival_radius = 2.0 * robot.link_length;
  return p;
}

void PlannerParams::validate() const {
  if (!(speed_threshold > 0.0)) throw ValidationError("planner.speed_threshold must be > 0");
  if (!(speed_window > 0.0)) throw ValidationError("planner.speed_window must be > 0");
  if (node_length < 1) throw ValidationError("planner.node_length must be >= 1");
  if (!(edge_time_budget > 0.0)) throw ValidationError("planner.edge_time_budget must be > 0");
  if (!(arrival_radius > 0.0)) throw ValidationError("planner.arrival_radius must be > 0");
  if (max_expansions < 1) throw ValidationError("planner.max_expansions must be >= 1");
  if (threads < 0) throw ValidationError("planner.threads must be >= 0");
}

const char* to_string(EdgeStatus status) {
  switch (status) {
    case EdgeStatus::reached:
      return "reached";
    case EdgeStatus::too_slow:
      return "too_slow";
    case EdgeStatus::timeout:
      return "timeout";
  }
  return "unknown";
}

Snapshot initial_snapshot(const SimulationSetup& setup, const Pose& head) {
  SimState state{head, Shape::straight(setup.robot), 0.0};
  PathFollower follower(setup.robot, setup.controller, setup.dt, Polyline{}, state.shape.alpha);
  return {std::move(state), std::move(follower), {}};
}

EdgeOutcome evaluate_edge(const Snapshot& start, const Point& from, const Point& to, const Environment& env,
                          const SimulationSetup& setup, const PlannerParams& params) {
  EdgeOutcome out;
  out.end = start;
  out.end.follower.set_path(Polyline({from, to}));

  const std::size_t budget = step_count(0.0, params.edge_time_budget, setup.dt);
  const std::size_t window = window_samples(params.speed_window, setup.dt);
  for (std::size_t k = 0; k < budget; ++k) {
    StepResult r;
    try {
      const Eigen::VectorXd cmd = out.end.follower.command(out.end.state);
      r = step(out.end.state, cmd, env, setup.robot, setup.dt, setup.solver);
    } catch (const SolverError& e) {
      out.status = EdgeStatus::too_slow;
      out.solver_failure = true;
      out.diagnostic = std::string(e.what()) + " at t=" + std::to_string(e.time());
      return out;
    }
    out.end.state = std::move(r.state);
    out.trace.push_back(std::move(r.record));

    std::deque<double>& recent = out.end.recent_speeds;
    recent.push_back(out.trace.back().com_speed);
    while (recent.size() > window) recent.pop_front();
    if (recent.size() == window) {
      double sum = 0.0;
      for (double v : recent) sum += v;
      const double mean = sum / static_cast<double>(window);
      out.speeds.push_back({out.trace.back().time, mean});
      if (mean < params.speed_threshold) {
        out.status = EdgeStatus::too_slow;
        return out;
      }
    }
    if ((out.end.state.head_world.position() - to).norm() <= params.arrival_radius) {
      out.status = EdgeStatus::reached;
      return out;
    }
  }
  out.status = EdgeStatus::timeout;
  return out;
}

EdgeOutcome evaluate_edge(const Snapshot& start, int from_v, int to_v, const Roadmap& roadmap,
                          const Environment& env, const SimulationSetup& setup, const PlannerParams& params) {
  if (roadmap.edge_between(from_v, to_v) < 0) {
    throw GraphError("vertices " + std::to_string(from_v) + " and " + std::to_string(to_v) + " are not adjacent");
  }
  return evaluate_edge(start, roadmap.vertex(from_v).position, roadmap.vertex(to_v).position, env, setup, params);
}

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct Frame {
  int vertex = -1;
  int node = -1;
  Snapshot snapshot;
  std::vector<Neighbor> children;
  std::size_t next = 0;
  std::vector<std::optional<EdgeOutcome>> outcomes;  // filled speculatively
};

EdgeRecord make_record(int from, int to, const EdgeOutcome& o, double start_time) {
  EdgeRecord rec;
  rec.from = from;
  rec.to = to;
  rec.status = o.status;
  rec.solver_failure = o.solver_failure;
  rec.duration = o.trace.empty() ? 0.0 : o.trace.back().time - start_time;
  rec.min_window_speed = std::numeric_limits<double>::quiet_NaN();
  for (const SpeedSample& s : o.speeds) {
    if (std::isnan(rec.min_window_speed) || s.speed < rec.min_window_speed) rec.min_window_speed = s.speed;
  }
  return rec;
}

}  // namespace

PlanResult plan(const PlanRequest& request, const Roadmap& roadmap, const Environment& env,
                const SimulationSetup& setup, const PlannerParams& params) {
  params.validate();
  if (roadmap.empty()) throw GraphError("plan on an empty roadmap");
  if (!env.bounds.contains(request.start) || !env.bounds.contains(request.goal)) {
    throw ValidationError("start and goal must lie within the environment bounds");
  }

  PlanResult result;
  result.start = request.start;
  result.goal = request.goal;
  result.roadmap = roadmap;
  const Snap start_snap = result.roadmap.snap(request.start);
  result.start_vertex = result.roadmap.split_edge(start_snap.edge, start_snap.point);
  const Snap goal_snap = result.roadmap.snap(request.goal);
  result.goal_vertex = result.roadmap.split_edge(goal_snap.edge, goal_snap.point);
  const Roadmap& graph = result.roadmap;
  const Point start_pos = graph.vertex(result.start_vertex).position;
  const Point goal_pos = graph.vertex(result.goal_vertex).position;

  double heading = 0.0;
  if (request.start_heading) {
    heading = *request.start_heading;
  } else if ((goal_pos - start_pos).norm() > 0.0) {
    heading = std::atan2(goal_pos.y() - start_pos.y(), goal_pos.x() - start_pos.x());
  }
  result.initial = initial_snapshot(setup, Pose(start_pos.x(), start_pos.y(), heading));

  const int threads = resolve_threads(params.threads);
  std::vector<Frame> stack;
  std::vector<int> lineage;
  std::vector<Trajectory> lineage_traces;
  std::vector<std::size_t> lineage_records;  // evaluation index per accepted edge

  auto push_frame = [&](int vertex, Snapshot snap) {
    lineage.push_back(vertex);
    PlanNode node;
    const std::size_t w = std::min<std::size_t>(lineage.size(), static_cast<std::size_t>(params.node_length));
    node.window.assign(lineage.end() - static_cast<std::ptrdiff_t>(w), lineage.end());
    node.parent = stack.empty() ? -1 : stack.back().node;
    result.nodes.push_back(std::move(node));

    Frame f;
    f.vertex = vertex;
    f.node = static_cast<int>(result.nodes.size()) - 1;
    f.snapshot = std::move(snap);
    for (const Neighbor& n : graph.neighbors(vertex, goal_pos)) {
      if (std::find(lineage.begin(), lineage.end(), n.vertex) == lineage.end()) f.children.push_back(n);
    }
    f.outcomes.resize(f.children.size());
    stack.push_back(std::move(f));
  };

  // Parent snapshot rebuilt from the initial state along the accepted lineage.
  auto resimulate = [&](std::size_t depth) {
    Snapshot snap = result.initial;
    for (std::size_t k = 0; k + 1 <= depth; ++k) {
      snap = evaluate_edge(snap, graph.vertex(lineage[k]).position, graph.vertex(lineage[k + 1]).position, env,
                           setup, params)
                 .end;
    }
    return snap;
  };

  std::vector<int> best_lineage{result.start_vertex};
  double best_distance = (start_pos - goal_pos).norm();

  push_frame(result.start_vertex, result.initial);
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.vertex == result.goal_vertex) {
      result.success = true;
      break;
    }
    if (top.next >= top.children.size()) {
      // Node exhausted: discard it and resume at the parent's snapshot.
      stack.pop_back();
      lineage.pop_back();
      if (stack.empty()) break;
      ++result.backtracks;
      result.evaluations[lineage_records.back()].accepted = false;
      lineage_records.pop_back();
      lineage_traces.pop_back();
      if (params.resim_on_backtrack) stack.back().snapshot = resimulate(lineage.size() - 1);
      continue;
    }
    if (result.expansions >= params.max_expansions) {
      result.failure_reason = "expansion limit reached";
      break;
    }

    const std::size_t idx = top.next++;
    if (!top.outcomes[idx]) {
      // Speculatively evaluate this child and the next siblings together.
      const std::size_t last = std::min(top.children.size(), idx + static_cast<std::size_t>(threads));
      std::vector<std::future<EdgeOutcome>> jobs;
      const Point from = graph.vertex(top.vertex).position;
      for (std::size_t k = idx; k < last; ++k) {
        if (top.outcomes[k]) continue;
        const Point to = graph.vertex(top.children[k].vertex).position;
        const Snapshot& snap = top.snapshot;
        jobs.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                                  [&snap, from, to, &env, &setup, &params] {
                                    return evaluate_edge(snap, from, to, env, setup, params);
                                  }));
      }
      std::size_t j = 0;
      for (std::size_t k = idx; k < last; ++k) {
        if (!top.outcomes[k]) top.outcomes[k] = jobs[j++].get();
      }
    }
    ++result.expansions;
    EdgeOutcome outcome = std::move(*top.outcomes[idx]);
    top.outcomes[idx].reset();
    const int child = top.children[idx].vertex;
    result.evaluations.push_back(make_record(top.vertex, child, outcome, top.snapshot.state.time));

    if (outcome.status != EdgeStatus::reached) {
      ++result.backtracks;
      continue;
    }
    result.evaluations.back().accepted = true;
    lineage_records.push_back(result.evaluations.size() - 1);
    lineage_traces.push_back(std::move(outcome.trace));
    push_frame(child, std::move(outcome.end));

    const double d = (graph.vertex(child).position - goal_pos).norm();
    if (d < best_distance) {
      best_distance = d;
      best_lineage = lineage;
    }
  }

  if (result.success) {
    result.vertices = lineage;
    result.edge_traces = std::move(lineage_traces);
  } else {
    if (result.failure_reason.empty()) result.failure_reason = "no path: all expansions exhausted";
    result.vertices = best_lineage;
    for (EdgeRecord& r : result.evaluations) r.accepted = false;
  }
  for (const Trajectory& t : result.edge_traces) {
    result.trajectory.insert(result.trajectory.end(), t.begin(), t.end());
  }
  return result;
}

ReplayResult replay(const PlanResult& result, const Environment& env, const SimulationSetup& setup,
                    const PlannerParams& params) {
  if (!result.success) throw Error("replay needs a successful plan");
  ReplayResult out;
  Snapshot snap = result.initial;
  for (std::size_t k = 0; k + 1 < result.vertices.size(); ++k) {
    const Point from = result.roadmap.vertex(result.vertices[k]).position;
    const Point to = result.roadmap.vertex(result.vertices[k + 1]).position;
    EdgeOutcome o = evaluate_edge(snap, from, to, env, setup, params);
    out.trajectory.insert(out.trajectory.end(), o.trace.begin(), o.trace.end());
    if (o.status != EdgeStatus::reached) {
      out.message = "leg " + std::to_string(result.vertices[k]) + " -> " + std::to_string(result.vertices[k + 1]) +
                    " ended " + to_string(o.status);
      break;
    }
    snap = std::move(o.end);
  }
  out.reached_goal = out.message.empty();

  const std::size_t n = std::min(out.trajectory.size(), result.trajectory.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (!(out.trajectory[k] == result.trajectory[k])) {
      out.divergent_step = k;
      break;
    }
  }
  if (!out.divergent_step && out.trajectory.size() != result.trajectory.size()) out.divergent_step = n;
  if (out.divergent_step && out.message.empty()) {
    out.message = "replay diverged from the planned trajectory at step " + std::to_string(*out.divergent_step);
  }
  return out;
}

std::string save_plan(const PlanResult& result, const std::string& units, const std::string& replay_csv) {
  Json doc;
  doc["units"] = units;
  doc["success"] = result.success;
  doc["failure_reason"] = result.failure_reason;
  doc["start"] = {result.start.x(), result.start.y()};
  doc["goal"] = {result.goal.x(), result.goal.y()};
  doc["start_vertex"] = result.start_vertex;
  doc["goal_vertex"] = result.goal_vertex;
  doc["vertices"] = result.vertices;
  Json positions = Json::array();
  for (int v : result.vertices) {
    const Point p = result.roadmap.vertex(v).position;
    positions.push_back({p.x(), p.y()});
  }
  doc["positions"] = positions;
  doc["expansions"] = result.expansions;
  doc["backtracks"] = result.backtracks;
  Json evals = Json::array();
  for (const EdgeRecord& r : result.evaluations) {
    Json e;
    e["from"] = r.from;
    e["to"] = r.to;
    e["status"] = to_string(r.status);
    e["solver_failure"] = r.solver_failure;
    e["duration"] = r.duration;
    e["min_window_speed"] = std::isnan(r.min_window_speed) ? Json(nullptr) : Json(r.min_window_speed);
    e["accepted"] = r.accepted;
    evals.push_back(std::move(e));
  }
  doc["evaluations"] = evals;
  doc["replay_csv"] = replay_csv.empty() ? Json() : Json(replay_csv);
  return doc.dump(2) + "\n";
}

}  // namespace serpent
