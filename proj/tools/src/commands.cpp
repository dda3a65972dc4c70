#include "serpent/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "serpent/cli/run_config.hpp"
#include "serpent/environment.hpp"
#include "serpent/errors.hpp"
#include "serpent/json_fields.hpp"
#include "serpent/planner.hpp"
#include "serpent/presets.hpp"
#include "serpent/roadmap.hpp"
#include "serpent/svg.hpp"

namespace serpent::cli {

namespace fs = std::filesystem;

namespace {

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw ValidationError(what + ": expected a number, got '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string fmt(const Point& p) { return "(" + fmt(p.x()) + ", " + fmt(p.y()) + ")"; }

// --- gen ---------------------------------------------------------------------

struct GenArgs {
  std::string grid;
  double spacing = 10.0;
  std::uint64_t seed = 0;
  double jitter = 0.0;
  double diameter = 4.0;
  double k_height = FieldParams{}.k_height;
  double amplitude = FieldParams{}.amplitude;
  std::string preset;
  double d = 10.0;
  std::string out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  Environment env;
  if (!a.preset.empty()) {
    const Scenario sc = preset(a.preset, a.d);
    env = sc.env;
    out << "preset " << sc.name << ": start " << fmt(sc.start) << ", goal " << fmt(sc.goal) << "\n";
  } else {
    const std::vector<std::string> rc = split(a.grid, 'x');
    if (rc.size() != 2) throw ValidationError("--grid: expected ROWSxCOLS, got '" + a.grid + "'");
    GridSpec g;
    const double rows = parse_number(rc[0], "--grid rows");
    const double cols = parse_number(rc[1], "--grid cols");
    if (rows != std::floor(rows) || cols != std::floor(cols) || rows < 1 || cols < 1) {
      throw ValidationError("--grid: rows and cols must be positive integers");
    }
    g.rows = static_cast<int>(rows);
    g.cols = static_cast<int>(cols);
    g.spacing = a.spacing;
    g.seed = a.seed;
    g.jitter = a.jitter;
    g.diameter = a.diameter;
    g.field.k_height = a.k_height;
    g.field.amplitude = a.amplitude;
    env = generate_grid(g);
  }
  write_text_file_atomic(a.out, save_environment(env));
  out << "wrote " << a.out << ": " << env.pegs.size() << " pegs, units " << env.units << "\n";
  return kSuccess;
}

// --- gvg ---------------------------------------------------------------------

struct GvgArgs {
  std::string env;
  std::string out;
  bool verify = false;
  std::string svg;
};

int cmd_gvg(const GvgArgs& a, std::ostream& out, std::ostream& err) {
  const Environment env = load_environment_file(a.env);
  const Roadmap rm = build_roadmap(env);
  write_text_file_atomic(a.out, save_roadmap(rm, env.units));
  out << "roadmap: " << rm.vertices().size() << " vertices, " << rm.edges().size() << " edges\n";
  if (!a.svg.empty()) {
    PlotSpec spec;
    spec.layers = {Layer::pegs, Layer::roadmap};
    write_text_file_atomic(a.svg, render_svg({&env, &rm, nullptr, {}}, spec));
  }
  if (a.verify) {
    const std::string problem = verify_roadmap(rm, env);
    if (!problem.empty()) {
      err << "verify failed: " << problem << "\n";
      return kError;
    }
    out << "verify: ok\n";
  }
  return kSuccess;
}

// --- shared run-config plumbing ---------------------------------------------

struct RunArgs {
  std::string config;
  std::string env;
  std::string preset;
  double d = 10.0;
  std::string start;
  std::string goal;
  std::vector<std::string> path;
  std::optional<double> heading;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::optional<double> threshold;
  std::optional<int> max_expansions;
  std::optional<int> threads;
  std::string out;
};

struct Resolved {
  RunConfig config;
  Environment env;
};

// Defaults, then the preset, then the config file, then flags.
Resolved resolve(const RunArgs& a) {
  Resolved r;
  if (!a.config.empty()) {
    r.config = load_run_config(a.config);
  }
  if (!a.preset.empty()) {
    const Scenario sc = preset(a.preset, a.d);
    r.env = sc.env;
    r.config.start = sc.start;
    r.config.goal = sc.goal;
    if (sc.speed_threshold) r.config.planner.speed_threshold = *sc.speed_threshold;
  } else {
    if (!a.env.empty()) r.config.environment = a.env;
    if (r.config.environment.empty()) throw ValidationError("no environment: pass --env, --preset or --config");
    if (!fs::exists(r.config.environment)) {
      throw ValidationError("environment: file not found: " + r.config.environment);
    }
    r.env = load_environment_file(r.config.environment);
  }
  if (!a.start.empty()) r.config.start = parse_point(a.start);
  if (!a.goal.empty()) r.config.goal = parse_point(a.goal);
  if (!a.path.empty()) {
    r.config.path.clear();
    for (const std::string& p : a.path) r.config.path.push_back(parse_point(p));
  }
  if (a.heading) r.config.heading = *a.heading;
  if (a.t_end) r.config.t_end = *a.t_end;
  if (a.dt) r.config.dt = *a.dt;
  if (a.threshold) r.config.planner.speed_threshold = *a.threshold;
  if (a.max_expansions) r.config.planner.max_expansions = *a.max_expansions;
  if (a.threads) r.config.planner.threads = *a.threads;
  if (!a.out.empty()) r.config.output_dir = a.out;
  r.config.validate();
  return r;
}

SimulationSetup setup_for(const RunConfig& c) {
  SimulationSetup s;
  s.robot = c.robot;
  s.controller = c.controller;
  s.dt = c.dt;
  return s;
}

// --- sim ---------------------------------------------------------------------

int cmd_sim(const RunArgs& a, std::ostream& out, std::ostream& err) {
  if (a.out.empty()) throw ValidationError("sim needs --out FILE");
  RunArgs args = a;
  args.out.clear();
  const Resolved r = resolve(args);
  const RunConfig& c = r.config;

  Point start = c.start.value_or(c.path.empty() ? Point::Zero() : c.path.front());
  double heading = 0.0;
  if (c.heading) {
    heading = *c.heading;
  } else if (c.path.size() >= 2) {
    const Point d = c.path[1] - c.path[0];
    heading = std::atan2(d.y(), d.x());
  }
  const SimState initial{Pose(start.x(), start.y(), heading), Shape::straight(c.robot), 0.0};

  CommandSource source;
  PathFollower follower;
  WaveState wave;
  if (!c.path.empty()) {
    follower = PathFollower(c.robot, c.controller, c.dt, Polyline(c.path), initial.shape.alpha);
    source = [&](const SimState& s) { return follower.command(s); };
  } else {
    // Free swimming: the traveling wave with no steering.
    c.controller.validate(c.dt);
    wave = WaveState(initial.shape.alpha, c.dt, c.controller.shift_interval);
    source = [&](const SimState& s) {
      return propagate_wave(wave, compose_head_command(s.time, 0.0, c.controller, c.robot.joint_limit));
    };
  }

  Trajectory traj;
  try {
    traj = run(initial, source, r.env, c.robot, c.dt, c.t_end);
  } catch (const SolverError& e) {
    err << "solver failure at t=" << fmt(e.time()) << ": " << e.what() << "\n";
    return kError;
  }
  write_text_file_atomic(a.out, trajectory_csv(traj, c.robot.joint_count()));
  double mean = 0.0;
  for (const StepRecord& rec : traj) mean += rec.com_speed;
  if (!traj.empty()) mean /= static_cast<double>(traj.size());
  out << "steps: " << traj.size() << "\n";
  out << "mean COM speed: " << std::setprecision(9) << mean << " " << r.env.units << "/s\n";
  return kSuccess;
}

// --- plan --------------------------------------------------------------------

int cmd_plan(const RunArgs& a, std::ostream& out, std::ostream& err) {
  Resolved r = resolve(a);
  RunConfig& c = r.config;
  if (!c.start || !c.goal) throw ValidationError("plan needs a start and a goal (--start X,Y --goal X,Y)");
  const fs::path dir(c.output_dir);
  if (!a.preset.empty()) {
    c.environment = (dir / "environment.json").string();
    write_text_file_atomic(c.environment, save_environment(r.env));
  }
  // Paths in the echoed config are relative to the config itself, so the file
  // does not depend on where the output directory lives.
  RunConfig echo = c;
  echo.output_dir = ".";
  const fs::path env_rel = fs::absolute(c.environment).lexically_relative(fs::absolute(dir));
  if (!env_rel.empty()) echo.environment = env_rel.generic_string();
  write_text_file_atomic((dir / "config.json").string(), save_run_config(echo));

  const SimulationSetup setup = setup_for(c);
  PlannerParams params = c.planner;
  params.threads = effective_threads(params.threads);

  const Roadmap roadmap = build_roadmap(r.env);
  PlanRequest request;
  request.start = *c.start;
  request.goal = *c.goal;
  request.start_heading = c.heading;
  const PlanResult result = plan(request, roadmap, r.env, setup, params);

  std::string replay_name;
  if (result.success) {
    const ReplayResult rep = replay(result, r.env, setup, params);
    if (!rep.reached_goal || rep.divergent_step) {
      err << "replay diverged"
          << (rep.divergent_step ? " at step " + std::to_string(*rep.divergent_step) : std::string())
          << ": " << rep.message << "\n";
      return kError;
    }
    replay_name = "replay.csv";
    write_text_file_atomic((dir / replay_name).string(), trajectory_csv(rep.trajectory, c.robot.joint_count()));
  }
  write_text_file_atomic((dir / "roadmap.json").string(), save_roadmap(result.roadmap, r.env.units));
  write_text_file_atomic((dir / "plan.json").string(), save_plan(result, r.env.units, replay_name));

  PlotInputs inputs{&r.env, &result.roadmap, &result.trajectory, {}};
  for (int v : result.vertices) inputs.plan.push_back(result.roadmap.vertex(v).position);
  PlotSpec spec;
  spec.layers = {Layer::pegs, Layer::roadmap};
  if (!result.trajectory.empty()) spec.layers.push_back(Layer::trajectory);
  if (!inputs.plan.empty()) spec.layers.push_back(Layer::plan);
  write_text_file_atomic((dir / "plot.svg").string(), render_svg(inputs, spec));

  out << "plan: " << (result.success ? "success" : "failure: " + result.failure_reason) << "\n";
  out << "vertices: " << result.vertices.size() << ", expansions: " << result.expansions
      << ", backtracks: " << result.backtracks << "\n";
  out << "outputs in " << dir.string() << " (units " << r.env.units << ")\n";
  return result.success ? kSuccess : kPlannerFailure;
}

// --- plot --------------------------------------------------------------------

struct PlotArgs {
  std::string env;
  std::string roadmap;
  std::string trajectory;
  std::string plan;
  std::string layers = "pegs";
  int width = 800;
  double scale = 0.0;
  int resolution = 200;
  std::string out;
};

int cmd_plot(const PlotArgs& a, std::ostream& out, std::ostream& err) {
  PlotSpec spec;
  spec.layers.clear();
  for (const std::string& name : split(a.layers, ',')) spec.layers.push_back(parse_layer(name));
  spec.width = a.width;
  spec.scale = a.scale;
  spec.heatmap_resolution = a.resolution;
  spec.validate();

  // Collect every missing input before failing.
  std::vector<std::string> missing;
  auto need = [&](bool wanted, const std::string& path, const std::string& flag) {
    if (!wanted) return;
    if (path.empty()) {
      missing.push_back(flag + " (required by the requested layers)");
    } else if (!fs::exists(path)) {
      missing.push_back(path);
    }
  };
  need(true, a.env, "--env");
  need(spec.has(Layer::roadmap), a.roadmap, "--roadmap");
  need(spec.has(Layer::trajectory), a.trajectory, "--trajectory");
  need(spec.has(Layer::plan), a.plan, "--plan");
  if (!missing.empty()) {
    err << "missing input:";
    for (const std::string& m : missing) err << "\n  " << m;
    err << "\n";
    return kError;
  }

  const Environment env = load_environment_file(a.env);
  Roadmap rm;
  Trajectory traj;
  PlotInputs inputs{&env, nullptr, nullptr, {}};
  if (spec.has(Layer::roadmap)) {
    rm = load_roadmap(read_text_file(a.roadmap));
    inputs.roadmap = &rm;
  }
  if (spec.has(Layer::trajectory)) {
    traj = parse_trajectory_csv(read_text_file(a.trajectory));
    inputs.trajectory = &traj;
  }
  if (spec.has(Layer::plan)) inputs.plan = parse_plan_positions(read_text_file(a.plan));
  write_text_file_atomic(a.out, render_svg(inputs, spec));
  out << "wrote " << a.out << "\n";
  return kSuccess;
}

// Runs a command body, mapping library errors onto exit code 1.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: parse: " << e.what() << "\n";
  } catch (const ValidationError& e) {
    err << "error: invalid input: " << e.what() << "\n";
  } catch (const SolverError& e) {
    err << "error: solver failure at t=" << fmt(e.time()) << ": " << e.what() << "\n";
  } catch (const GraphError& e) {
    err << "error: roadmap: " << e.what() << "\n";
  } catch (const fs::filesystem_error& e) {
    err << "error: io: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kError;
}

}  // namespace

Point parse_point(const std::string& text) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() != 2) throw ValidationError("expected X,Y, got '" + text + "'");
  return {parse_number(parts[0], "x"), parse_number(parts[1], "y")};
}

int effective_threads(int requested) {
  const int hw = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  int n = requested > 0 ? requested : hw;
  if (const char* cap = std::getenv("SERPENT_SIM_THREADS")) {
    const double v = parse_number(cap, "SERPENT_SIM_THREADS");
    if (v < 0 || v != std::floor(v)) throw ValidationError("SERPENT_SIM_THREADS must be a non-negative integer");
    n = std::min(n, v > 0 ? static_cast<int>(v) : hw);
  }
  return n;
}

Trajectory parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trajectory", "empty file");
  const std::vector<std::string> header = split(line, ',');
  std::map<std::string, std::size_t> col;
  for (std::size_t k = 0; k < header.size(); ++k) col[header[k]] = k;
  for (const char* name : {"time", "x", "y", "theta", "com_x", "com_y", "com_speed"}) {
    if (!col.contains(name)) throw ParseError("trajectory", std::string("missing column ") + name);
  }
  std::vector<std::size_t> alpha_cols;
  for (int j = 0; col.contains("alpha_" + std::to_string(j)); ++j) alpha_cols.push_back(col["alpha_" + std::to_string(j)]);

  Trajectory traj;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != header.size()) {
      throw ParseError("trajectory line " + std::to_string(row), "expected " + std::to_string(header.size()) + " fields");
    }
    auto get = [&](const char* name) { return parse_number(f[col.at(name)], name); };
    StepRecord r;
    r.time = get("time");
    r.head_world = Pose(get("x"), get("y"), get("theta"));
    r.com = {get("com_x"), get("com_y")};
    r.com_speed = get("com_speed");
    r.alpha.resize(static_cast<Eigen::Index>(alpha_cols.size()));
    for (std::size_t j = 0; j < alpha_cols.size(); ++j) r.alpha[static_cast<Eigen::Index>(j)] = parse_number(f[alpha_cols[j]], "alpha");
    traj.push_back(r);
  }
  return traj;
}

std::vector<Point> parse_plan_positions(const std::string& text) {
  const Json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("positions") || !doc["positions"].is_array()) {
    throw ParseError("positions", "expected an array of [x, y]");
  }
  std::vector<Point> pts;
  for (const Json& p : doc["positions"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ParseError("positions", "expected [x, y]");
    }
    pts.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return pts;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Snake robot locomotion and roadmap planning among pegs", "serpent"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Write a peg environment (grid or preset)");
  auto* grid_opt = gen_cmd->add_option("--grid", gen.grid, "Grid size ROWSxCOLS");
  gen_cmd->add_option("--spacing", gen.spacing, "Grid spacing")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Jitter seed");
  gen_cmd->add_option("--jitter", gen.jitter, "Max offset per axis, as a fraction of spacing")->check(CLI::Range(0.0, 0.25));
  gen_cmd->add_option("--diameter", gen.diameter, "Peg diameter")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--k-height", gen.k_height, "Baseline lateral drag ratio");
  gen_cmd->add_option("--amplitude", gen.amplitude, "Per-peg drag hump height");
  auto* preset_opt = gen_cmd->add_option("--preset", gen.preset, "fig16, y or corridor")
                         ->check(CLI::IsMember(preset_names()));
  gen_cmd->add_option("--d", gen.d, "fig16 peg-pair distance");
  gen_cmd->add_option("--out", gen.out, "Environment file to write")->required();
  grid_opt->excludes(preset_opt);
  preset_opt->excludes(grid_opt);

  GvgArgs gvg;
  CLI::App* gvg_cmd = app.add_subcommand("gvg", "Build the Voronoi roadmap of an environment");
  gvg_cmd->add_option("env", gvg.env, "Environment file")->required();
  gvg_cmd->add_option("--out", gvg.out, "Roadmap file to write")->required();
  gvg_cmd->add_flag("--verify", gvg.verify, "Check the roadmap against brute-force sampling");
  gvg_cmd->add_option("--svg", gvg.svg, "Also draw pegs and roadmap to this SVG");

  auto add_run_options = [](CLI::App* cmd, RunArgs& r) {
    auto* cfg = cmd->add_option("--config", r.config, "Run configuration file");
    auto* env = cmd->add_option("--env", r.env, "Environment file (overrides the config)");
    cmd->add_option("--start", r.start, "Start point X,Y");
    cmd->add_option("--heading", r.heading, "Initial head heading, radians");
    cmd->add_option("--dt", r.dt, "Time step, seconds");
    return std::pair{cfg, env};
  };

  RunArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("sim", "Run one closed-loop simulation");
  add_run_options(sim_cmd, sim);
  sim_cmd->add_option("--path", sim.path, "Path points X,Y ... (free swim when omitted)");
  sim_cmd->add_option("--t-end", sim.t_end, "Duration, seconds");
  sim_cmd->add_option("--out", sim.out, "Trajectory CSV to write")->required();

  RunArgs pl;
  CLI::App* plan_cmd = app.add_subcommand("plan", "Build the roadmap, plan, replay and plot");
  auto [plan_cfg, plan_env] = add_run_options(plan_cmd, pl);
  auto* plan_preset = plan_cmd->add_option("--preset", pl.preset, "Use a preset environment with its start and goal")
                          ->check(CLI::IsMember(preset_names()));
  plan_cmd->add_option("--d", pl.d, "fig16 peg-pair distance");
  plan_cmd->add_option("--goal", pl.goal, "Goal point X,Y");
  plan_cmd->add_option("--threshold", pl.threshold, "Planner speed threshold");
  plan_cmd->add_option("--max-expansions", pl.max_expansions, "Planner expansion limit");
  plan_cmd->add_option("--threads", pl.threads, "Speculative evaluation threads, 0 = auto");
  plan_cmd->add_option("--out", pl.out, "Output directory");
  plan_preset->excludes(plan_cfg)->excludes(plan_env);

  PlotArgs plot;
  CLI::App* plot_cmd = app.add_subcommand("plot", "Draw an environment and run artifacts to SVG");
  plot_cmd->add_option("--env", plot.env, "Environment file");
  plot_cmd->add_option("--roadmap", plot.roadmap, "Roadmap file");
  plot_cmd->add_option("--trajectory", plot.trajectory, "Trajectory CSV");
  plot_cmd->add_option("--plan", plot.plan, "Plan file");
  plot_cmd->add_option("--layers", plot.layers, "Comma-separated: pegs,field,roadmap,trajectory,plan");
  plot_cmd->add_option("--width", plot.width, "Canvas width in pixels");
  plot_cmd->add_option("--scale", plot.scale, "Pixels per length unit, 0 = fit width");
  plot_cmd->add_option("--resolution", plot.resolution, "Heatmap samples per axis");
  plot_cmd->add_option("--out", plot.out, "SVG file to write")->required();

  std::vector<std::string> argv_store{"serpent"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kError;
  }

  if (gen_cmd->parsed()) {
    return guarded(err, [&] {
      if (gen.preset.empty() && gen.grid.empty()) throw ValidationError("gen needs --grid or --preset");
      return cmd_gen(gen, out);
    });
  }
  if (gvg_cmd->parsed()) return guarded(err, [&] { return cmd_gvg(gvg, out, err); });
  if (sim_cmd->parsed()) return guarded(err, [&] { return cmd_sim(sim, out, err); });
  if (plan_cmd->parsed()) return guarded(err, [&] { return cmd_plan(pl, out, err); });
  return guarded(err, [&] { return cmd_plot(plot, out, err); });
}

}  // namespace serpent::cli
