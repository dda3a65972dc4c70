#include "serpent/cli/run_config.hpp"

#include <cmath>
#include <filesystem>

#include "serpent/json_fields.hpp"

namespace serpent::cli {

namespace {

Point read_point(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ParseError(path, "expected [x, y]");
  }
  const Point p{v[0].get<double>(), v[1].get<double>()};
  if (!p.allFinite()) throw ParseError(path, "expected finite coordinates");
  return p;
}

Json point_json(const Point& p) { return Json::array({p.x(), p.y()}); }

}  // namespace

void RunConfig::validate() const {
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  if (!(t_end >= 0.0)) throw ValidationError("t_end must be >= 0");
  robot.validate();
  controller.validate(dt);
  planner.validate();
  if (path.size() == 1) throw ValidationError("path needs at least two points");
}

RunConfig parse_run_config(const std::string& text, const std::string& base_dir) {
  const Json doc = parse_json(text);
  ObjectReader root(doc, "");
  RunConfig c;
  c.environment = root.string("environment");
  if (!base_dir.empty() && std::filesystem::path(c.environment).is_relative()) {
    c.environment = (std::filesystem::path(base_dir) / c.environment).lexically_normal().string();
  }

  if (root.has("robot")) {
    ObjectReader r = root.object("robot");
    c.robot.link_count = static_cast<int>(r.integer_or("link_count", c.robot.link_count));
    c.robot.link_length = r.number_or("link_length", c.robot.link_length);
    c.robot.com_offset = r.number_or("com_offset", c.robot.com_offset);
    c.robot.joint_limit = r.number_or("joint_limit", c.robot.joint_limit);
    r.finish();
  }
  c.robot.validate();
  c.controller = ControllerParams::defaults_for(c.robot);
  c.planner = PlannerParams::defaults_for(c.robot);

  if (root.has("controller")) {
    ObjectReader r = root.object("controller");
    ControllerParams& p = c.controller;
    p.p_gain = r.number_or("p_gain", p.p_gain);
    p.d_gain = r.number_or("d_gain", p.d_gain);
    p.los_radius = r.number_or("los_radius", p.los_radius);
    p.wave_amplitude = r.number_or("wave_amplitude", p.wave_amplitude);
    p.wave_frequency = r.number_or("wave_frequency", p.wave_frequency);
    p.shift_interval = r.number_or("shift_interval", p.shift_interval);
    r.finish();
  }
  if (root.has("planner")) {
    ObjectReader r = root.object("planner");
    PlannerParams& p = c.planner;
    p.speed_threshold = r.number_or("speed_threshold", p.speed_threshold);
    p.speed_window = r.number_or("speed_window", p.speed_window);
    p.node_length = static_cast<int>(r.integer_or("node_length", p.node_length));
    p.edge_time_budget = r.number_or("edge_time_budget", p.edge_time_budget);
    p.arrival_radius = r.number_or("arrival_radius", p.arrival_radius);
    p.max_expansions = static_cast<int>(r.integer_or("max_expansions", p.max_expansions));
    p.resim_on_backtrack = r.boolean_or("resim_on_backtrack", p.resim_on_backtrack);
    p.threads = static_cast<int>(r.integer_or("threads", p.threads));
    r.finish();
  }
  c.dt = root.number_or("dt", c.dt);
  c.t_end = root.number_or("t_end", c.t_end);
  c.output_dir = root.string_or("output_dir", c.output_dir);
  if (!base_dir.empty() && std::filesystem::path(c.output_dir).is_relative()) {
    c.output_dir = (std::filesystem::path(base_dir) / c.output_dir).lexically_normal().string();
  }
  const long long seed = root.integer_or("seed", 0);
  if (seed < 0) throw ValidationError("seed must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  if (root.has("start")) c.start = read_point(root.at("start"), "start");
  if (root.has("goal")) c.goal = read_point(root.at("goal"), "goal");
  if (root.has("heading")) c.heading = root.number("heading");
  if (root.has("path")) {
    const Json& p = root.at("path");
    if (!p.is_array()) throw ParseError("path", "expected an array of [x, y]");
    for (std::size_t k = 0; k < p.size(); ++k) c.path.push_back(read_point(p[k], "path[" + std::to_string(k) + "]"));
  }
  root.finish();
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  const std::string dir = std::filesystem::path(path).parent_path().string();
  RunConfig c = parse_run_config(read_text_file(path), dir.empty() ? "." : dir);
  if (!std::filesystem::exists(c.environment)) {
    throw ValidationError("environment: file not found: " + c.environment);
  }
  return c;
}

std::string save_run_config(const RunConfig& c) {
  Json doc;
  doc["environment"] = c.environment;
  doc["robot"] = {{"link_count", c.robot.link_count},
                  {"link_length", c.robot.link_length},
                  {"com_offset", c.robot.com_offset},
                  {"joint_limit", c.robot.joint_limit}};
  doc["controller"] = {{"p_gain", c.controller.p_gain},
                       {"d_gain", c.controller.d_gain},
                       {"los_radius", c.controller.los_radius},
                       {"wave_amplitude", c.controller.wave_amplitude},
                       {"wave_frequency", c.controller.wave_frequency},
                       {"shift_interval", c.controller.shift_interval}};
  doc["planner"] = {{"speed_threshold", c.planner.speed_threshold},
                    {"speed_window", c.planner.speed_window},
                    {"node_length", c.planner.node_length},
                    {"edge_time_budget", c.planner.edge_time_budget},
                    {"arrival_radius", c.planner.arrival_radius},
                    {"max_expansions", c.planner.max_expansions},
                    {"resim_on_backtrack", c.planner.resim_on_backtrack},
                    {"threads", c.planner.threads}};
  doc["dt"] = c.dt;
  doc["t_end"] = c.t_end;
  doc["output_dir"] = c.output_dir;
  doc["seed"] = c.seed;
  if (c.start) doc["start"] = point_json(*c.start);
  if (c.goal) doc["goal"] = point_json(*c.goal);
  if (c.heading) doc["heading"] = *c.heading;
  if (!c.path.empty()) {
    doc["path"] = Json::array();
    for (const Point& p : c.path) doc["path"].push_back(point_json(p));
  }
  return doc.dump(2) + "\n";
}

}  // namespace serpent::cli
