#include <random>

#include <benchmark/benchmark.h>

#include "serpent/locomotion.hpp"
#include "serpent/planner.hpp"
#include "serpent/presets.hpp"
#include "serpent/roadmap.hpp"

namespace {

using namespace serpent;

Environment random_env(int pegs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-25, 25);
  Environment env;
  env.bounds = {-25, 25, -25, 25};
  for (int k = 0; k < pegs; ++k) env.pegs.push_back({u(rng), u(rng), 4.0});
  return env;
}

void BM_AssembleBalance(benchmark::State& state) {
  const RobotParams p;
  const Environment env = random_env(static_cast<int>(state.range(0)), 1);
  Shape s = Shape::straight(p);
  s.alpha.setConstant(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_balance(p, s, env, Pose::identity()));
}
BENCHMARK(BM_AssembleBalance)->Arg(10)->Arg(40)->Arg(160);

void BM_Step(benchmark::State& state) {
  const RobotParams p;
  const Environment env = random_env(40, 2);
  SimState s{Pose::identity(), Shape::straight(p), 0};
  Eigen::VectorXd cmd = Eigen::VectorXd::Constant(p.joint_count(), 0.1);
  for (auto _ : state) {
    cmd = -cmd;
    s = step(s, cmd, env, p, 0.05).state;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Step);

void BM_BuildRoadmap(benchmark::State& state) {
  const Environment env = random_env(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(build_roadmap(env));
}
BENCHMARK(BM_BuildRoadmap)->Arg(30)->Arg(100)->Arg(300);

void BM_PlanPreset(benchmark::State& state, const char* name) {
  const Scenario sc = preset(name);
  SimulationSetup setup;
  setup.controller = ControllerParams::defaults_for(setup.robot);
  PlannerParams params = PlannerParams::defaults_for(setup.robot);
  if (sc.speed_threshold) params.speed_threshold = *sc.speed_threshold;
  const Roadmap roadmap = build_roadmap(sc.env);
  for (auto _ : state) benchmark::DoNotOptimize(plan({sc.start, sc.goal, std::nullopt}, roadmap, sc.env, setup, params));
}
BENCHMARK_CAPTURE(BM_PlanPreset, fig16, "fig16")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_PlanPreset, y, "y")->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
