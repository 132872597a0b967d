#include "gbec/pipelines.hpp"
#include "gbec/registration.hpp"
#include "gbec/simulator.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace gbec {
namespace {

void BM_PairedPoint(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  const RigidTransform t(random_rotation(rng), Vector3(10, 20, 30));
  PointCloud model, measured;
  for (int i = 0; i < state.range(0); ++i) {
    const Point3 p(u(rng), u(rng), u(rng));
    model.points.push_back(p);
    measured.points.push_back(apply(t, p));
  }
  for (auto _ : state) benchmark::DoNotOptimize(solve_paired_point(model, measured));
}
BENCHMARK(BM_PairedPoint)->Arg(16)->Arg(128)->Arg(1024);

void BM_FitLine(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 0.3);
  PointCloud pts;
  for (int i = 0; i < state.range(0); ++i) pts.points.push_back(Point3(0.5 * i, n(rng), n(rng)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_line(pts));
}
BENCHMARK(BM_FitLine)->Arg(52)->Arg(1000);

void BM_Axxb(benchmark::State& state) {
  const SceneTruth scene = default_scene(default_tms_holder());
  WorkspaceSpec ws;
  ws.n_poses = static_cast<std::size_t>(state.range(0));
  NoiseSpec noise;
  noise.seed = 3;
  const auto pairs = build_motion_pairs(simulate_pose_stream(scene, ws, noise));
  for (auto _ : state) benchmark::DoNotOptimize(solve_axxb(pairs));
}
BENCHMARK(BM_Axxb)->Arg(50)->Arg(200);

void BM_Gbec(benchmark::State& state) {
  const SceneTruth scene = default_scene(default_tms_holder());
  NoiseSpec noise;
  noise.seed = 4;
  const DigitizationSet dig = simulate_digitization(scene, noise);
  for (auto _ : state) benchmark::DoNotOptimize(run_gbec(scene.attachment, dig));
}
BENCHMARK(BM_Gbec);

void BM_SimulateDigitization(benchmark::State& state) {
  const SceneTruth scene = default_scene(default_tms_holder());
  NoiseSpec noise;
  for (auto _ : state) {
    noise.seed++;
    benchmark::DoNotOptimize(simulate_digitization(scene, noise));
  }
}
BENCHMARK(BM_SimulateDigitization);

}  // namespace
}  // namespace gbec

BENCHMARK_MAIN();
