#include <benchmark/benchmark.h>

#include "tethersim/governor.hpp"
#include "tethersim/simulation.hpp"

using namespace tethersim;

namespace {

CascadeConfig bench_config() {
  CascadeConfig cc;
  cc.plant.mass = 1.0;
  cc.plant.inertia = Vec3(0.02, 0.02, 0.04).asDiagonal();
  cc.plant.cable_length = 1.0;
  cc.plant.gravity = 9.81;
  cc.plant.thrust_max = 30.0;
  cc.plant.tension_min = 0.5;
  cc.outer.kp = 4.0;
  cc.outer.kd = 3.0;
  cc.outer.pull = 2.0;
  cc.outer.gravity_comp = 9.81;
  cc.inner.kp = 100.0;
  cc.inner.kd = 20.0;
  return cc;
}

UavState offset_state() {
  UavState s;
  s.p = Vec3(std::sin(0.8), 0.0, std::cos(0.8));
  return s;
}

void BM_PlantStep(benchmark::State& state) {
  const CascadeConfig cc = bench_config();
  UavState s = offset_state();
  ControlCommand cmd;
  cmd.thrust = 11.0;
  cmd.torque = Vec3(0.001, -0.002, 0.0005);
  for (auto _ : state) {
    s = step(s, cmd, 1e-3, cc.plant);
    benchmark::DoNotOptimize(s.p);
  }
}
BENCHMARK(BM_PlantStep);

void BM_CascadeStep(benchmark::State& state) {
  CascadeLoop loop(bench_config());
  UavState s = offset_state();
  const Vec3 target(0, 0, 1);
  for (auto _ : state) {
    loop.step(s, target, 1e-3);
    benchmark::DoNotOptimize(s.p);
  }
}
BENCHMARK(BM_CascadeStep);

void BM_TensionPrediction(benchmark::State& state) {
  CascadeLoop loop(bench_config());
  const UavState s = offset_state();
  const Vec3 target(0, 0, 1);
  for (auto _ : state) {
    const TensionPrediction pred =
        predict_min_tension(loop, s, target, 1.0, 5e-3);
    benchmark::DoNotOptimize(pred.min_tension);
  }
}
BENCHMARK(BM_TensionPrediction);

void BM_TrajectoryAudit(benchmark::State& state) {
  Scenario sc;
  sc.initial.p = Vec3(std::sin(0.5), 0, std::cos(0.5));
  sc.duration = 2.0;
  const RunResult r = run_scenario(sc);

  AuditConfig cfg;
  cfg.plant = sc.plant;
  cfg.outer_cert = resolve_outer_certificate(sc);
  for (auto _ : state) {
    const CertificateReport rep = trajectory_audit(r.log, cfg);
    benchmark::DoNotOptimize(rep.properties.size());
  }
}
BENCHMARK(BM_TrajectoryAudit);

}  // namespace

BENCHMARK_MAIN();
