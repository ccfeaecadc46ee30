// Acceptance suite: one test per criterion, one [PASS]/[FAIL] line each.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tethersim/governor.hpp"
#include "tethersim/simulation.hpp"

using namespace tethersim;

namespace {

Scenario base_scenario() {
  Scenario sc;
  sc.plant.mass = 1.0;
  sc.plant.inertia = Vec3(0.02, 0.02, 0.04).asDiagonal();
  sc.plant.cable_length = 1.0;
  sc.plant.gravity = 9.81;
  sc.plant.thrust_max = 30.0;
  sc.plant.tension_min = 0.5;
  sc.outer.kp = 4.0;
  sc.outer.kd = 3.0;
  sc.outer.pull = 2.0;
  sc.outer.gravity_comp = 9.81;
  sc.outer.mu = 1e-6;
  sc.inner.kp = 100.0;
  sc.inner.kd = 20.0;
  sc.initial.p = Vec3(0, 0, 1);
  sc.p_d = Vec3(0, 0, 1);
  sc.duration = 20.0;
  sc.dt = 1e-3;
  sc.seed = 1;
  return sc;
}

Vec3 on_sphere(double angle_rad, double azimuth_rad = 0.0) {
  return {std::sin(angle_rad) * std::cos(azimuth_rad),
          std::sin(angle_rad) * std::sin(azimuth_rad), std::cos(angle_rad)};
}

void verdict(int num, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %02d - %s (%s)\n", ok ? "PASS" : "FAIL", num,
              name, detail.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(ok, "criterion ", num, ": ", name, " | ", detail);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Shared aggressive-step scenario for the governor comparison: strong
/// tangential gain, tight thrust ceiling and a slow inner loop make the
/// ungoverned transient lose cable tension.
Scenario aggressive_scenario() {
  Scenario sc = base_scenario();
  sc.outer.kp = 8.0;
  sc.outer.kd = 3.0;
  sc.plant.thrust_max = 16.0;
  sc.inner.kp = 25.0;
  sc.inner.kd = 2.0 * std::sqrt(25.0);
  sc.initial.p = on_sphere(0.0);
  sc.p_d = on_sphere(1.92);  // ~110 degrees
  sc.duration = 25.0;
  sc.governor.mode = GovernorMode::rg;
  sc.governor.horizon = 2.0;
  sc.governor.dt_pred = 1e-3;  // matches the plant step
  sc.governor.c_tol = 0.02;
  sc.governor.kappa = 0.4;
  sc.governor.eps_margin = 0.3;
  sc.governor.period_steps = 20;
  return sc;
}

double min_tension_margin(const RunResult& r, double tension_min) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& rec : r.log.records) {
    worst = std::min(worst, rec.tension - tension_min);
  }
  return worst;
}

}  // namespace

TEST_CASE("criterion 1: constraint invariance over 20 s at 1 ms") {
  Scenario sc = base_scenario();
  sc.initial.p = on_sphere(M_PI / 3.0);
  sc.inner.kp = 200.0;
  sc.inner.kd = 2.0 * std::sqrt(200.0);

  const RunResult r = run_scenario(sc);
  const double length = sc.plant.cable_length;
  double worst_radius = 0.0;
  double worst_tangency = 0.0;
  for (const auto& rec : r.log.records) {
    worst_radius = std::max(worst_radius,
                            std::abs(rec.p.norm() - length) / length);
    worst_tangency =
        std::max(worst_tangency, std::abs(rec.p.dot(rec.v)) /
                                     (length * std::max(rec.v.norm(), 1.0)));
  }
  const bool ok = !r.log.diverged && worst_radius <= 1e-9 &&
                  worst_tangency <= 1e-6;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "max | ||p||-L |/L = %.3e, max |<p,v>| rel = %.3e",
                worst_radius, worst_tangency);
  verdict(1, "constraint invariance", ok, buf);
}

TEST_CASE("criterion 2: hover equilibrium reproduces the control law exactly") {
  Scenario sc = base_scenario();
  sc.ideal_attitude = true;
  sc.duration = 5.0;

  const RunResult r = run_scenario(sc);
  const double t_hover = sc.plant.mass * sc.plant.gravity + sc.outer.pull;
  double worst_thrust = 0.0;
  double worst_tension = 0.0;
  double worst_torque = 0.0;
  double worst_drift = 0.0;
  for (const auto& rec : r.log.records) {
    worst_thrust = std::max(worst_thrust, std::abs(rec.thrust_pre - t_hover));
    worst_tension = std::max(worst_tension, std::abs(rec.tension - sc.outer.pull));
    worst_torque = std::max(worst_torque, rec.torque.norm());
    worst_drift = std::max(worst_drift, (rec.p - sc.p_d).norm());
  }
  const bool ok = worst_thrust == 0.0 && worst_tension == 0.0 &&
                  worst_torque == 0.0 && worst_drift <= 1e-9 &&
                  r.report.all_pass();
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "|T-(mg+Tp)|=%.1e, |Tc-Tp|=%.1e, ||tau||=%.1e, drift=%.1e",
                worst_thrust, worst_tension, worst_torque, worst_drift);
  verdict(2, "equilibrium reproduction", ok, buf);
}

TEST_CASE("criterion 3: ideal-attitude convergence with monotone V_out") {
  Scenario sc = base_scenario();
  sc.experiment = ExperimentKind::lemma1_ideal;
  sc.duration = 30.0;
  sc.initial.p = on_sphere(M_PI / 2.0);

  const bool feasible = kp_feasible(sc.initial.p, sc.initial.v, sc.p_d,
                                    sc.outer.kp, sc.plant.cable_length);
  const RunResult r = run_scenario(sc);

  double first_below = -1.0;
  for (const auto& rec : r.log.records) {
    if (rec.dist <= 1e-3 * sc.plant.cable_length) {
      first_below = rec.t;
      break;
    }
  }
  const PropertyResult* mono = r.report.find("vout-monotone");
  const bool ok = feasible && first_below >= 0.0 &&
                  r.log.records.back().dist <= 1e-3 &&
                  mono != nullptr && mono->pass;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "kp_feasible=%d, dist<1e-3 at t=%.2f s, final=%.2e, "
                "V_out increases=%zu",
                feasible ? 1 : 0, first_below, r.log.records.back().dist,
                mono ? mono->violations : 999);
  verdict(3, "ideal outer-loop convergence", ok, buf);
}

TEST_CASE("criterion 4: disturbance bound Monte-Carlo, 1e5 samples") {
  Scenario sc = base_scenario();
  sc.exp.mc_samples = 100000;
  sc.seed = 20250809;

  const Lemma2McResult res = run_lemma2_mc(sc);
  const bool ok = res.violations == 0;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "samples=%d, violations=%d, worst margin=%.3e",
                res.samples, res.violations, res.worst_margin);
  verdict(4, "class-K disturbance bound", ok, buf);
}

TEST_CASE("criterion 5: inner gain ladder scaling and forced ISS bound") {
  Scenario sc = base_scenario();
  sc.exp.ladder = {10.0, 100.0, 1000.0, 10000.0};
  sc.exp.ladder_kd_scale = 2.0;
  sc.exp.sin_amplitude = 0.5;
  sc.exp.sin_freq_hz = 1.0;
  sc.exp.forced_duration = 12.0;

  const auto rows = run_gain_ladder(sc);
  REQUIRE(rows.size() == 4);
  bool monotone = true;
  bool bounded = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && !(rows[i].gamma_in < rows[i - 1].gamma_in)) monotone = false;
    if (!rows[i].within_bound) bounded = false;
  }
  const double ratio = rows[3].gamma_in / rows[1].gamma_in;
  const bool ok = monotone && ratio < 0.1 && bounded;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "monotone=%d, gamma(1e4)/gamma(1e2)=%.17g, "
                "steady/bound worst=%.3f",
                monotone ? 1 : 0, ratio,
                [&] {
                  double w = 0.0;
                  for (const auto& row : rows)
                    w = std::max(w, row.steady_zeta / row.bound);
                  return w;
                }());
  verdict(5, "inner-loop asymptotic gain", ok, buf);
}

TEST_CASE("criterion 6: ISS implication over a ten-scenario battery") {
  std::size_t counterexamples = 0;
  std::size_t checked_runs = 0;
  for (int i = 0; i < 10; ++i) {
    Scenario sc = base_scenario();
    const double angle = (10.0 + 5.0 * i) * M_PI / 180.0;
    const double azimuth = 0.6 * i;
    sc.initial.p = on_sphere(angle, azimuth);
    sc.outer.kp = 3.0 + 0.5 * (i % 3);
    sc.outer.kd = 2.5 + 0.25 * (i % 4);
    sc.inner.kp = 200.0;
    sc.inner.kd = 2.0 * std::sqrt(200.0);
    sc.duration = 12.0;

    const RunResult r = run_scenario(sc);
    const PropertyResult* iss = r.report.find("iss-implication");
    REQUIRE(iss != nullptr);
    counterexamples += iss->violations;
    ++checked_runs;
  }
  const bool ok = counterexamples == 0 && checked_runs == 10;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "runs=%zu, counterexample steps=%zu",
                checked_runs, counterexamples);
  verdict(6, "ISS implication battery", ok, buf);
}

TEST_CASE("criterion 7: cascade small-gain stability and low-gain failure") {
  // Empirical outer gain over constant attitude-error levels.
  Scenario probe = base_scenario();
  probe.initial.p = on_sphere(M_PI / 6.0);
  probe.duration = 20.0;
  const double gamma_out =
      estimate_gamma_out(probe, {0.05, 0.1, 0.2});

  Scenario hi = base_scenario();
  hi.inner.kp = 2000.0;
  hi.inner.kd = 2.0 * std::sqrt(2000.0);
  hi.initial.p = on_sphere(M_PI / 3.0);
  hi.duration = 30.0;
  const RunResult rh = run_scenario(hi);
  const double gamma_in = rh.inner_cert.gamma_in;
  const bool small_gain = small_gain_check(gamma_in, gamma_out);
  const bool converged = !rh.log.diverged &&
                         rh.log.records.back().dist <= 1e-3;

  Scenario lo = base_scenario();
  lo.inner.kp = 0.5;
  lo.inner.kd = 2.0 * std::sqrt(0.5);
  lo.initial.p = on_sphere(M_PI / 3.0);
  lo.duration = 20.0;
  const RunResult rl = run_scenario(lo);
  const bool low_gain_breaks = rl.log.diverged || !rl.report.all_pass();
  const bool named = !rl.report.first_broken.empty();

  const bool ok = small_gain && converged && low_gain_breaks && named;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "gamma_in=%.3f, gamma_out=%.3f, product=%.3f, final "
                "dist=%.2e, low-gain first broken='%s'",
                gamma_in, gamma_out, gamma_in * gamma_out,
                rh.log.records.back().dist, rl.report.first_broken.c_str());
  verdict(7, "small-gain cascade", ok, buf);
}

TEST_CASE("criterion 8: governors remove the tension violation") {
  const Scenario governed_rg = aggressive_scenario();

  Scenario ungoverned = governed_rg;
  ungoverned.governor.mode = GovernorMode::off;
  const RunResult ru = run_scenario(ungoverned);
  const double margin_u = min_tension_margin(ru, governed_rg.plant.tension_min);

  const RunResult rg = run_scenario(governed_rg);
  const double margin_rg = min_tension_margin(rg, governed_rg.plant.tension_min);
  const double dist_rg = great_circle_dist(rg.final_p_a, governed_rg.p_d,
                                           governed_rg.plant.cable_length);

  Scenario governed_erg = governed_rg;
  governed_erg.governor.mode = GovernorMode::erg;
  governed_erg.governor.dsm = DsmMode::clamped;
  governed_erg.governor.dt_pred = 2e-3;
  const RunResult re = run_scenario(governed_erg);
  const double margin_erg = min_tension_margin(re, governed_rg.plant.tension_min);
  const double dist_erg = great_circle_dist(re.final_p_a, governed_rg.p_d,
                                            governed_rg.plant.cable_length);

  const bool ok = margin_u < 0.0 && margin_rg >= -1e-6 && margin_erg >= -1e-6 &&
                  dist_rg <= 1e-3 && dist_erg <= 1e-3 && !rg.log.diverged &&
                  !re.log.diverged;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "ungoverned margin=%.3f N, rg margin=%.2e N, erg margin=%.2e N, "
                "dist(p_a,p_d): rg=%.2e, erg=%.2e",
                margin_u, margin_rg, margin_erg, dist_rg, dist_erg);
  verdict(8, "governor constraint enforcement", ok, buf);
}

TEST_CASE("criterion 9: integrator order estimate") {
  const IntegratorOrderResult r = run_integrator_order(base_scenario());
  const bool ok = r.order >= 3.7 && r.order <= 4.3;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "order=%.4f (errors %.3e / %.3e)", r.order,
                r.err_coarse, r.err_fine);
  verdict(9, "integrator order", ok, buf);
}

TEST_CASE("criterion 10: bit-identical telemetry for identical scenario+seed") {
  Scenario sc = base_scenario();
  sc.initial.p = on_sphere(M_PI / 4.0);
  sc.duration = 5.0;
  sc.seed = 4242;

  const std::string dir =
      std::filesystem::temp_directory_path().string() + "/tethersim_acc";
  std::filesystem::create_directories(dir);
  const RunResult a = run_scenario(sc);
  const RunResult b = run_scenario(sc);
  write_telemetry(a.log, dir + "/a.csv");
  write_telemetry(b.log, dir + "/b.csv");
  const std::string ta = read_file(dir + "/a.csv");
  const std::string tb = read_file(dir + "/b.csv");

  const bool ok = !ta.empty() && ta == tb;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "bytes=%zu, identical=%d", ta.size(),
                ok ? 1 : 0);
  verdict(10, "determinism", ok, buf);
}
