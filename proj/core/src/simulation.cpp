#include "tethersim/simulation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

#include "tethersim/governor.hpp"

namespace tethersim {

namespace {

double lambda_max_of(const Mat3& inertia) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(inertia);
  return es.eigenvalues().maxCoeff();
}

bool state_finite(const UavState& s) {
  return s.p.allFinite() && s.v.allFinite() && s.omega.allFinite() &&
         std::isfinite(s.q.w) && s.q.v.allFinite();
}

}  // namespace

InnerCertificate resolve_inner_certificate(const Scenario& sc) {
  const double lambda_max = lambda_max_of(sc.plant.inertia);
  const double eta = sc.certs.eta
                         ? *sc.certs.eta
                         : 0.5 * eta_max(sc.inner.kp, sc.inner.kd, sc.plant.inertia);
  return inner_gain(sc.inner.kp, sc.inner.kd, eta, lambda_max);
}

OuterCertificate resolve_outer_certificate(const Scenario& sc) {
  const double h_pt = sc.outer.kp / sc.plant.mass;
  const double h_dt = sc.outer.kd / sc.plant.mass;
  const double eps = sc.certs.epsilon ? *sc.certs.epsilon
                                      : default_epsilon(h_pt, h_dt);
  return outer_certificate(h_pt, h_dt, eps, sc.plant.cable_length);
}

RunResult run_scenario(const Scenario& sc) {
  sc.validate();

  RunResult result;
  result.inner_cert = resolve_inner_certificate(sc);
  result.outer_cert = resolve_outer_certificate(sc);

  CascadeConfig cc;
  cc.plant = sc.plant;
  cc.outer = sc.outer;
  cc.inner = sc.inner;
  cc.ideal_attitude = sc.ideal_attitude ||
                      sc.experiment == ExperimentKind::lemma1_ideal;
  CascadeLoop loop(cc);

  const bool governed = sc.governor.mode != GovernorMode::off &&
                        sc.experiment != ExperimentKind::step_ungoverned;
  Vec3 p_a = governed ? Vec3(sc.plant.cable_length * sc.initial.p.normalized())
                      : sc.p_d;

  UavState state = sc.initial;
  const auto n_steps = static_cast<std::size_t>(std::llround(sc.duration / sc.dt));

  TelemetryLog& log = result.log;
  log.scenario_json = sc.to_json();
  log.records.reserve(n_steps + 1);

  const double h_pt = sc.outer.kp / sc.plant.mass;

  const auto make_record = [&](double t, const UavState& s,
                               const CascadeStepInfo& info) {
    TelemetryRecord r;
    r.t = t;
    r.p = s.p;
    r.v = s.v;
    r.q = s.q;
    r.omega = s.omega;
    r.thrust_pre = info.thrust_pre;
    r.thrust_post = info.thrust_post;
    r.torque = info.torque;
    r.tension = info.tension;
    r.multiplier = info.multiplier;
    r.dist = great_circle_dist(s.p, sc.p_d, sc.plant.cable_length);
    r.zeta_err = info.zeta_err;
    r.delta_norm = info.delta.norm();
    r.lemma2 = lemma2_bound(info.thrust_post, info.zeta_err);
    r.p_a = p_a;
    // The inner certificate is oriented for the desired-to-actual error, the
    // conjugate of q_tilde; the cross term is sign-sensitive.
    r.v_in = lyapunov_inner(info.q_tilde.conjugate(), s.omega, sc.inner,
                            result.inner_cert.eta, sc.plant.inertia);
    r.v_out = lyapunov_outer(s.p, s.v, p_a, h_pt, result.outer_cert.epsilon,
                             sc.plant.cable_length);
    r.saturated = info.saturated;
    r.tension_violated = info.tension < sc.plant.tension_min;
    return r;
  };

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * sc.dt;

    if (governed) {
      if (sc.governor.mode == GovernorMode::rg) {
        if (k % static_cast<std::size_t>(sc.governor.period_steps) == 0) {
          p_a = rg_update(sc.governor, loop, state, p_a, sc.p_d);
        }
      } else {
        p_a = erg_step(sc.governor, loop, state, p_a, sc.p_d, sc.dt, sc.plant);
      }
    }

    // control() may override attitude in ideal mode, so the logged state is
    // taken after it.
    const CascadeStepInfo info = loop.control(state, p_a, sc.dt);
    log.records.push_back(make_record(t, state, info));
    loop.advance(state, info, sc.dt);

    if (!state_finite(state)) {
      log.diverged = true;
      log.last_valid = log.records.size() - 1;
      break;
    }
  }

  if (!log.diverged) {
    // Terminal record: command evaluated at the final state, not applied.
    const double t_end = static_cast<double>(n_steps) * sc.dt;
    const CascadeStepInfo info = loop.control(state, p_a, sc.dt);
    log.records.push_back(make_record(t_end, state, info));
    log.last_valid = log.records.size() - 1;
  }

  result.final_state = state;
  result.final_p_a = p_a;

  AuditConfig audit;
  audit.plant = sc.plant;
  audit.outer_cert = result.outer_cert;
  audit.zeta_max = sc.certs.zeta_max;
  audit.thrust_sup = sc.certs.thrust_sup ? *sc.certs.thrust_sup : 0.0;
  audit.enforce_vout_monotone = cc.ideal_attitude;
  audit.gamma_in = result.inner_cert.gamma_in;
  result.report = trajectory_audit(log, audit);
  return result;
}

Lemma2McResult run_lemma2_mc(const Scenario& sc) {
  std::mt19937_64 rng(sc.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  const auto random_unit_quat = [&]() {
    Quaternion q{gauss(rng), Vec3(gauss(rng), gauss(rng), gauss(rng))};
    return q.normalized();
  };

  Lemma2McResult res;
  res.samples = sc.exp.mc_samples;
  res.worst_margin = std::numeric_limits<double>::infinity();
  const double t_hi = 2.0 * sc.plant.mass * sc.plant.gravity;

  for (int i = 0; i < res.samples; ++i) {
    const double thrust = t_hi * uni(rng);
    const Quaternion q_d = random_unit_quat();
    const Quaternion q_tilde = random_unit_quat().canonicalized();
    const double zeta = angle_axis(q_tilde).angle;
    const double margin = lemma2_bound(thrust, zeta) -
                          disturbance_exact(thrust, q_d, q_tilde).norm();
    res.worst_margin = std::min(res.worst_margin, margin);
    if (margin < 0.0) {
      ++res.violations;
    }
  }
  return res;
}

std::vector<GainLadderRow> run_gain_ladder(const Scenario& sc) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(sc.plant.inertia);
  const double lambda_max = es.eigenvalues().maxCoeff();
  const double lambda_min = es.eigenvalues().minCoeff();
  const double amp = sc.exp.sin_amplitude;
  const double omega_hz = 2.0 * M_PI * sc.exp.sin_freq_hz;
  const Vec3 axis = Vec3::UnitX();

  std::vector<GainLadderRow> rows;
  for (double kp : sc.exp.ladder) {
    GainLadderRow row;
    row.kp = kp;
    row.kd = sc.exp.ladder_kd_scale * std::sqrt(kp);
    row.eta = 0.5 * eta_max(kp, row.kd, sc.plant.inertia);
    row.gamma_in = inner_gain(kp, row.kd, row.eta, lambda_max).gamma_in;
    row.bound = row.gamma_in * amp;

    // Step small enough for the stiff damping mode kd/lambda_min(J).
    const double dt = std::min(sc.dt, 1.0 / (row.kd / lambda_min));
    const InnerGains gains{kp, row.kd};
    const auto traj = simulate_inner_loop(
        Quaternion::identity(), Vec3::Zero(), gains, sc.plant.inertia,
        [&](double t) { return Vec3(amp * std::sin(omega_hz * t) * axis); },
        sc.exp.forced_duration, dt);

    const std::size_t start = traj.size() - traj.size() / 3;  // last third
    double steady = 0.0;
    for (std::size_t i = start; i < traj.size(); ++i) {
      steady = std::max(steady, angle_axis(traj[i].q_tilde).angle);
    }
    row.steady_zeta = steady;
    row.within_bound = steady <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

IntegratorOrderResult run_integrator_order(const Scenario& sc) {
  // Frozen command turns the plant into an autonomous smooth ODE; the
  // controllers are sampled per step and would mask the integrator order.
  UavState s0;
  s0.p = sc.plant.cable_length * Vec3(0.6, -0.35, 0.72).normalized();
  const Vec3 r_hat = s0.p / sc.plant.cable_length;
  Vec3 v = Vec3(0.3, 0.5, -0.1);
  v -= v.dot(r_hat) * r_hat;
  s0.v = v;
  s0.q = quat_from_angle_axis(0.3, Vec3(0.2, 1.0, 0.1).normalized());
  s0.omega = Vec3(0.3, -0.2, 0.4);

  ControlCommand cmd;
  cmd.thrust = 1.2 * sc.plant.mass * sc.plant.gravity;
  cmd.torque = Vec3(0.002, -0.001, 0.0005);

  const double horizon = 1.0;
  const auto integrate = [&](double dt) {
    UavState s = s0;
    const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
    for (std::size_t k = 0; k < n; ++k) {
      s = step(s, cmd, dt, sc.plant);
    }
    return s;
  };

  const double dt_coarse = 4e-3;
  const UavState ref = integrate(dt_coarse / 64.0);
  const auto err = [&](const UavState& s) {
    return (s.p - ref.p).norm() + (s.v - ref.v).norm() +
           (s.q.coeffs_wxyz() - ref.q.coeffs_wxyz()).norm() +
           (s.omega - ref.omega).norm();
  };

  IntegratorOrderResult res;
  res.err_coarse = err(integrate(dt_coarse));
  res.err_fine = err(integrate(dt_coarse / 2.0));
  res.order = std::log2(res.err_coarse / res.err_fine);
  return res;
}

double estimate_gamma_out(const Scenario& sc,
                          const std::vector<double>& zeta_levels) {
  double gamma = 0.0;
  for (double level : zeta_levels) {
    CascadeConfig cc;
    cc.plant = sc.plant;
    cc.outer = sc.outer;
    cc.inner = sc.inner;
    cc.forced_error = quat_from_angle_axis(level, Vec3::UnitX());
    CascadeLoop loop(cc);

    UavState state = sc.initial;
    const auto n_steps =
        static_cast<std::size_t>(std::llround(sc.duration / sc.dt));
    const std::size_t steady_start = n_steps / 2;

    double steady_rate = 0.0;
    for (std::size_t k = 0; k < n_steps; ++k) {
      const CascadeStepInfo info = loop.step(state, sc.p_d, sc.dt);
      if (k >= steady_start) {
        steady_rate = std::max(steady_rate, info.omega_d.norm());
      }
    }
    gamma = std::max(gamma, steady_rate / level);
  }
  return gamma;
}

}  // namespace tethersim
