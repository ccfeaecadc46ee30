#pragma once

#include <vector>

#include "tethersim/certificates.hpp"
#include "tethersim/scenario.hpp"
#include "tethersim/telemetry.hpp"

namespace tethersim {

struct RunResult {
  TelemetryLog log;
  CertificateReport report;
  InnerCertificate inner_cert;
  OuterCertificate outer_cert;
  UavState final_state;
  Vec3 final_p_a{Vec3::Zero()};
};

/// Resolves the certificate parameters a scenario leaves at their defaults:
/// eta at the interval midpoint, epsilon at half its admissible bound.
InnerCertificate resolve_inner_certificate(const Scenario& sc);
OuterCertificate resolve_outer_certificate(const Scenario& sc);

/// One deterministic closed-loop run. Per step: governor update at its rate,
/// outer loop, inner loop, thrust saturation, plant step, telemetry append;
/// the completed log is audited against every certificate.
RunResult run_scenario(const Scenario& sc);

struct Lemma2McResult {
  int samples{0};
  int violations{0};
  double worst_margin{0.0};  // min over samples of bound - ||delta||
};

/// Monte-Carlo sweep of the class-K disturbance bound over random
/// (thrust, q_d, q_tilde) triples; thrust is uniform on [0, 2 m g].
Lemma2McResult run_lemma2_mc(const Scenario& sc);

struct GainLadderRow {
  double kp{0.0};
  double kd{0.0};
  double eta{0.0};
  double gamma_in{0.0};
  double steady_zeta{0.0};  // rad, forced-response steady error
  double bound{0.0};        // rad, gamma_in * amplitude
  bool within_bound{false};
};

/// Certificate gain and measured forced-response error along the stiffness
/// ladder kd = c sqrt(kp).
std::vector<GainLadderRow> run_gain_ladder(const Scenario& sc);

struct IntegratorOrderResult {
  double err_coarse{0.0};
  double err_fine{0.0};
  double order{0.0};  // log2(err_coarse / err_fine)
};

/// Richardson estimate of the plant integrator order under a frozen command.
IntegratorOrderResult run_integrator_order(const Scenario& sc);

/// Empirical outer asymptotic gain: worst steady ||omega_d|| over runs with
/// the attitude held at a constant error of each given angle, divided by
/// that angle.
double estimate_gamma_out(const Scenario& sc, const std::vector<double>& zeta_levels);

}  // namespace tethersim
