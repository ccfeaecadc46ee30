#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tethersim/inner_loop.hpp"
#include "tethersim/plant.hpp"
#include "tethersim/so3.hpp"
#include "tethersim/telemetry.hpp"

namespace tethersim {

/// Class-K bound on the inner-loop disturbance: sqrt(6) T |zeta|.
double lemma2_bound(double thrust, double zeta);

/// Upper end of the admissible interval for the inner Lyapunov parameter:
/// min{ kd / lambda_max(J), 2 kp kd / (4 lambda_max(J) kp + kd^2) }.
double eta_max(double kp, double kd, const Mat3& inertia);

/// Inner Lyapunov function 2 kp (1 - qtilde_0) plus the quadratic form in
/// (qtilde_v, omega) weighted by [[4 eta kd I, 2 eta J], [2 eta J, J]].
double lyapunov_inner(const Quaternion& q_tilde, const Vec3& omega,
                      const InnerGains& gains, double eta, const Mat3& inertia);

struct InnerCertificate {
  double eta{0.0};
  Eigen::Matrix2d q_bar{Eigen::Matrix2d::Zero()};
  Eigen::Vector2d d_bar{Eigen::Vector2d::Zero()};
  double gamma_in{0.0};  // asymptotic gain, rad per rad/s of ||omega_d||_inf
  double lambda_max{0.0};
};

/// Constant comparison matrices and the asymptotic gain (first component of
/// q_bar^{-1} d_bar). Throws std::domain_error if q_bar is not positive
/// definite, i.e. eta is outside its interval.
InnerCertificate inner_gain(double kp, double kd, double eta, double lambda_max);

/// Positive-definiteness bound on the outer cross-term weight:
/// 16 h_dt / (32 h_pt + h_dt^2 pi^2).
double epsilon_max(double h_pt, double h_dt);

/// Default weight: half of min(sqrt(1/h_pt), epsilon_max).
double default_epsilon(double h_pt, double h_dt);

/// Outer Lyapunov function 0.5 dist^2 + (1/(2 h_pt)) ||v||^2 - eps Cross with
/// Cross = dist <v, t>. v must be tangent to the sphere; the tangent-basis
/// form of the Cross term reduces to <v, t> and avoids the polar basis
/// singularity.
double lyapunov_outer(const Vec3& p, const Vec3& v, const Vec3& p_d,
                      double h_pt, double epsilon, double cable_length);

struct OuterCertificate {
  double epsilon{0.0};
  Eigen::Matrix2d q_mat{Eigen::Matrix2d::Zero()};
  double mu_q{0.0};      // smallest eigenvalue of q_mat
  double iss_gain{0.0};  // mu^{-1} ||[eps, 1/h_pt]||; threshold per unit ||Delta||
  double delta_max{0.0};  // 4 mu L^2 / sqrt(eps^2 + h_pt^{-2})
  double h_pt{0.0};
  double h_dt{0.0};

  double iss_radius(double delta_norm) const { return iss_gain * delta_norm; }
};

/// Comparison matrix Q, its smallest eigenvalue, the ISS threshold gain and
/// the admissible disturbance bound. Throws std::domain_error if Q is not
/// positive definite.
OuterCertificate outer_certificate(double h_pt, double h_dt, double epsilon,
                                   double cable_length);

/// Cascade small-gain condition gamma_in * gamma_out < 1.
bool small_gain_check(double gamma_in, double gamma_out);

struct PropertyResult {
  std::string name;
  bool enforced{true};  // informational properties do not gate the verdict
  bool pass{true};
  double worst_margin{0.0};  // negative means violated
  double worst_time{-1.0};   // s
  std::size_t violations{0};
  std::string detail;
};

struct CertificateReport {
  std::vector<PropertyResult> properties;
  std::string first_broken;  // earliest violated property, empty if none
  double first_broken_time{-1.0};

  bool all_pass() const;
  const PropertyResult* find(const std::string& name) const;
  std::string to_text() const;
};

struct AuditConfig {
  PlantParams plant;
  OuterCertificate outer_cert;
  double zeta_max{M_PI / 3.0};              // rad, restriction on |zeta|
  double thrust_sup{0.0};                   // N, restriction on T; 0 = thrust_max
  double tension_tol{1e-6};                 // N
  double radius_rel_tol{1e-9};              // on | ||p|| - L | / L
  double tangency_tol{1e-6};                // on |<p,v>| / (L max(||v||,1))
  double vdot_rel_tol{1e-8};                // ISS implication slack, relative to V
  double vout_increase_tol{1e-10};          // monotonicity slack
  bool enforce_vout_monotone{false};        // ideal-attitude runs only
  std::optional<double> gamma_in;           // small-gain check when both set
  std::optional<double> gamma_out;
};

/// Applies every certificate along a completed run log: taut-cable margin,
/// constraint invariants, the Lemma-2 bound, the ISS implication with its
/// restriction, and optionally outer-Lyapunov monotonicity and the
/// small-gain product.
CertificateReport trajectory_audit(const TelemetryLog& log, const AuditConfig& cfg);

}  // namespace tethersim
