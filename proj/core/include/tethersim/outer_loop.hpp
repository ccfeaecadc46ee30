#pragma once

#include "tethersim/plant.hpp"
#include "tethersim/so3.hpp"

namespace tethersim {

struct OuterGains {
  double kp{4.0};            // N/m, tangential proportional gain
  double kd{3.0};            // N s/m, tangential derivative gain
  double pull{2.0};          // N, constant pulling term on the cable
  double gravity_comp{9.81};  // N, must equal mass*gravity
  double mu{1e-6};           // m^2, geodesic-gradient regularizer
  double yaw{0.0};           // rad, free rotation about the thrust axis

  /// Checks positivity, gravity_comp == mass*gravity and the admissible
  /// pulling interval (tension_min, thrust_max - mass*gravity).
  void validate(const PlantParams& params) const;
};

struct ThrustDecomposition {
  double tx{0.0}, ty{0.0}, tz{0.0};  // N, inertial components
  double magnitude{0.0};             // N
  double tilt{0.0};                  // rad, angle from inertial z
};

/// Great-circle distance L acos(<p, p_d> / L^2), inner product clamped to
/// [-1, 1] before acos.
double great_circle_dist(const Vec3& p, const Vec3& p_d, double cable_length);

/// Unit gradient of the geodesic toward p_d, regularized by mu. Orthogonal
/// to p; vanishes at p == p_d and at the antipode.
Vec3 geodesic_tangent(const Vec3& p, const Vec3& p_d, double mu);

/// Tangential PD force dist * kp * t - kd * v.
Vec3 tangential_command(const Vec3& p, const Vec3& v, const Vec3& p_d,
                        const OuterGains& gains, double cable_length);

/// Full desired thrust vector: tangential PD + gravity compensation +
/// radial pulling term.
Vec3 desired_thrust_vector(const Vec3& p, const Vec3& v, const Vec3& p_d,
                           const OuterGains& gains, const PlantParams& params);

ThrustDecomposition decompose_thrust(const Vec3& f_d);

/// Minimal rotation taking inertial z onto the thrust direction. The axis is
/// z x F_d; vertical thrust returns the identity.
Quaternion min_rotation_quat(const ThrustDecomposition& dec);

/// q_d = q_zeta * q_psi with q_psi a rotation of psi about z. Leaves the
/// thrust axis unchanged.
Quaternion compose_yaw(const Quaternion& q_zeta, double psi);

/// Gain feasibility kp > ||v0||^2 / (pi^2 - dist^2). Throws
/// std::domain_error when dist(p0, p_d) >= pi.
bool kp_feasible(const Vec3& p0, const Vec3& v0, const Vec3& p_d, double kp,
                 double cable_length);

/// First-order body-rate estimate 2 E(q_now)^T (q_now - q_prev) / dt with
/// sign alignment against q_prev.
Vec3 desired_rate_estimate(const Quaternion& q_d_prev, const Quaternion& q_d_now,
                           double dt);

}  // namespace tethersim
