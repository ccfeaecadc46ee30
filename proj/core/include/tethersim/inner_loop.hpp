#pragma once

#include <functional>
#include <vector>

#include "tethersim/so3.hpp"

namespace tethersim {

struct InnerGains {
  double kp{100.0};  // N m
  double kd{20.0};   // N m s

  void validate() const;
};

/// Error quaternion of Rtilde = R(q)^T R(q_d), canonicalized to w >= 0.
Quaternion attitude_error(const Quaternion& q, const Quaternion& q_d);

/// PD torque kp * qtilde_v - kd * omega.
Vec3 torque_command(const Quaternion& q_tilde, const Vec3& omega,
                    const InnerGains& gains);

/// Exact disturbance injected into the outer loop:
/// delta = T R_d (Rtilde^T - I) z. Zero at zero attitude error.
Vec3 disturbance_exact(double thrust, const Quaternion& q_d,
                       const Quaternion& q_tilde);

/// One sample of the closed error dynamics
///   qtilde_dot = 0.5 (qtilde * (0, omega_d) - (0, omega) * qtilde)
///   J omega_dot = -omega x J omega + kp qtilde_v - kd omega.
struct InnerLoopSample {
  double t;
  Quaternion q_tilde;
  Vec3 omega;
};

/// Integrates the closed error dynamics with RK4 under an exogenous desired
/// rate. Used by the forced-response experiments; the full simulator
/// integrates the true rigid body instead.
std::vector<InnerLoopSample> simulate_inner_loop(
    const Quaternion& q_tilde0, const Vec3& omega0, const InnerGains& gains,
    const Mat3& inertia, const std::function<Vec3(double)>& omega_d,
    double duration, double dt);

}  // namespace tethersim
