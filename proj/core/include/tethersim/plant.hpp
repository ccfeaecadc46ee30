#pragma once

#include "tethersim/so3.hpp"

namespace tethersim {

struct PlantParams {
  double mass{1.0};                 // kg
  Mat3 inertia{Mat3::Identity()};   // kg m^2, symmetric positive definite
  double cable_length{1.0};         // m
  double gravity{9.81};             // m/s^2
  double thrust_max{30.0};          // N, must exceed mass*gravity
  double tension_min{0.5};          // N, taut-cable floor

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct UavState {
  Vec3 p{0, 0, 1};        // m, constrained to ||p|| == cable_length
  Vec3 v{Vec3::Zero()};   // m/s, tangent to the sphere
  Quaternion q;           // body-to-inertial attitude
  Vec3 omega{Vec3::Zero()};  // rad/s, body frame
};

struct ControlCommand {
  double thrust{0.0};         // N, saturated to [0, thrust_max]
  Vec3 torque{Vec3::Zero()};  // N m, body frame
  Quaternion q_d;             // desired attitude carried between loops
  Vec3 omega_d{Vec3::Zero()};  // rad/s, desired body rate estimate
};

struct StateDeriv {
  Vec3 dp;
  Vec3 dv;
  Vec4 dq;  // scalar-first
  Vec3 domega;
};

/// Active force F_a = T R(q) z - m g z.
Vec3 active_force(const UavState& state, double thrust, const PlantParams& params);

/// Cable constraint quantity <F_a, r> with r = p / L. This is the monitored
/// tension; it omits the centripetal contribution carried by the multiplier.
double cable_tension(const UavState& state, double thrust, const PlantParams& params);

/// Lagrange multiplier <F_a, r> + m ||v||^2 / L keeping the acceleration
/// tangent to the constraint sphere.
double constraint_multiplier(const UavState& state, double thrust,
                             const PlantParams& params);

StateDeriv dynamics_deriv(const UavState& state, const ControlCommand& cmd,
                          const PlantParams& params);

double saturate_thrust(double thrust_raw, const PlantParams& params);

/// Classical RK4 step followed by radial projection of p, tangentialization
/// of v and quaternion renormalization. Throws std::runtime_error if the
/// position reaches the anchor (||p|| == 0) at any stage.
UavState step(const UavState& state, const ControlCommand& cmd, double dt,
              const PlantParams& params);

}  // namespace tethersim
