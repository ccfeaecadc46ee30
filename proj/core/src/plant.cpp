#include "tethersim/plant.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace tethersim {

void PlantParams::validate() const {
  if (!(mass > 0.0)) {
    throw std::invalid_argument("plant.mass_kg must be > 0");
  }
  if ((inertia - inertia.transpose()).norm() > 1e-12) {
    throw std::invalid_argument("plant.inertia_kgm2 must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> es(inertia);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("plant.inertia_kgm2 must be positive definite");
  }
  if (!(cable_length > 0.0)) {
    throw std::invalid_argument("plant.cable_length_m must be > 0");
  }
  if (!(gravity > 0.0)) {
    throw std::invalid_argument("plant.gravity_mps2 must be > 0");
  }
  if (!(thrust_max > mass * gravity)) {
    throw std::invalid_argument("plant.thrust_max_N must exceed mass*gravity");
  }
  if (tension_min < 0.0) {
    throw std::invalid_argument("plant.tension_min_N must be >= 0");
  }
}

Vec3 active_force(const UavState& state, double thrust, const PlantParams& params) {
  return thrust * (quat_to_rot(state.q) * Vec3::UnitZ()) -
         params.mass * params.gravity * Vec3::UnitZ();
}

double cable_tension(const UavState& state, double thrust, const PlantParams& params) {
  const Vec3 r_hat = state.p / params.cable_length;
  return active_force(state, thrust, params).dot(r_hat);
}

double constraint_multiplier(const UavState& state, double thrust,
                             const PlantParams& params) {
  return cable_tension(state, thrust, params) +
         params.mass * state.v.squaredNorm() / params.cable_length;
}

StateDeriv dynamics_deriv(const UavState& state, const ControlCommand& cmd,
                          const PlantParams& params) {
  const Vec3 r_hat = state.p / params.cable_length;
  const Vec3 f_active = active_force(state, cmd.thrust, params);
  const double lambda = f_active.dot(r_hat) +
                        params.mass * state.v.squaredNorm() / params.cable_length;

  StateDeriv d;
  d.dp = state.v;
  d.dv = (f_active - lambda * r_hat) / params.mass;
  d.dq = 0.5 * (quat_kinematics(state.q) * state.omega);
  d.domega = params.inertia.inverse() *
             (-state.omega.cross(params.inertia * state.omega) + cmd.torque);
  return d;
}

double saturate_thrust(double thrust_raw, const PlantParams& params) {
  if (thrust_raw < 0.0) {
    return 0.0;
  }
  if (thrust_raw > params.thrust_max) {
    return params.thrust_max;
  }
  return thrust_raw;
}

namespace {

UavState advance(const UavState& s, const StateDeriv& d, double h) {
  UavState out;
  out.p = s.p + h * d.dp;
  out.v = s.v + h * d.dv;
  out.q = Quaternion::from_wxyz(s.q.coeffs_wxyz() + h * d.dq);
  out.omega = s.omega + h * d.domega;
  if (out.p.norm() == 0.0) {
    throw std::runtime_error("plant step: position reached the anchor point");
  }
  return out;
}

}  // namespace

UavState step(const UavState& state, const ControlCommand& cmd, double dt,
              const PlantParams& params) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("plant step: dt must be > 0");
  }
  if (state.p.norm() == 0.0) {
    throw std::runtime_error("plant step: position reached the anchor point");
  }

  const StateDeriv k1 = dynamics_deriv(state, cmd, params);
  const StateDeriv k2 = dynamics_deriv(advance(state, k1, 0.5 * dt), cmd, params);
  const StateDeriv k3 = dynamics_deriv(advance(state, k2, 0.5 * dt), cmd, params);
  const StateDeriv k4 = dynamics_deriv(advance(state, k3, dt), cmd, params);

  StateDeriv sum;
  sum.dp = (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp) / 6.0;
  sum.dv = (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv) / 6.0;
  sum.dq = (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq) / 6.0;
  sum.domega = (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega) / 6.0;

  UavState next = advance(state, sum, dt);

  // Constraint projection: p back to the sphere, v into the tangent plane.
  next.p = params.cable_length * next.p.normalized();
  const Vec3 r_hat = next.p / params.cable_length;
  next.v -= next.v.dot(r_hat) * r_hat;
  next.q = next.q.normalized();
  return next;
}

}  // namespace tethersim
