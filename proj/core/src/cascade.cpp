#include "tethersim/cascade.hpp"

#include <cmath>

namespace tethersim {

CascadeLoop::CascadeLoop(CascadeConfig cfg) : cfg_(std::move(cfg)) {}

CascadeStepInfo CascadeLoop::control(UavState& state, const Vec3& p_ref, double dt) {
  CascadeStepInfo info;

  const Vec3 f_d = desired_thrust_vector(state.p, state.v, p_ref, cfg_.outer,
                                         cfg_.plant);
  const ThrustDecomposition dec = decompose_thrust(f_d);
  info.thrust_pre = dec.magnitude;

  Quaternion q_d = compose_yaw(min_rotation_quat(dec), cfg_.outer.yaw);
  if (prev_qd_ && prev_qd_->dot(q_d) < 0.0) {
    q_d = {-q_d.w, -q_d.v};  // keep the rate estimate off the double cover
  }
  info.q_d = q_d;
  info.omega_d = prev_qd_ ? desired_rate_estimate(*prev_qd_, q_d, dt)
                          : Vec3(Vec3::Zero());
  prev_qd_ = q_d;

  if (cfg_.ideal_attitude) {
    state.q = q_d;
    state.omega = info.omega_d;
  } else if (cfg_.forced_error) {
    const Mat3 r_tilde = quat_to_rot(*cfg_.forced_error);
    state.q = rot_to_quat(quat_to_rot(q_d) * r_tilde.transpose());
    state.omega = r_tilde * info.omega_d;
  }

  info.q_tilde = attitude_error(state.q, q_d);
  info.zeta_err = angle_axis(info.q_tilde).angle;
  info.torque = torque_command(info.q_tilde, state.omega, cfg_.inner);
  if (cfg_.torque_limit) {
    const double tn = info.torque.norm();
    if (tn > *cfg_.torque_limit) {
      info.torque *= *cfg_.torque_limit / tn;
    }
  }

  info.thrust_post = saturate_thrust(info.thrust_pre, cfg_.plant);
  info.saturated = info.thrust_post != info.thrust_pre;
  info.tension = cable_tension(state, info.thrust_post, cfg_.plant);
  info.multiplier = constraint_multiplier(state, info.thrust_post, cfg_.plant);
  info.delta = disturbance_exact(info.thrust_post, q_d, info.q_tilde);
  return info;
}

void CascadeLoop::advance(UavState& state, const CascadeStepInfo& info,
                          double dt) const {
  ControlCommand cmd;
  cmd.thrust = info.thrust_post;
  cmd.torque = info.torque;
  cmd.q_d = info.q_d;
  cmd.omega_d = info.omega_d;
  state = tethersim::step(state, cmd, dt, cfg_.plant);
}

CascadeStepInfo CascadeLoop::step(UavState& state, const Vec3& p_ref, double dt) {
  const CascadeStepInfo info = control(state, p_ref, dt);
  advance(state, info, dt);
  return info;
}

}  // namespace tethersim
