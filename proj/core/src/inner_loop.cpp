#include "tethersim/inner_loop.hpp"

#include <cmath>
#include <stdexcept>

namespace tethersim {

void InnerGains::validate() const {
  if (!(kp > 0.0)) {
    throw std::invalid_argument("inner.kp_Nm must be > 0");
  }
  if (!(kd > 0.0)) {
    throw std::invalid_argument("inner.kd_Nms must be > 0");
  }
}

Quaternion attitude_error(const Quaternion& q, const Quaternion& q_d) {
  const Mat3 r_tilde = quat_to_rot(q).transpose() * quat_to_rot(q_d);
  return rot_to_quat(r_tilde);
}

Vec3 torque_command(const Quaternion& q_tilde, const Vec3& omega,
                    const InnerGains& gains) {
  return gains.kp * q_tilde.v - gains.kd * omega;
}

Vec3 disturbance_exact(double thrust, const Quaternion& q_d,
                       const Quaternion& q_tilde) {
  const Mat3 r_d = quat_to_rot(q_d);
  const Mat3 r_tilde = quat_to_rot(q_tilde);
  return thrust * (r_d * ((r_tilde.transpose() - Mat3::Identity()) * Vec3::UnitZ()));
}

namespace {

struct ErrState {
  Vec4 q;  // scalar-first coefficients of q_tilde
  Vec3 w;
};

ErrState deriv(const ErrState& s, const Vec3& omega_d, const InnerGains& gains,
               const Mat3& inertia, const Mat3& inertia_inv) {
  const Quaternion qt = Quaternion::from_wxyz(s.q);
  ErrState d;
  // Error kinematics of Rtilde = R^T R_d: the body rate acts by left
  // multiplication, the desired rate by right multiplication.
  d.q = 0.5 * (quat_compose(qt, Quaternion{0.0, omega_d}).coeffs_wxyz() -
               quat_compose(Quaternion{0.0, s.w}, qt).coeffs_wxyz());
  d.w = inertia_inv * (-s.w.cross(inertia * s.w) + gains.kp * qt.v - gains.kd * s.w);
  return d;
}

}  // namespace

std::vector<InnerLoopSample> simulate_inner_loop(
    const Quaternion& q_tilde0, const Vec3& omega0, const InnerGains& gains,
    const Mat3& inertia, const std::function<Vec3(double)>& omega_d,
    double duration, double dt) {
  if (!(dt > 0.0) || !(duration > 0.0)) {
    throw std::invalid_argument("simulate_inner_loop: dt and duration must be > 0");
  }
  const Mat3 inertia_inv = inertia.inverse();
  const auto n_steps = static_cast<std::size_t>(std::llround(duration / dt));

  ErrState s{q_tilde0.coeffs_wxyz(), omega0};
  std::vector<InnerLoopSample> out;
  out.reserve(n_steps + 1);
  out.push_back({0.0, q_tilde0, omega0});

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const auto f = [&](const ErrState& x, double tau) {
      return deriv(x, omega_d(tau), gains, inertia, inertia_inv);
    };
    const ErrState k1 = f(s, t);
    const ErrState k2 = f({s.q + 0.5 * dt * k1.q, s.w + 0.5 * dt * k1.w}, t + 0.5 * dt);
    const ErrState k3 = f({s.q + 0.5 * dt * k2.q, s.w + 0.5 * dt * k2.w}, t + 0.5 * dt);
    const ErrState k4 = f({s.q + dt * k3.q, s.w + dt * k3.w}, t + dt);
    s.q += dt / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    s.w += dt / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
    s.q.normalize();

    out.push_back({static_cast<double>(k + 1) * dt, Quaternion::from_wxyz(s.q), s.w});
  }
  return out;
}

}  // namespace tethersim
