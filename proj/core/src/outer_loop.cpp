#include "tethersim/outer_loop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tethersim {

void OuterGains::validate(const PlantParams& params) const {
  if (!(kp > 0.0)) {
    throw std::invalid_argument("outer.kp_N_per_m must be > 0");
  }
  if (!(kd > 0.0)) {
    throw std::invalid_argument("outer.kd_Ns_per_m must be > 0");
  }
  if (!(mu > 0.0)) {
    throw std::invalid_argument("outer.mu_m2 must be > 0");
  }
  const double hover = params.mass * params.gravity;
  if (gravity_comp != hover) {
    throw std::invalid_argument("outer.gravity_comp_N must equal mass*gravity");
  }
  if (!(pull > params.tension_min) || !(pull < params.thrust_max - hover)) {
    throw std::invalid_argument(
        "outer.pull_N must lie in (tension_min, thrust_max - mass*gravity)");
  }
  if (yaw < -M_PI || yaw >= M_PI) {
    throw std::invalid_argument("outer.yaw_rad must lie in [-pi, pi)");
  }
}

double great_circle_dist(const Vec3& p, const Vec3& p_d, double cable_length) {
  const double c = std::clamp(p.dot(p_d) / (cable_length * cable_length), -1.0, 1.0);
  return cable_length * std::acos(c);
}

Vec3 geodesic_tangent(const Vec3& p, const Vec3& p_d, double mu) {
  const Vec3 w = p.cross(p_d).cross(p);
  return w / std::max(w.norm(), mu);
}

Vec3 tangential_command(const Vec3& p, const Vec3& v, const Vec3& p_d,
                        const OuterGains& gains, double cable_length) {
  const double dist = great_circle_dist(p, p_d, cable_length);
  return dist * gains.kp * geodesic_tangent(p, p_d, gains.mu) - gains.kd * v;
}

Vec3 desired_thrust_vector(const Vec3& p, const Vec3& v, const Vec3& p_d,
                           const OuterGains& gains, const PlantParams& params) {
  const Vec3 r_hat = p / params.cable_length;
  return tangential_command(p, v, p_d, gains, params.cable_length) +
         gains.gravity_comp * Vec3::UnitZ() + gains.pull * r_hat;
}

ThrustDecomposition decompose_thrust(const Vec3& f_d) {
  ThrustDecomposition dec;
  dec.tx = f_d.x();
  dec.ty = f_d.y();
  dec.tz = f_d.z();
  dec.magnitude = std::sqrt(dec.tx * dec.tx + dec.ty * dec.ty + dec.tz * dec.tz);
  dec.tilt = std::atan2(std::sqrt(dec.tx * dec.tx + dec.ty * dec.ty), dec.tz);
  return dec;
}

Quaternion min_rotation_quat(const ThrustDecomposition& dec) {
  const double xy = std::sqrt(dec.tx * dec.tx + dec.ty * dec.ty);
  if (xy == 0.0) {
    return Quaternion::identity();
  }
  // Axis z x F_d, not the printed component order; verified by the
  // R(q) z || F_d post-condition.
  const Vec3 axis = Vec3(-dec.ty, dec.tx, 0.0) / xy;
  return {std::cos(0.5 * dec.tilt), std::sin(0.5 * dec.tilt) * axis};
}

Quaternion compose_yaw(const Quaternion& q_zeta, double psi) {
  const Quaternion q_psi{std::cos(0.5 * psi),
                         std::sin(0.5 * psi) * Vec3::UnitZ()};
  return quat_compose(q_zeta, q_psi);
}

bool kp_feasible(const Vec3& p0, const Vec3& v0, const Vec3& p_d, double kp,
                 double cable_length) {
  const double dist = great_circle_dist(p0, p_d, cable_length);
  const double denom = M_PI * M_PI - dist * dist;
  if (!(denom > 0.0)) {
    throw std::domain_error(
        "kp_feasible: dist >= pi places the state outside the stability domain");
  }
  return kp > v0.squaredNorm() / denom;
}

Vec3 desired_rate_estimate(const Quaternion& q_d_prev, const Quaternion& q_d_now,
                           double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("desired_rate_estimate: dt must be > 0");
  }
  Quaternion q_now = q_d_now;
  if (q_d_prev.dot(q_now) < 0.0) {
    q_now = {-q_now.w, -q_now.v};
  }
  const Vec4 dq = (q_now.coeffs_wxyz() - q_d_prev.coeffs_wxyz()) / dt;
  return 2.0 * (quat_kinematics(q_now).transpose() * dq);
}

}  // namespace tethersim
