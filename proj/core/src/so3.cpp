#include "tethersim/so3.hpp"

#include <cmath>
#include <stdexcept>

namespace tethersim {

double Quaternion::norm() const { return std::sqrt(w * w + v.squaredNorm()); }

Quaternion Quaternion::normalized() const {
  const double n = norm();
  if (n == 0.0) {
    throw std::invalid_argument("Quaternion::normalized: zero quaternion");
  }
  return {w / n, v / n};
}

Quaternion Quaternion::canonicalized() const {
  if (w < 0.0) {
    return {-w, -v};
  }
  return *this;
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return m;
}

Mat43 quat_kinematics(const Quaternion& q) {
  Mat43 e;
  e.row(0) = -q.v.transpose();
  e.bottomRows<3>() = q.w * Mat3::Identity() + skew(q.v);
  return e;
}

Mat3 quat_to_rot(const Quaternion& q) {
  const double w = q.w;
  const Vec3& v = q.v;
  return (w * w - v.squaredNorm()) * Mat3::Identity() +
         2.0 * (v * v.transpose()) + 2.0 * w * skew(v);
}

Quaternion rot_to_quat(const Mat3& R) {
  const double ortho = (R.transpose() * R - Mat3::Identity()).norm();
  if (ortho > 1e-6 || R.determinant() < 0.0) {
    throw std::invalid_argument("rot_to_quat: input is not a proper rotation");
  }

  // Shepperd's method: pick the largest of the four pivots for stability.
  const double t = R.trace();
  Quaternion q;
  if (t >= R(0, 0) && t >= R(1, 1) && t >= R(2, 2)) {
    const double s = std::sqrt(1.0 + t) * 2.0;
    q.w = 0.25 * s;
    q.v = Vec3(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1)) / s;
  } else if (R(0, 0) >= R(1, 1) && R(0, 0) >= R(2, 2)) {
    const double s = std::sqrt(1.0 + R(0, 0) - R(1, 1) - R(2, 2)) * 2.0;
    q.w = (R(2, 1) - R(1, 2)) / s;
    q.v = Vec3(0.25 * s, (R(0, 1) + R(1, 0)) / s, (R(0, 2) + R(2, 0)) / s);
  } else if (R(1, 1) >= R(2, 2)) {
    const double s = std::sqrt(1.0 + R(1, 1) - R(0, 0) - R(2, 2)) * 2.0;
    q.w = (R(0, 2) - R(2, 0)) / s;
    q.v = Vec3((R(0, 1) + R(1, 0)) / s, 0.25 * s, (R(1, 2) + R(2, 1)) / s);
  } else {
    const double s = std::sqrt(1.0 + R(2, 2) - R(0, 0) - R(1, 1)) * 2.0;
    q.w = (R(1, 0) - R(0, 1)) / s;
    q.v = Vec3((R(0, 2) + R(2, 0)) / s, (R(1, 2) + R(2, 1)) / s, 0.25 * s);
  }
  return q.normalized().canonicalized();
}

Quaternion quat_compose(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.v.dot(b.v), a.w * b.v + b.w * a.v + a.v.cross(b.v)};
}

AngleAxis angle_axis(const Quaternion& q_in) {
  const Quaternion q = q_in.canonicalized();
  const double vn = q.v.norm();
  AngleAxis aa;
  aa.angle = 2.0 * std::atan2(vn, q.w);
  aa.axis = vn > 0.0 ? Vec3(q.v / vn) : Vec3(0, 0, 1);
  return aa;
}

Quaternion quat_from_angle_axis(double angle, const Vec3& axis) {
  const double n = axis.norm();
  if (n == 0.0) {
    throw std::invalid_argument("quat_from_angle_axis: zero axis");
  }
  return {std::cos(0.5 * angle), std::sin(0.5 * angle) * (axis / n)};
}

}  // namespace tethersim
