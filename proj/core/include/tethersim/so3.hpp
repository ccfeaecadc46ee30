#pragma once

#include <Eigen/Dense>

namespace tethersim {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat43 = Eigen::Matrix<double, 4, 3>;

/// Unit quaternion stored scalar-first: q = [w, v]. Wire formats serialize
/// in the same order.
struct Quaternion {
  double w{1.0};
  Vec3 v{Vec3::Zero()};

  Quaternion() = default;
  Quaternion(double w_, const Vec3& v_) : w(w_), v(v_) {}
  Quaternion(double w_, double x, double y, double z) : w(w_), v(x, y, z) {}

  static Quaternion identity() { return {}; }

  double norm() const;
  Quaternion normalized() const;
  /// Flips sign so that w >= 0 (shorter-arc branch of the double cover).
  Quaternion canonicalized() const;
  Quaternion conjugate() const { return {w, -v}; }
  double dot(const Quaternion& o) const { return w * o.w + v.dot(o.v); }

  Vec4 coeffs_wxyz() const { return {w, v.x(), v.y(), v.z()}; }
  static Quaternion from_wxyz(const Vec4& c) { return {c(0), c.tail<3>()}; }
};

struct AngleAxis {
  double angle{0.0};   // rad, in [0, pi] as produced by angle_axis()
  Vec3 axis{0, 0, 1};  // unit vector; [0,0,1] by convention at angle 0
};

/// Cross-product matrix: skew(v) * w == v x w.
Mat3 skew(const Vec3& v);

/// Quaternion differential kinematics E(q), 4x3, so that qdot = 0.5 E(q) w
/// for body rate w. Columns are orthonormal for unit q.
Mat43 quat_kinematics(const Quaternion& q);

Mat3 quat_to_rot(const Quaternion& q);

/// Inverse of quat_to_rot on the w >= 0 branch. Throws std::invalid_argument
/// if R is not orthonormal with det +1 (tolerance 1e-6).
Quaternion rot_to_quat(const Mat3& R);

/// Hamilton product a * b; quat_to_rot(a*b) == quat_to_rot(a) quat_to_rot(b).
Quaternion quat_compose(const Quaternion& a, const Quaternion& b);

/// Angle-axis of a unit quaternion, angle in [0, pi]. Zero rotation returns
/// axis [0,0,1].
AngleAxis angle_axis(const Quaternion& q);

Quaternion quat_from_angle_axis(double angle, const Vec3& axis);

}  // namespace tethersim
