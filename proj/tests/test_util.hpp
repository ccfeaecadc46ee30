#pragma once

#include <random>

#include "tethersim/plant.hpp"
#include "tethersim/so3.hpp"

namespace tethersim::test {

inline std::mt19937_64 make_rng(std::uint64_t seed = 12345) {
  return std::mt19937_64(seed);
}

inline Vec3 random_vec3(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  return {g(rng), g(rng), g(rng)};
}

inline Quaternion random_unit_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return Quaternion{g(rng), Vec3(g(rng), g(rng), g(rng))}.normalized();
}

inline Vec3 random_on_sphere(std::mt19937_64& rng, double radius) {
  Vec3 v = random_vec3(rng);
  while (v.norm() < 1e-6) {
    v = random_vec3(rng);
  }
  return radius * v.normalized();
}

/// Random constrained state: p on the sphere, v tangent, unit attitude.
inline UavState random_state(std::mt19937_64& rng, double cable_length,
                             double speed = 1.0) {
  UavState s;
  s.p = random_on_sphere(rng, cable_length);
  const Vec3 r_hat = s.p / cable_length;
  Vec3 v = random_vec3(rng, speed);
  v -= v.dot(r_hat) * r_hat;
  s.v = v;
  s.q = random_unit_quat(rng);
  s.omega = random_vec3(rng, 0.5);
  return s;
}

}  // namespace tethersim::test
