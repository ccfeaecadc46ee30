#pragma once

#include <optional>

#include "tethersim/inner_loop.hpp"
#include "tethersim/outer_loop.hpp"
#include "tethersim/plant.hpp"

namespace tethersim {

struct CascadeConfig {
  PlantParams plant;
  OuterGains outer;
  InnerGains inner;
  /// Attitude tracks q_d exactly (outer-loop analysis mode).
  bool ideal_attitude{false};
  /// Attitude held at a constant error from q_d (disturbance-gain probes).
  std::optional<Quaternion> forced_error;
  /// Norm clamp on the commanded torque; off by default, the model saturates
  /// thrust only.
  std::optional<double> torque_limit;
};

struct CascadeStepInfo {
  double thrust_pre{0.0};   // N, ||F_d|| before saturation
  double thrust_post{0.0};  // N, applied
  Vec3 torque{Vec3::Zero()};
  Quaternion q_d;
  Vec3 omega_d{Vec3::Zero()};
  Quaternion q_tilde;
  double zeta_err{0.0};  // rad
  Vec3 delta{Vec3::Zero()};  // N, exact inner-loop disturbance
  double tension{0.0};       // N, at the applied thrust
  double multiplier{0.0};    // N
  bool saturated{false};
};

/// One controller+plant composition. Copyable so governor predictions can
/// fork the loop from a state snapshot and replay the exact code path the
/// live run will take.
class CascadeLoop {
 public:
  explicit CascadeLoop(CascadeConfig cfg);

  /// Computes the command at `state` for the applied reference. Mutates the
  /// attitude states when an ideal or forced attitude mode is active and
  /// remembers q_d for the next rate estimate.
  CascadeStepInfo control(UavState& state, const Vec3& p_ref, double dt);

  /// Applies the command through the plant integrator.
  void advance(UavState& state, const CascadeStepInfo& info, double dt) const;

  /// control + advance.
  CascadeStepInfo step(UavState& state, const Vec3& p_ref, double dt);

  void reset() { prev_qd_.reset(); }
  const CascadeConfig& config() const { return cfg_; }

 private:
  CascadeConfig cfg_;
  std::optional<Quaternion> prev_qd_;
};

}  // namespace tethersim
