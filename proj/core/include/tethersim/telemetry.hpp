#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tethersim/so3.hpp"

namespace tethersim {

/// One row of the run log. Column order in the delimited file follows the
/// field order here; it is part of the output format.
struct TelemetryRecord {
  double t{0.0};              // s
  Vec3 p{Vec3::Zero()};       // m
  Vec3 v{Vec3::Zero()};       // m/s
  Quaternion q;               // attitude, scalar first
  Vec3 omega{Vec3::Zero()};   // rad/s
  double thrust_pre{0.0};     // N, commanded before saturation
  double thrust_post{0.0};    // N, applied
  Vec3 torque{Vec3::Zero()};  // N m
  double tension{0.0};        // N, <F_a, r>
  double multiplier{0.0};     // N, cable reaction incl. centripetal term
  double dist{0.0};           // m, great-circle distance to p_d
  double zeta_err{0.0};       // rad, attitude error angle
  double delta_norm{0.0};     // N, ||inner-loop disturbance||
  double lemma2{0.0};         // N, sqrt(6) T |zeta|
  Vec3 p_a{Vec3::Zero()};     // m, applied reference
  double v_in{0.0};           // inner Lyapunov value
  double v_out{0.0};          // outer Lyapunov value w.r.t. p_a
  bool saturated{false};
  bool tension_violated{false};
};

struct TelemetryLog {
  std::vector<TelemetryRecord> records;
  /// Compact JSON of the scenario that produced the run, embedded as '#'
  /// comment lines ahead of the header so `audit` is self contained.
  std::string scenario_json;
  bool diverged{false};
  std::size_t last_valid{0};
};

std::string telemetry_header();

void write_telemetry(const TelemetryLog& log, const std::string& path);

/// Throws std::runtime_error on malformed files.
TelemetryLog read_telemetry(const std::string& path);

}  // namespace tethersim
