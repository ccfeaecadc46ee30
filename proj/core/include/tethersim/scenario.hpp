#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tethersim/cascade.hpp"
#include "tethersim/governor.hpp"

namespace tethersim {

enum class ExperimentKind {
  run,
  lemma1_ideal,
  lemma2_mc,
  gain_ladder,
  step_governed,
  step_ungoverned,
  integrator_order,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);

struct CertificateConfig {
  std::optional<double> eta;      // default: midpoint of the admissible interval
  std::optional<double> epsilon;  // s, default: half of the admissible maximum
  double zeta_max{M_PI / 3.0};    // rad, outer ISS restriction on |zeta|
  std::optional<double> thrust_sup;  // N, default: thrust_max
};

struct ExperimentParams {
  int mc_samples{100000};
  std::vector<double> ladder{10.0, 100.0, 1000.0, 10000.0};
  double ladder_kd_scale{2.0};  // kd = scale * sqrt(kp) along the ladder
  double sin_amplitude{0.5};    // rad/s, forced desired-rate amplitude
  double sin_freq_hz{1.0};
  double forced_duration{12.0};  // s
};

/// Full description of one run or experiment. Scenario files are strict
/// JSON: unknown fields are errors, units live in the field names.
struct Scenario {
  ExperimentKind experiment{ExperimentKind::run};
  PlantParams plant;
  OuterGains outer;
  InnerGains inner;
  GovernorConfig governor;
  CertificateConfig certs;
  ExperimentParams exp;
  UavState initial;
  Vec3 p_d{0, 0, 1};
  double duration{20.0};  // s
  double dt{1e-3};        // s
  std::uint64_t seed{1};
  bool ideal_attitude{false};

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  std::string to_json() const;
  static Scenario from_json(const std::string& text);
  static Scenario from_json_file(const std::string& path);
};

}  // namespace tethersim
