#pragma once

#include "tethersim/cascade.hpp"

namespace tethersim {

enum class GovernorMode { off, rg, erg };
enum class DsmMode { paper, clamped };

struct GovernorConfig {
  GovernorMode mode{GovernorMode::off};
  double horizon{3.0};     // s, prediction window
  // Prediction step; must resolve the inner loop's fast damping mode
  // (about kd/lambda_min(J) rad/s) or the forward simulation blows up.
  double dt_pred{0.001};   // s
  double c_tol{0.01};      // resolution of the interpolation search
  double eta_nav{1e-6};    // m^2, navigation-field regularizer
  double kappa{0.5};       // DSM scale, reference speed per N^2 of margin
  double eps_margin{0.3};  // N, static safety margin
  DsmMode dsm{DsmMode::clamped};
  int period_steps{20};    // RG cadence in plant steps; the ERG runs every step

  void validate() const;
};

struct TensionPrediction {
  double min_tension{0.0};    // N, minimum of <F_a, r> over the horizon
  bool thrust_feasible{true};  // pre-saturation command stayed in [0, T_max]
};

/// Forward-simulates the closed loop from `state` with the reference held at
/// p_a, sampling the taut-cable quantity at every prediction step including
/// both endpoints. horizon == 0 evaluates the current instant only.
TensionPrediction predict_min_tension(const CascadeLoop& loop,
                                      const UavState& state, const Vec3& p_a,
                                      double horizon, double dt_pred);

/// One discrete governor update: moves p_a along the spherical interpolation
/// toward p_d by the largest admissible c in [0, 1]. c = 0 is always
/// admissible by recursive feasibility. Throws std::domain_error when p_a and
/// p_d are antipodal.
Vec3 rg_update(const GovernorConfig& cfg, const CascadeLoop& loop,
               const UavState& state, const Vec3& p_a, const Vec3& p_d);

/// Attraction field along the geodesic from p_a toward p_d, tangent at p_a,
/// magnitude at most one.
Vec3 erg_navigation_field(const Vec3& p_a, const Vec3& p_d, double eta_nav,
                          double cable_length);

/// Dynamic safety margin. Clamped mode (default) vanishes at and below
/// tension_min + eps_margin; paper mode evaluates kappa (margin + eps)^2.
double erg_dsm(double predicted_min, double tension_min, double kappa,
               double eps_margin, DsmMode mode);

/// One explicit-Euler update of the continuous governor, renormalized to the
/// sphere. The DSM is zeroed when the prediction reports thrust infeasible.
Vec3 erg_step(const GovernorConfig& cfg, const CascadeLoop& loop,
              const UavState& state, const Vec3& p_a, const Vec3& p_d,
              double dt, const PlantParams& params);

}  // namespace tethersim
