#include "tethersim/governor.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tethersim {

void GovernorConfig::validate() const {
  if (!(horizon >= 0.0)) {
    throw std::invalid_argument("governor.horizon_s must be >= 0");
  }
  if (!(dt_pred > 0.0)) {
    throw std::invalid_argument("governor.dt_pred_s must be > 0");
  }
  if (!(c_tol > 0.0) || !(c_tol < 1.0)) {
    throw std::invalid_argument("governor.c_tol must lie in (0, 1)");
  }
  if (!(eta_nav > 0.0)) {
    throw std::invalid_argument("governor.eta_nav_m2 must be > 0");
  }
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("governor.kappa must be > 0");
  }
  if (!(eps_margin > 0.0)) {
    throw std::invalid_argument("governor.margin_N must be > 0");
  }
  if (period_steps < 1) {
    throw std::invalid_argument("governor.period_steps must be >= 1");
  }
}

TensionPrediction predict_min_tension(const CascadeLoop& loop,
                                      const UavState& state, const Vec3& p_a,
                                      double horizon, double dt_pred) {
  CascadeLoop sim = loop;  // fork: replay the live code path
  UavState x = state;
  const auto n_steps = static_cast<std::size_t>(std::llround(horizon / dt_pred));

  TensionPrediction pred;
  pred.min_tension = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const CascadeStepInfo info = sim.control(x, p_a, dt_pred);
    pred.min_tension = std::min(pred.min_tension, info.tension);
    if (info.thrust_pre > loop.config().plant.thrust_max || info.thrust_pre < 0.0) {
      pred.thrust_feasible = false;
    }
    if (k < n_steps) {
      sim.advance(x, info, dt_pred);
    }
  }
  return pred;
}

namespace {

bool reference_admissible(const GovernorConfig& cfg, const CascadeLoop& loop,
                          const UavState& state, const Vec3& candidate) {
  const TensionPrediction pred =
      predict_min_tension(loop, state, candidate, cfg.horizon, cfg.dt_pred);
  return pred.thrust_feasible &&
         pred.min_tension >= loop.config().plant.tension_min;
}

}  // namespace

Vec3 rg_update(const GovernorConfig& cfg, const CascadeLoop& loop,
               const UavState& state, const Vec3& p_a, const Vec3& p_d) {
  const double length = loop.config().plant.cable_length;
  const double cosine = p_a.dot(p_d) / (length * length);
  if (cosine <= -1.0 + 1e-12) {
    throw std::domain_error(
        "rg_update: applied and desired references are antipodal");
  }

  const auto candidate = [&](double c) -> Vec3 {
    const Vec3 blend = (1.0 - c) * p_a + c * p_d;
    return length * blend.normalized();
  };
  const auto admissible = [&](double c) {
    return reference_admissible(cfg, loop, state, candidate(c));
  };

  if (admissible(1.0)) {
    return candidate(1.0);
  }

  // Bisection keeps lo admissible and hi inadmissible; c = 0 holds the
  // current reference and needs no re-verification.
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > cfg.c_tol) {
    const double mid = 0.5 * (lo + hi);
    if (admissible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // Monotonicity probe: a point beyond the inadmissible boundary should stay
  // inadmissible. If it does not, fall back to a descending scan.
  const double probe = hi + 0.5 * (1.0 - hi);
  if (probe < 1.0 && admissible(probe)) {
    for (double c = 1.0; c > lo; c -= cfg.c_tol) {
      if (admissible(c)) {
        return candidate(c);
      }
    }
  }
  return candidate(lo);
}

Vec3 erg_navigation_field(const Vec3& p_a, const Vec3& p_d, double eta_nav,
                          double cable_length) {
  (void)cable_length;
  const Vec3 w = p_a.cross(p_d).cross(p_a);
  return w / std::max(w.norm(), eta_nav);
}

double erg_dsm(double predicted_min, double tension_min, double kappa,
               double eps_margin, DsmMode mode) {
  if (mode == DsmMode::paper) {
    const double m = predicted_min - tension_min + eps_margin;
    return kappa * m * m;
  }
  const double m = std::max(predicted_min - tension_min - eps_margin, 0.0);
  return kappa * m * m;
}

Vec3 erg_step(const GovernorConfig& cfg, const CascadeLoop& loop,
              const UavState& state, const Vec3& p_a, const Vec3& p_d,
              double dt, const PlantParams& params) {
  const TensionPrediction pred =
      predict_min_tension(loop, state, p_a, cfg.horizon, cfg.dt_pred);
  double delta = erg_dsm(pred.min_tension, params.tension_min, cfg.kappa,
                         cfg.eps_margin, cfg.dsm);
  if (!pred.thrust_feasible) {
    delta = 0.0;  // actuator feasibility gates the reference motion too
  }
  const Vec3 rho = erg_navigation_field(p_a, p_d, cfg.eta_nav,
                                        params.cable_length);
  const Vec3 next = p_a + dt * delta * rho;
  return params.cable_length * next.normalized();
}

}  // namespace tethersim
