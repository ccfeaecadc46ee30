#include "tethersim/certificates.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tethersim/outer_loop.hpp"

namespace tethersim {

double lemma2_bound(double thrust, double zeta) {
  return std::sqrt(6.0) * thrust * std::abs(zeta);
}

double eta_max(double kp, double kd, const Mat3& inertia) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(inertia);
  const double lambda_max = es.eigenvalues().maxCoeff();
  return std::min(kd / lambda_max,
                  2.0 * kp * kd / (4.0 * lambda_max * kp + kd * kd));
}

double lyapunov_inner(const Quaternion& q_tilde, const Vec3& omega,
                      const InnerGains& gains, double eta, const Mat3& inertia) {
  const Vec3& qv = q_tilde.v;
  return 2.0 * gains.kp * (1.0 - q_tilde.w) +
         2.0 * eta * gains.kd * qv.squaredNorm() +
         2.0 * eta * qv.dot(inertia * omega) +
         0.5 * omega.dot(inertia * omega);
}

InnerCertificate inner_gain(double kp, double kd, double eta, double lambda_max) {
  InnerCertificate c;
  c.eta = eta;
  c.lambda_max = lambda_max;
  c.q_bar << 2.0 * eta * kp, eta * kd,
             eta * kd, kd - 2.0 * eta * lambda_max;
  c.d_bar << kp + 2.0 * eta * kd, 2.0 * eta * lambda_max;

  const double det = c.q_bar(0, 0) * c.q_bar(1, 1) - c.q_bar(0, 1) * c.q_bar(1, 0);
  if (!(c.q_bar(0, 0) > 0.0) || !(det > 0.0)) {
    throw std::domain_error("inner_gain: q_bar is not positive definite, "
                            "eta lies outside its admissible interval");
  }
  c.gamma_in = (c.q_bar(1, 1) * c.d_bar(0) - c.q_bar(0, 1) * c.d_bar(1)) / det;
  return c;
}

double epsilon_max(double h_pt, double h_dt) {
  return 16.0 * h_dt / (32.0 * h_pt + h_dt * h_dt * M_PI * M_PI);
}

double default_epsilon(double h_pt, double h_dt) {
  return 0.5 * std::min(std::sqrt(1.0 / h_pt), epsilon_max(h_pt, h_dt));
}

double lyapunov_outer(const Vec3& p, const Vec3& v, const Vec3& p_d,
                      double h_pt, double epsilon, double cable_length) {
  const double dist = great_circle_dist(p, p_d, cable_length);
  // Cross = dist <v, t> in the tangent basis; the basis-free form avoids the
  // polar singularity of (theta, phi) coordinates.
  const Vec3 w = p.cross(p_d).cross(p);
  const double wn = w.norm();
  const double cross = wn > 0.0 ? dist * v.dot(w) / wn : 0.0;
  return 0.5 * dist * dist + 0.5 * v.squaredNorm() / h_pt - epsilon * cross;
}

namespace {

double min_eig_sym2(const Eigen::Matrix2d& m) {
  const double half_tr = 0.5 * (m(0, 0) + m(1, 1));
  const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
  return half_tr - std::sqrt(half_diff * half_diff + m(0, 1) * m(0, 1));
}

}  // namespace

OuterCertificate outer_certificate(double h_pt, double h_dt, double epsilon,
                                   double cable_length) {
  if (!(epsilon > 0.0) || !(epsilon < std::sqrt(1.0 / h_pt))) {
    throw std::domain_error(
        "outer_certificate: epsilon must lie in (0, sqrt(1/h_pt))");
  }
  OuterCertificate c;
  c.epsilon = epsilon;
  c.h_pt = h_pt;
  c.h_dt = h_dt;
  c.q_mat << epsilon * h_pt, -epsilon * h_dt * M_PI / 4.0,
             -epsilon * h_dt * M_PI / 4.0, h_dt / h_pt - 2.0 * epsilon;
  c.mu_q = min_eig_sym2(c.q_mat);
  if (!(c.mu_q > 0.0)) {
    throw std::domain_error("outer_certificate: Q is not positive definite, "
                            "epsilon exceeds its admissible interval");
  }
  const double coeff_norm = std::sqrt(epsilon * epsilon + 1.0 / (h_pt * h_pt));
  c.iss_gain = coeff_norm / c.mu_q;
  c.delta_max = 4.0 * c.mu_q * cable_length * cable_length / coeff_norm;
  return c;
}

bool small_gain_check(double gamma_in, double gamma_out) {
  return gamma_in * gamma_out < 1.0;
}

bool CertificateReport::all_pass() const {
  for (const auto& p : properties) {
    if (p.enforced && !p.pass) {
      return false;
    }
  }
  return true;
}

const PropertyResult* CertificateReport::find(const std::string& name) const {
  for (const auto& p : properties) {
    if (p.name == name) {
      return &p;
    }
  }
  return nullptr;
}

std::string CertificateReport::to_text() const {
  std::ostringstream os;
  os << "certificate report\n";
  os << "==================\n";
  for (const auto& p : properties) {
    os << "property     : " << p.name << "\n";
    os << "status       : " << (p.pass ? "PASS" : "FAIL")
       << (p.enforced ? "" : " (informational)") << "\n";
    os.precision(12);
    os << "worst margin : " << p.worst_margin;
    if (p.worst_time >= 0.0) {
      os << " at t=" << p.worst_time << " s";
    }
    os << "\n";
    os << "violations   : " << p.violations << "\n";
    if (!p.detail.empty()) {
      os << "detail       : " << p.detail << "\n";
    }
    os << "\n";
  }
  os << "first broken bound : "
     << (first_broken.empty() ? "none" : first_broken);
  if (!first_broken.empty() && first_broken_time >= 0.0) {
    os << " (t=" << first_broken_time << " s)";
  }
  os << "\n";
  os << "overall            : " << (all_pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

namespace {

/// Per-step margin scan; margin < 0 counts as a violation.
struct MarginScan {
  PropertyResult result;
  bool first = true;

  explicit MarginScan(std::string name, bool enforced) {
    result.name = std::move(name);
    result.enforced = enforced;
  }

  void update(double margin, double t) {
    if (first || margin < result.worst_margin) {
      result.worst_margin = margin;
      result.worst_time = t;
      first = false;
    }
    if (margin < 0.0) {
      ++result.violations;
      if (result.pass) {
        result.pass = false;
        first_violation_time = t;
      }
    }
  }

  double first_violation_time{-1.0};
};

}  // namespace

CertificateReport trajectory_audit(const TelemetryLog& log, const AuditConfig& cfg) {
  const auto& rec = log.records;
  const double length = cfg.plant.cable_length;
  const double thrust_sup =
      cfg.thrust_sup > 0.0 ? cfg.thrust_sup : cfg.plant.thrust_max;

  MarginScan taut("cable-taut", true);
  MarginScan radius("sphere-radius", true);
  MarginScan tangency("velocity-tangency", true);
  MarginScan lemma2("lemma2-bound", true);
  MarginScan restriction("delta-restriction", false);
  MarginScan iss("iss-implication", true);
  MarginScan monotone("vout-monotone", cfg.enforce_vout_monotone);
  MarginScan saturation("thrust-saturation", false);

  for (std::size_t k = 0; k < rec.size(); ++k) {
    const auto& r = rec[k];
    taut.update(r.tension - cfg.plant.tension_min + cfg.tension_tol, r.t);
    radius.update(cfg.radius_rel_tol - std::abs(r.p.norm() - length) / length, r.t);
    const double tang = std::abs(r.p.dot(r.v)) /
                        (length * std::max(r.v.norm(), 1.0));
    tangency.update(cfg.tangency_tol - tang, r.t);
    lemma2.update(r.lemma2 - r.delta_norm, r.t);
    restriction.update(cfg.outer_cert.delta_max - r.delta_norm, r.t);
    saturation.update(cfg.plant.thrust_max - r.thrust_pre, r.t);

    if (k > 0) {
      monotone.update(cfg.vout_increase_tol - (r.v_out - rec[k - 1].v_out), r.t);
    }

    // ISS implication under the certificate's restriction: when the tracking
    // state sits outside the threshold ball, the sampled V_out must decrease.
    if (k > 0 && k + 1 < rec.size()) {
      const bool restricted = r.delta_norm <= cfg.outer_cert.delta_max &&
                              std::abs(r.zeta_err) <= cfg.zeta_max &&
                              r.thrust_pre <= thrust_sup;
      if (restricted) {
        const double state_norm = std::sqrt((r.p - r.p_a).squaredNorm() +
                                            r.v.squaredNorm());
        if (state_norm > cfg.outer_cert.iss_radius(r.delta_norm)) {
          const double vdot = (rec[k + 1].v_out - rec[k - 1].v_out) /
                              (rec[k + 1].t - rec[k - 1].t);
          iss.update(cfg.vdot_rel_tol * r.v_out - vdot, r.t);
        }
      }
    }
  }

  MarginScan finite("finite-state", true);
  if (log.diverged) {
    finite.update(-1.0, rec.empty() ? 0.0 : rec[log.last_valid].t);
    finite.result.detail = "state became non-finite";
  }

  CertificateReport report;
  report.properties.push_back(taut.result);
  report.properties.push_back(radius.result);
  report.properties.push_back(tangency.result);
  report.properties.push_back(lemma2.result);
  report.properties.push_back(restriction.result);
  report.properties.push_back(iss.result);
  report.properties.push_back(monotone.result);
  saturation.result.pass = true;  // reported only; violations = saturated steps
  report.properties.push_back(saturation.result);
  report.properties.push_back(finite.result);

  if (cfg.gamma_in && cfg.gamma_out) {
    PropertyResult sg;
    sg.name = "small-gain";
    sg.enforced = true;
    sg.worst_margin = 1.0 - (*cfg.gamma_in) * (*cfg.gamma_out);
    sg.pass = sg.worst_margin > 0.0;
    sg.worst_time = rec.empty() ? 0.0 : rec.front().t;
    sg.violations = sg.pass ? 0 : 1;
    std::ostringstream d;
    d << "gamma_in=" << *cfg.gamma_in << " gamma_out=" << *cfg.gamma_out;
    sg.detail = d.str();
    report.properties.push_back(sg);
  }

  // Earliest violation across every scanned bound, informational included.
  const MarginScan* scans[] = {&taut,        &radius,   &tangency,
                               &lemma2,      &restriction, &iss,
                               &monotone,    &finite};
  double best_t = -1.0;
  for (const auto* s : scans) {
    if (s->result.violations > 0 &&
        (best_t < 0.0 || s->first_violation_time < best_t)) {
      best_t = s->first_violation_time;
      report.first_broken = s->result.name;
      report.first_broken_time = s->first_violation_time;
    }
  }
  if (cfg.gamma_in && cfg.gamma_out &&
      !small_gain_check(*cfg.gamma_in, *cfg.gamma_out)) {
    // A failed small-gain product is a design-level break that precedes any
    // trajectory event.
    report.first_broken = "small-gain";
    report.first_broken_time = rec.empty() ? 0.0 : rec.front().t;
  }
  return report;
}

}  // namespace tethersim
