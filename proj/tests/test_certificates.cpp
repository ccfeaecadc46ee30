#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "test_util.hpp"
#include "tethersim/certificates.hpp"
#include "tethersim/outer_loop.hpp"

using namespace tethersim;

namespace {
const Mat3 kInertia = Vec3(0.02, 0.02, 0.04).asDiagonal();
}

TEST_CASE("lemma2_bound arithmetic") {
  CHECK(lemma2_bound(10.0, 0.0) == 0.0);
  CHECK(lemma2_bound(10.0, 0.1) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  CHECK(lemma2_bound(3.0, -0.2) == lemma2_bound(3.0, 0.2));
}

TEST_CASE("eta_max hand value and limits") {
  const Mat3 inertia = (0.02 * Mat3::Identity()).eval();
  CHECK(eta_max(100.0, 20.0, inertia) ==
        doctest::Approx(4000.0 / 408.0).epsilon(1e-12));
  CHECK(eta_max(100.0, 1e-9, inertia) < 1e-6);

  // Isotropic inertia: the scalar bound uses its eigenvalue directly.
  const Mat3 j2 = (0.05 * Mat3::Identity()).eval();
  CHECK(eta_max(10.0, 5.0, j2) ==
        doctest::Approx(std::min(5.0 / 0.05,
                                 2.0 * 10.0 * 5.0 / (4.0 * 0.05 * 10.0 + 25.0)))
            .epsilon(1e-14));
}

TEST_CASE("lyapunov_inner values and positive definiteness") {
  const InnerGains gains{100.0, 20.0};
  const double eta = 0.5 * eta_max(gains.kp, gains.kd, kInertia);

  CHECK(lyapunov_inner(Quaternion::identity(), Vec3::Zero(), gains, eta,
                       kInertia) == 0.0);

  const Mat3 iso = (0.02 * Mat3::Identity()).eval();
  CHECK(lyapunov_inner(Quaternion::identity(), Vec3(1, 0, 0), gains, 1.0, iso) ==
        doctest::Approx(0.01).epsilon(1e-14));

  auto rng = test::make_rng(67);
  for (int i = 0; i < 10000; ++i) {
    const Quaternion qt = test::random_unit_quat(rng).canonicalized();
    const Vec3 omega = test::random_vec3(rng, 2.0);
    if (qt.v.norm() + omega.norm() < 1e-9) {
      continue;
    }
    CHECK(lyapunov_inner(qt, omega, gains, eta, kInertia) > 0.0);
  }
}

TEST_CASE("inner_gain frozen oracle values") {
  // 2x2 inversion by hand: Q = [[200, 20], [20, 19.96]], D = [140, 0.04].
  const InnerCertificate c = inner_gain(100.0, 20.0, 1.0, 0.02);
  CHECK(c.q_bar(0, 0) == 200.0);
  CHECK(c.q_bar(0, 1) == 20.0);
  CHECK(c.q_bar(1, 1) == doctest::Approx(19.96).epsilon(1e-15));
  CHECK(c.d_bar(0) == 140.0);
  CHECK(c.d_bar(1) == doctest::Approx(0.04).epsilon(1e-15));
  CHECK(c.gamma_in == doctest::Approx(0.777728285077951).epsilon(1e-12));

  const InnerCertificate flat = inner_gain(100.0, 20.0, 1.0, 0.0);
  CHECK(flat.d_bar(1) == 0.0);

  CHECK_THROWS_AS(inner_gain(100.0, 20.0, 1000.0, 0.02), std::domain_error);
}

TEST_CASE("gamma_in scaling along the stiffness ladder") {
  // With kd = c sqrt(kp) and eta at the interval midpoint the exact law is
  // gamma_in = C / sqrt(kp), so one decade of kp buys sqrt(10) in gain.
  const double c_scale = 2.0;
  const double lambda_max = 0.04;
  const auto gamma_at = [&](double kp) {
    const double kd = c_scale * std::sqrt(kp);
    const Mat3 inertia = (Vec3(0.02, 0.02, lambda_max).asDiagonal()).toDenseMatrix();
    const double eta = 0.5 * eta_max(kp, kd, inertia);
    return inner_gain(kp, kd, eta, lambda_max).gamma_in;
  };

  double prev = std::numeric_limits<double>::infinity();
  for (double kp : {10.0, 100.0, 1000.0, 10000.0}) {
    const double g = gamma_at(kp);
    CHECK(g < prev);
    prev = g;
  }
  const double ratio = gamma_at(10000.0) / gamma_at(100.0);
  CHECK(ratio > 0.095);
  CHECK(ratio < 0.105);
}

TEST_CASE("epsilon_max hand value") {
  CHECK(epsilon_max(10.0, 5.0) ==
        doctest::Approx(80.0 / (320.0 + 25.0 * M_PI * M_PI)).epsilon(1e-15));
  CHECK(default_epsilon(10.0, 5.0) <
        std::min(std::sqrt(0.1), epsilon_max(10.0, 5.0)));
}

TEST_CASE("lyapunov_outer values and positive definiteness") {
  const double h_pt = 4.0;
  const double eps = default_epsilon(4.0, 3.0);
  const Vec3 z = Vec3::UnitZ();
  CHECK(lyapunov_outer(z, Vec3::Zero(), z, h_pt, eps, 1.0) == 0.0);

  const Vec3 x = Vec3::UnitX();
  const double d = great_circle_dist(x, z, 1.0);
  CHECK(lyapunov_outer(x, Vec3::Zero(), z, h_pt, eps, 1.0) ==
        doctest::Approx(0.5 * d * d).epsilon(1e-15));

  auto rng = test::make_rng(71);
  for (int i = 0; i < 10000; ++i) {
    const UavState s = test::random_state(rng, 1.0, 1.5);
    const Vec3 pd = test::random_on_sphere(rng, 1.0);
    if (great_circle_dist(s.p, pd, 1.0) + s.v.norm() < 1e-9) {
      continue;
    }
    CHECK(lyapunov_outer(s.p, s.v, pd, h_pt, eps, 1.0) > 0.0);
  }
}

TEST_CASE("outer_certificate matrix, limits and rejection") {
  const double h_pt = 10.0;
  const double h_dt = 5.0;
  const double eps = 0.5 * epsilon_max(h_pt, h_dt);
  const OuterCertificate c = outer_certificate(h_pt, h_dt, eps, 1.0);
  CHECK(c.q_mat(0, 1) == c.q_mat(1, 0));
  CHECK(c.mu_q > 0.0);
  CHECK(c.iss_radius(2.0) == doctest::Approx(2.0 * c.iss_gain).epsilon(1e-15));

  const OuterCertificate small = outer_certificate(h_pt, h_dt, 1e-9, 1.0);
  CHECK(small.mu_q < 1e-7);
  CHECK(small.delta_max < 1e-6);

  CHECK_THROWS_AS(outer_certificate(h_pt, h_dt, epsilon_max(h_pt, h_dt) * 1.01, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(outer_certificate(0.01, 500.0, 12.0, 1.0), std::domain_error);
}

TEST_CASE("closed-form 2x2 eigenvalues match the iterative solver") {
  auto rng = test::make_rng(73);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double h_pt = 1.0 + std::abs(u(rng));
    const double h_dt = 1.0 + std::abs(u(rng));
    const double eps = 0.9 * epsilon_max(h_pt, h_dt);
    const OuterCertificate c = outer_certificate(h_pt, h_dt, eps, 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(c.q_mat);
    CHECK(std::abs(c.mu_q - es.eigenvalues().minCoeff()) < 1e-12);
  }
}

TEST_CASE("small_gain_check") {
  CHECK(small_gain_check(0.0, 123.0));
  CHECK(small_gain_check(0.5, 1.9));
  CHECK_FALSE(small_gain_check(0.5, 2.1));
}

TEST_CASE("trajectory_audit on a synthetic constant log") {
  PlantParams plant;
  plant.mass = 1.0;
  plant.inertia = kInertia;
  plant.cable_length = 1.0;
  plant.gravity = 9.81;
  plant.thrust_max = 30.0;
  plant.tension_min = 0.5;

  AuditConfig cfg;
  cfg.plant = plant;
  cfg.outer_cert = outer_certificate(4.0, 3.0, default_epsilon(4.0, 3.0), 1.0);
  cfg.enforce_vout_monotone = true;

  TelemetryLog log;
  for (int k = 0; k < 100; ++k) {
    TelemetryRecord r;
    r.t = 1e-3 * k;
    r.p = Vec3(0, 0, 1);
    r.v = Vec3::Zero();
    r.q = Quaternion::identity();
    r.thrust_pre = r.thrust_post = 11.81;
    r.tension = 2.0;
    r.p_a = Vec3(0, 0, 1);
    log.records.push_back(r);
  }
  const CertificateReport rep = trajectory_audit(log, cfg);
  CHECK(rep.all_pass());
  CHECK(rep.first_broken.empty());
  CHECK(rep.find("cable-taut")->worst_margin ==
        doctest::Approx(1.5 + cfg.tension_tol).epsilon(1e-12));

  // Dip the tension below the floor mid-run: the audit must name it first.
  log.records[50].tension = 0.2;
  log.records[50].tension_violated = true;
  const CertificateReport rep2 = trajectory_audit(log, cfg);
  CHECK_FALSE(rep2.all_pass());
  CHECK(rep2.first_broken == "cable-taut");
  CHECK(rep2.first_broken_time == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(rep2.find("cable-taut")->violations == 1);
}

TEST_CASE("report text contains one block per property") {
  TelemetryLog log;
  TelemetryRecord r;
  r.p = Vec3(0, 0, 1);
  r.p_a = r.p;
  r.tension = 2.0;
  log.records.push_back(r);

  AuditConfig cfg;
  cfg.plant.tension_min = 0.5;
  cfg.outer_cert = outer_certificate(4.0, 3.0, 0.1, 1.0);
  cfg.gamma_in = 0.5;
  cfg.gamma_out = 0.5;
  const std::string text = trajectory_audit(log, cfg).to_text();
  CHECK(text.find("cable-taut") != std::string::npos);
  CHECK(text.find("iss-implication") != std::string::npos);
  CHECK(text.find("small-gain") != std::string::npos);
  CHECK(text.find("overall") != std::string::npos);
}
