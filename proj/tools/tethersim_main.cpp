#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tethersim/simulation.hpp"

namespace fs = std::filesystem;
using namespace tethersim;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitConfigError = 2;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<std::string> governor;
  std::optional<std::string> dsm;
};

void apply_overrides(Scenario& sc, const Overrides& ov) {
  if (ov.seed) sc.seed = *ov.seed;
  if (ov.dt) sc.dt = *ov.dt;
  if (ov.governor) {
    if (*ov.governor == "off") sc.governor.mode = GovernorMode::off;
    else if (*ov.governor == "rg") sc.governor.mode = GovernorMode::rg;
    else if (*ov.governor == "erg") sc.governor.mode = GovernorMode::erg;
    else throw std::invalid_argument("--governor must be off, rg or erg");
  }
  if (ov.dsm) {
    if (*ov.dsm == "paper") sc.governor.dsm = DsmMode::paper;
    else if (*ov.dsm == "clamped") sc.governor.dsm = DsmMode::clamped;
    else throw std::invalid_argument("--dsm must be paper or clamped");
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open " + path);
  }
  f << text;
}

int finish_run(const RunResult& result, const std::string& out_dir,
               const std::string& stem) {
  fs::create_directories(out_dir);
  const std::string telemetry_path = out_dir + "/" + stem + "_telemetry.csv";
  const std::string report_path = out_dir + "/" + stem + "_report.txt";
  write_telemetry(result.log, telemetry_path);
  write_text(report_path, result.report.to_text());
  std::cout << result.report.to_text();
  std::cout << "telemetry: " << telemetry_path << "\n";
  std::cout << "report:    " << report_path << "\n";
  return result.report.all_pass() ? kExitPass : kExitPropertyFailure;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir,
                 const Overrides& ov) {
  Scenario sc = Scenario::from_json_file(scenario_path);
  apply_overrides(sc, ov);
  sc.validate();
  return finish_run(run_scenario(sc), out_dir, "run");
}

int cmd_experiment(const std::string& name, const std::string& scenario_path,
                   const std::string& out_dir, const Overrides& ov) {
  Scenario sc = Scenario::from_json_file(scenario_path);
  apply_overrides(sc, ov);
  sc.experiment = experiment_from_string(name);
  sc.validate();
  fs::create_directories(out_dir);

  switch (sc.experiment) {
    case ExperimentKind::run:
    case ExperimentKind::lemma1_ideal:
    case ExperimentKind::step_governed:
      return finish_run(run_scenario(sc), out_dir, name);
    case ExperimentKind::step_ungoverned: {
      Scenario off = sc;
      off.governor.mode = GovernorMode::off;
      return finish_run(run_scenario(off), out_dir, name);
    }
    case ExperimentKind::lemma2_mc: {
      const Lemma2McResult r = run_lemma2_mc(sc);
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "lemma2_mc: samples=%d violations=%d worst_margin=%.17g\n",
                    r.samples, r.violations, r.worst_margin);
      std::cout << buf;
      write_text(out_dir + "/lemma2_mc.txt", buf);
      return r.violations == 0 ? kExitPass : kExitPropertyFailure;
    }
    case ExperimentKind::gain_ladder: {
      const auto rows = run_gain_ladder(sc);
      std::string text = "kp_Nm,kd_Nms,eta,gamma_in,steady_zeta_rad,bound_rad,within_bound\n";
      bool monotone = true;
      bool bounded = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        char buf[200];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      rows[i].kp, rows[i].kd, rows[i].eta, rows[i].gamma_in,
                      rows[i].steady_zeta, rows[i].bound,
                      rows[i].within_bound ? 1 : 0);
        text += buf;
        if (i > 0 && !(rows[i].gamma_in < rows[i - 1].gamma_in)) monotone = false;
        if (!rows[i].within_bound) bounded = false;
      }
      std::cout << text;
      write_text(out_dir + "/gain_ladder.csv", text);
      std::cout << "gamma_in monotone decreasing: " << (monotone ? "yes" : "no")
                << "\nsteady error within bound:    " << (bounded ? "yes" : "no")
                << "\n";
      return monotone && bounded ? kExitPass : kExitPropertyFailure;
    }
    case ExperimentKind::integrator_order: {
      const IntegratorOrderResult r = run_integrator_order(sc);
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "integrator_order: err_coarse=%.6e err_fine=%.6e order=%.4f\n",
                    r.err_coarse, r.err_fine, r.order);
      std::cout << buf;
      write_text(out_dir + "/integrator_order.txt", buf);
      return (r.order >= 3.7 && r.order <= 4.3) ? kExitPass : kExitPropertyFailure;
    }
  }
  return kExitConfigError;
}

int cmd_audit(const std::string& telemetry_path, const std::string& out_dir) {
  const TelemetryLog log = read_telemetry(telemetry_path);
  if (log.scenario_json.empty()) {
    throw std::invalid_argument("audit: telemetry has no embedded scenario");
  }
  const Scenario sc = Scenario::from_json(log.scenario_json);

  AuditConfig cfg;
  cfg.plant = sc.plant;
  cfg.outer_cert = resolve_outer_certificate(sc);
  cfg.zeta_max = sc.certs.zeta_max;
  cfg.thrust_sup = sc.certs.thrust_sup ? *sc.certs.thrust_sup : 0.0;
  cfg.enforce_vout_monotone =
      sc.ideal_attitude || sc.experiment == ExperimentKind::lemma1_ideal;
  cfg.gamma_in = resolve_inner_certificate(sc).gamma_in;

  const CertificateReport report = trajectory_audit(log, cfg);
  std::cout << report.to_text();
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text(out_dir + "/audit_report.txt", report.to_text());
  }
  return report.all_pass() ? kExitPass : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tethered-quadrotor cascade control simulator and verifier"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string telemetry_path;
  std::string experiment_name;
  std::string out_dir = "out";
  Overrides ov;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", ov.seed, "override scenario seed");
    cmd->add_option("--dt", ov.dt, "override plant step, seconds");
    cmd->add_option("--governor", ov.governor, "override governor mode: off|rg|erg");
    cmd->add_option("--dsm", ov.dsm, "override DSM variant: paper|clamped");
  };

  CLI::App* sim = app.add_subcommand("simulate", "run one scenario and audit it");
  sim->add_option("scenario", scenario_path, "scenario JSON file")->required();
  add_common(sim);

  CLI::App* exp = app.add_subcommand("experiment", "run a canned experiment");
  exp->add_option("name", experiment_name,
                  "run|lemma1_ideal|lemma2_mc|gain_ladder|step_governed|"
                  "step_ungoverned|integrator_order")
      ->required();
  exp->add_option("scenario", scenario_path, "scenario JSON file")->required();
  add_common(exp);

  CLI::App* aud = app.add_subcommand("audit", "re-audit a telemetry file");
  aud->add_option("telemetry", telemetry_path, "telemetry CSV file")->required();
  aud->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitConfigError;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate(scenario_path, out_dir, ov);
    }
    if (exp->parsed()) {
      return cmd_experiment(experiment_name, scenario_path, out_dir, ov);
    }
    if (aud->parsed()) {
      return cmd_audit(telemetry_path, out_dir);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
