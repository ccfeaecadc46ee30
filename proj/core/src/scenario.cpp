#include "tethersim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tethersim {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::run: return "run";
    case ExperimentKind::lemma1_ideal: return "lemma1_ideal";
    case ExperimentKind::lemma2_mc: return "lemma2_mc";
    case ExperimentKind::gain_ladder: return "gain_ladder";
    case ExperimentKind::step_governed: return "step_governed";
    case ExperimentKind::step_ungoverned: return "step_ungoverned";
    case ExperimentKind::integrator_order: return "integrator_order";
  }
  return "run";
}

ExperimentKind experiment_from_string(const std::string& name) {
  if (name == "run") return ExperimentKind::run;
  if (name == "lemma1_ideal") return ExperimentKind::lemma1_ideal;
  if (name == "lemma2_mc") return ExperimentKind::lemma2_mc;
  if (name == "gain_ladder") return ExperimentKind::gain_ladder;
  if (name == "step_governed") return ExperimentKind::step_governed;
  if (name == "step_ungoverned") return ExperimentKind::step_ungoverned;
  if (name == "integrator_order") return ExperimentKind::integrator_order;
  throw std::invalid_argument("experiment: unknown name '" + name + "'");
}

namespace {

[[noreturn]] void unknown_field(const std::string& scope, const std::string& key) {
  throw std::invalid_argument("unknown field: " + scope + key);
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) {
    throw std::invalid_argument(where + " must be a number");
  }
  return j.get<double>();
}

Vec3 as_vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument(where + " must be an array of 3 numbers");
  }
  return {as_number(j[0], where), as_number(j[1], where), as_number(j[2], where)};
}

Mat3 as_inertia(const json& j, const std::string& where) {
  Mat3 m = Mat3::Zero();
  if (j.is_array() && j.size() == 3 && j[0].is_number()) {
    m.diagonal() << as_number(j[0], where), as_number(j[1], where),
        as_number(j[2], where);
    return m;
  }
  if (j.is_array() && j.size() == 3 && j[0].is_array()) {
    for (int r = 0; r < 3; ++r) {
      if (!j[r].is_array() || j[r].size() != 3) {
        throw std::invalid_argument(where + " rows must have 3 entries");
      }
      for (int c = 0; c < 3; ++c) {
        m(r, c) = as_number(j[r][c], where);
      }
    }
    return m;
  }
  throw std::invalid_argument(where + " must be a diagonal [3] or full [3][3]");
}

Quaternion as_quat(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) {
    throw std::invalid_argument(where + " must be an array [w, x, y, z]");
  }
  return {as_number(j[0], where), as_number(j[1], where),
          as_number(j[2], where), as_number(j[3], where)};
}

void parse_plant(const json& j, PlantParams& p) {
  for (const auto& [key, val] : j.items()) {
    if (key == "mass_kg") p.mass = as_number(val, "plant.mass_kg");
    else if (key == "inertia_kgm2") p.inertia = as_inertia(val, "plant.inertia_kgm2");
    else if (key == "cable_length_m") p.cable_length = as_number(val, "plant.cable_length_m");
    else if (key == "gravity_mps2") p.gravity = as_number(val, "plant.gravity_mps2");
    else if (key == "thrust_max_N") p.thrust_max = as_number(val, "plant.thrust_max_N");
    else if (key == "tension_min_N") p.tension_min = as_number(val, "plant.tension_min_N");
    else unknown_field("plant.", key);
  }
}

void parse_outer(const json& j, OuterGains& g, bool& mu_given) {
  for (const auto& [key, val] : j.items()) {
    if (key == "kp_N_per_m") g.kp = as_number(val, "outer.kp_N_per_m");
    else if (key == "kd_Ns_per_m") g.kd = as_number(val, "outer.kd_Ns_per_m");
    else if (key == "pull_N") g.pull = as_number(val, "outer.pull_N");
    else if (key == "mu_m2") { g.mu = as_number(val, "outer.mu_m2"); mu_given = true; }
    else if (key == "yaw_rad") g.yaw = as_number(val, "outer.yaw_rad");
    else unknown_field("outer.", key);
  }
}

void parse_inner(const json& j, InnerGains& g) {
  for (const auto& [key, val] : j.items()) {
    if (key == "kp_Nm") g.kp = as_number(val, "inner.kp_Nm");
    else if (key == "kd_Nms") g.kd = as_number(val, "inner.kd_Nms");
    else unknown_field("inner.", key);
  }
}

void parse_governor(const json& j, GovernorConfig& g) {
  for (const auto& [key, val] : j.items()) {
    if (key == "mode") {
      const std::string m = val.get<std::string>();
      if (m == "off") g.mode = GovernorMode::off;
      else if (m == "rg") g.mode = GovernorMode::rg;
      else if (m == "erg") g.mode = GovernorMode::erg;
      else throw std::invalid_argument("governor.mode must be off, rg or erg");
    } else if (key == "horizon_s") g.horizon = as_number(val, "governor.horizon_s");
    else if (key == "dt_pred_s") g.dt_pred = as_number(val, "governor.dt_pred_s");
    else if (key == "c_tol") g.c_tol = as_number(val, "governor.c_tol");
    else if (key == "eta_nav_m2") g.eta_nav = as_number(val, "governor.eta_nav_m2");
    else if (key == "kappa") g.kappa = as_number(val, "governor.kappa");
    else if (key == "margin_N") g.eps_margin = as_number(val, "governor.margin_N");
    else if (key == "dsm") {
      const std::string m = val.get<std::string>();
      if (m == "paper") g.dsm = DsmMode::paper;
      else if (m == "clamped") g.dsm = DsmMode::clamped;
      else throw std::invalid_argument("governor.dsm must be paper or clamped");
    } else if (key == "period_steps") g.period_steps = val.get<int>();
    else unknown_field("governor.", key);
  }
}

void parse_certs(const json& j, CertificateConfig& c) {
  for (const auto& [key, val] : j.items()) {
    if (key == "eta") c.eta = as_number(val, "certificates.eta");
    else if (key == "epsilon_s") c.epsilon = as_number(val, "certificates.epsilon_s");
    else if (key == "zeta_max_rad") c.zeta_max = as_number(val, "certificates.zeta_max_rad");
    else if (key == "thrust_sup_N") c.thrust_sup = as_number(val, "certificates.thrust_sup_N");
    else unknown_field("certificates.", key);
  }
}

void parse_exp(const json& j, ExperimentParams& e) {
  for (const auto& [key, val] : j.items()) {
    if (key == "mc_samples") e.mc_samples = val.get<int>();
    else if (key == "ladder") {
      e.ladder.clear();
      for (const auto& v : val) e.ladder.push_back(as_number(v, "experiment_params.ladder"));
    } else if (key == "ladder_kd_scale") e.ladder_kd_scale = as_number(val, "experiment_params.ladder_kd_scale");
    else if (key == "sin_amplitude_radps") e.sin_amplitude = as_number(val, "experiment_params.sin_amplitude_radps");
    else if (key == "sin_freq_hz") e.sin_freq_hz = as_number(val, "experiment_params.sin_freq_hz");
    else if (key == "forced_duration_s") e.forced_duration = as_number(val, "experiment_params.forced_duration_s");
    else unknown_field("experiment_params.", key);
  }
}

void parse_initial(const json& j, UavState& s) {
  for (const auto& [key, val] : j.items()) {
    if (key == "position_m") s.p = as_vec3(val, "initial.position_m");
    else if (key == "velocity_mps") s.v = as_vec3(val, "initial.velocity_mps");
    else if (key == "attitude_wxyz") s.q = as_quat(val, "initial.attitude_wxyz");
    else if (key == "body_rate_radps") s.omega = as_vec3(val, "initial.body_rate_radps");
    else unknown_field("initial.", key);
  }
}

}  // namespace

void Scenario::validate() const {
  plant.validate();
  outer.validate(plant);
  inner.validate();
  governor.validate();

  const double length = plant.cable_length;
  if (std::abs(initial.p.norm() - length) > 1e-9 * length) {
    throw std::invalid_argument("initial.position_m is not on the constraint sphere");
  }
  if (std::abs(p_d.norm() - length) > 1e-9 * length) {
    throw std::invalid_argument("reference_m is not on the constraint sphere");
  }
  if (std::abs(initial.p.dot(initial.v)) >
      1e-6 * length * std::max(initial.v.norm(), 1.0)) {
    throw std::invalid_argument("initial.velocity_mps is not tangent to the sphere");
  }
  if (std::abs(initial.q.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("initial.attitude_wxyz is not unit norm");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("dt_s must be > 0");
  }
  if (!(duration > 0.0)) {
    throw std::invalid_argument("duration_s must be > 0");
  }
  if (certs.eta && !(*certs.eta > 0.0)) {
    throw std::invalid_argument("certificates.eta must be > 0");
  }
  if (exp.mc_samples < 1) {
    throw std::invalid_argument("experiment_params.mc_samples must be >= 1");
  }
}

std::string Scenario::to_json() const {
  json j;
  j["experiment"] = to_string(experiment);
  j["duration_s"] = duration;
  j["dt_s"] = dt;
  j["seed"] = seed;
  j["ideal_attitude"] = ideal_attitude;
  j["plant"] = {
      {"mass_kg", plant.mass},
      {"inertia_kgm2", {{plant.inertia(0, 0), plant.inertia(0, 1), plant.inertia(0, 2)},
                        {plant.inertia(1, 0), plant.inertia(1, 1), plant.inertia(1, 2)},
                        {plant.inertia(2, 0), plant.inertia(2, 1), plant.inertia(2, 2)}}},
      {"cable_length_m", plant.cable_length},
      {"gravity_mps2", plant.gravity},
      {"thrust_max_N", plant.thrust_max},
      {"tension_min_N", plant.tension_min},
  };
  j["outer"] = {
      {"kp_N_per_m", outer.kp}, {"kd_Ns_per_m", outer.kd},
      {"pull_N", outer.pull},   {"mu_m2", outer.mu},
      {"yaw_rad", outer.yaw},
  };
  j["inner"] = {{"kp_Nm", inner.kp}, {"kd_Nms", inner.kd}};
  j["governor"] = {
      {"mode", governor.mode == GovernorMode::off
                   ? "off"
                   : (governor.mode == GovernorMode::rg ? "rg" : "erg")},
      {"horizon_s", governor.horizon},
      {"dt_pred_s", governor.dt_pred},
      {"c_tol", governor.c_tol},
      {"eta_nav_m2", governor.eta_nav},
      {"kappa", governor.kappa},
      {"margin_N", governor.eps_margin},
      {"dsm", governor.dsm == DsmMode::paper ? "paper" : "clamped"},
      {"period_steps", governor.period_steps},
  };
  json certs_j = json::object();
  if (certs.eta) certs_j["eta"] = *certs.eta;
  if (certs.epsilon) certs_j["epsilon_s"] = *certs.epsilon;
  certs_j["zeta_max_rad"] = certs.zeta_max;
  if (certs.thrust_sup) certs_j["thrust_sup_N"] = *certs.thrust_sup;
  j["certificates"] = certs_j;
  j["experiment_params"] = {
      {"mc_samples", exp.mc_samples},
      {"ladder", exp.ladder},
      {"ladder_kd_scale", exp.ladder_kd_scale},
      {"sin_amplitude_radps", exp.sin_amplitude},
      {"sin_freq_hz", exp.sin_freq_hz},
      {"forced_duration_s", exp.forced_duration},
  };
  j["initial"] = {
      {"position_m", {initial.p.x(), initial.p.y(), initial.p.z()}},
      {"velocity_mps", {initial.v.x(), initial.v.y(), initial.v.z()}},
      {"attitude_wxyz", {initial.q.w, initial.q.v.x(), initial.q.v.y(), initial.q.v.z()}},
      {"body_rate_radps", {initial.omega.x(), initial.omega.y(), initial.omega.z()}},
  };
  j["reference_m"] = {p_d.x(), p_d.y(), p_d.z()};
  return j.dump();
}

Scenario Scenario::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("scenario: top level must be an object");
  }

  Scenario sc;
  bool mu_given = false;
  for (const auto& [key, val] : j.items()) {
    if (key == "experiment") sc.experiment = experiment_from_string(val.get<std::string>());
    else if (key == "duration_s") sc.duration = as_number(val, "duration_s");
    else if (key == "dt_s") sc.dt = as_number(val, "dt_s");
    else if (key == "seed") sc.seed = val.get<std::uint64_t>();
    else if (key == "ideal_attitude") sc.ideal_attitude = val.get<bool>();
    else if (key == "plant") parse_plant(val, sc.plant);
    else if (key == "outer") parse_outer(val, sc.outer, mu_given);
    else if (key == "inner") parse_inner(val, sc.inner);
    else if (key == "governor") parse_governor(val, sc.governor);
    else if (key == "certificates") parse_certs(val, sc.certs);
    else if (key == "experiment_params") parse_exp(val, sc.exp);
    else if (key == "initial") parse_initial(val, sc.initial);
    else if (key == "reference_m") sc.p_d = as_vec3(val, "reference_m");
    else unknown_field("", key);
  }

  // Derived fields: exact gravity compensation and the default regularizer.
  sc.outer.gravity_comp = sc.plant.mass * sc.plant.gravity;
  if (!mu_given) {
    sc.outer.mu = 1e-6 * sc.plant.cable_length * sc.plant.cable_length;
  }
  sc.validate();
  return sc;
}

Scenario Scenario::from_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw std::invalid_argument("scenario: cannot open file " + path);
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return from_json(ss.str());
}

}  // namespace tethersim
