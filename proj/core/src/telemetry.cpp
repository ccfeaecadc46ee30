#include "tethersim/telemetry.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tethersim {

namespace {

constexpr const char* kColumns =
    "t_s,p_x_m,p_y_m,p_z_m,v_x_mps,v_y_mps,v_z_mps,"
    "q_w,q_x,q_y,q_z,omega_x_radps,omega_y_radps,omega_z_radps,"
    "thrust_pre_N,thrust_post_N,tau_x_Nm,tau_y_Nm,tau_z_Nm,"
    "tension_N,multiplier_N,dist_m,zeta_err_rad,delta_norm_N,lemma2_bound_N,"
    "pa_x_m,pa_y_m,pa_z_m,v_in,v_out,flag_saturated,flag_tension_violated";

void append_double(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  out += buf;
}

}  // namespace

std::string telemetry_header() { return kColumns; }

void write_telemetry(const TelemetryLog& log, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("write_telemetry: cannot open " + path);
  }
  if (!log.scenario_json.empty()) {
    f << "# scenario " << log.scenario_json << "\n";
  }
  if (log.diverged) {
    f << "# diverged last_valid=" << log.last_valid << "\n";
  }
  f << kColumns << "\n";

  std::string line;
  for (const auto& r : log.records) {
    line.clear();
    const double cols[] = {
        r.t, r.p.x(), r.p.y(), r.p.z(), r.v.x(), r.v.y(), r.v.z(),
        r.q.w, r.q.v.x(), r.q.v.y(), r.q.v.z(),
        r.omega.x(), r.omega.y(), r.omega.z(),
        r.thrust_pre, r.thrust_post,
        r.torque.x(), r.torque.y(), r.torque.z(),
        r.tension, r.multiplier, r.dist, r.zeta_err, r.delta_norm, r.lemma2,
        r.p_a.x(), r.p_a.y(), r.p_a.z(), r.v_in, r.v_out};
    for (double c : cols) {
      append_double(line, c);
      line += ',';
    }
    line += r.saturated ? '1' : '0';
    line += ',';
    line += r.tension_violated ? '1' : '0';
    f << line << "\n";
  }
}

TelemetryLog read_telemetry(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw std::runtime_error("read_telemetry: cannot open " + path);
  }
  TelemetryLog log;
  std::string line;
  bool header_seen = false;
  while (std::getline(f, line)) {
    if (line.empty()) {
      continue;
    }
    if (line[0] == '#') {
      if (line.rfind("# scenario ", 0) == 0) {
        log.scenario_json = line.substr(11);
      } else if (line.rfind("# diverged", 0) == 0) {
        log.diverged = true;
        const auto eq = line.find('=');
        if (eq != std::string::npos) {
          log.last_valid = std::stoul(line.substr(eq + 1));
        }
      }
      continue;
    }
    if (!header_seen) {
      if (line != kColumns) {
        throw std::runtime_error("read_telemetry: unexpected header in " + path);
      }
      header_seen = true;
      continue;
    }

    std::istringstream ss(line);
    std::string cell;
    double vals[30];
    int flags[2];
    for (int i = 0; i < 30; ++i) {
      if (!std::getline(ss, cell, ',')) {
        throw std::runtime_error("read_telemetry: short row in " + path);
      }
      vals[i] = std::stod(cell);
    }
    for (int i = 0; i < 2; ++i) {
      if (!std::getline(ss, cell, ',')) {
        throw std::runtime_error("read_telemetry: short row in " + path);
      }
      flags[i] = std::stoi(cell);
    }

    TelemetryRecord r;
    r.t = vals[0];
    r.p = Vec3(vals[1], vals[2], vals[3]);
    r.v = Vec3(vals[4], vals[5], vals[6]);
    r.q = Quaternion(vals[7], vals[8], vals[9], vals[10]);
    r.omega = Vec3(vals[11], vals[12], vals[13]);
    r.thrust_pre = vals[14];
    r.thrust_post = vals[15];
    r.torque = Vec3(vals[16], vals[17], vals[18]);
    r.tension = vals[19];
    r.multiplier = vals[20];
    r.dist = vals[21];
    r.zeta_err = vals[22];
    r.delta_norm = vals[23];
    r.lemma2 = vals[24];
    r.p_a = Vec3(vals[25], vals[26], vals[27]);
    r.v_in = vals[28];
    r.v_out = vals[29];
    r.saturated = flags[0] != 0;
    r.tension_violated = flags[1] != 0;
    log.records.push_back(r);
  }
  if (!header_seen) {
    throw std::runtime_error("read_telemetry: no header in " + path);
  }
  if (!log.diverged) {
    log.last_valid = log.records.empty() ? 0 : log.records.size() - 1;
  }
  return log;
}

}  // namespace tethersim
