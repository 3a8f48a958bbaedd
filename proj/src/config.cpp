#include "uavnav/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace uavnav {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": " + v);
  }
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const std::string& tok : split(v, ' ')) {
    const std::string t = trim(tok);
    if (!t.empty()) out.push_back(to_double(key, t));
  }
  return out;
}

Segment parse_segment(const std::string& key, const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 5) {
    throw std::invalid_argument(
        "config: segment needs kind:duration:speed:turn_rate:climb_rate in " +
        key);
  }
  Segment seg;
  seg.kind = segment_kind_from_string(trim(parts[0]));
  seg.duration = to_double(key, trim(parts[1]));
  seg.speed = to_double(key, trim(parts[2]));
  seg.turn_rate = to_double(key, trim(parts[3]));
  seg.climb_rate = to_double(key, trim(parts[4]));
  return seg;
}

using Setter = std::function<void(Config&, const std::string&, const std::string&)>;

void set_scalar(double* field, const std::string& key, const std::string& v) {
  *field = to_double(key, v);
}

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = {
      // Q0 process noise
      {"Q0.sigma_a2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.q0.sigma_a2, k, v); }},
      {"Q0.sigma_g2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.q0.sigma_g2, k, v); }},
      {"Q0.sigma_ba2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.q0.sigma_ba2, k, v); }},
      {"Q0.sigma_bg2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.q0.sigma_bg2, k, v); }},
      {"Q0.sigma_theta_a2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.q0.sigma_theta_a2, k, v); }},
      {"Q0.sigma_vw2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.q0.sigma_wind2, k, v); }},
      // P0 initial covariance
      {"P0.sigma_theta_I2",
       [](Config& c, auto& k, auto& v) {
         const auto vals = to_doubles(k, v);
         if (vals.size() == 1) {
           c.filter.p0.sigma_theta2 = Vec3::Constant(vals[0]);
         } else if (vals.size() == 3) {
           c.filter.p0.sigma_theta2 = Vec3(vals[0], vals[1], vals[2]);
         } else {
           throw std::invalid_argument("config: " + k + " wants 1 or 3 values");
         }
       }},
      {"P0.sigma_v2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.p0.sigma_v2, k, v); }},
      {"P0.sigma_p2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.p0.sigma_p2, k, v); }},
      {"P0.sigma_bg2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.p0.sigma_bg2, k, v); }},
      {"P0.sigma_ba2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.p0.sigma_ba2, k, v); }},
      {"P0.sigma_theta_a2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.p0.sigma_theta_a2, k, v); }},
      {"P0.sigma_vw2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.p0.sigma_wind2, k, v); }},
      // R0 measurement noise
      {"R0.sigma_vG2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.r0.sigma_vG2, k, v); }},
      {"R0.sigma_pG2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.r0.sigma_pG2, k, v); }},
      {"R0.sigma_vTAS2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.r0.sigma_vTAS2, k, v); }},
      {"R0.sigma_Hbaro2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.r0.sigma_Hbaro2, k, v); }},
      {"R0.sigma_m2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.r0.sigma_m2, k, v); }},
      {"R0.sigma_alpha2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.r0.sigma_alpha2, k, v); }},
      {"R0.sigma_beta2", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.r0.sigma_beta2, k, v); }},
      // filter behaviour
      {"filter.variant",
       [](Config& c, auto&, auto& v) { c.filter.variant = variant_from_string(v); }},
      {"filter.predictor",
       [](Config& c, auto&, auto& v) { c.filter.predictor = predictor_from_string(v); }},
      {"filter.gating",
       [](Config& c, auto& k, auto& v) {
         if (v == "on") c.filter.gating_enabled = true;
         else if (v == "off") c.filter.gating_enabled = false;
         else throw std::invalid_argument("config: " + k + " wants on|off");
       }},
      {"filter.lstm_weights",
       [](Config& c, auto&, auto& v) { c.filter.lstm_weights_path = v; }},
      {"filter.min_airspeed", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.min_airspeed, k, v); }},
      {"frame.gravity_z",
       [](Config& c, auto& k, auto& v) {
         c.filter.gravity.z() = to_double(k, v);
         c.scenario.gravity.z() = c.filter.gravity.z();
       }},
      // airframe + aero model
      {"airframe.mass", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.airframe.mass, k, v); c.scenario.airframe.mass = c.filter.airframe.mass; }},
      {"airframe.wing_area", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.airframe.wing_area, k, v); c.scenario.airframe.wing_area = c.filter.airframe.wing_area; }},
      {"airframe.rho", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.airframe.rho, k, v); c.scenario.airframe.rho = c.filter.airframe.rho; }},
      {"airframe.span", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.airframe.span, k, v); c.scenario.airframe.span = c.filter.airframe.span; }},
      {"airframe.chord", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.airframe.chord, k, v); c.scenario.airframe.chord = c.filter.airframe.chord; }},
      {"aero.CL0", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.aero_coef.CL0, k, v); c.scenario.aero_coef.CL0 = c.filter.aero_coef.CL0; }},
      {"aero.CL_alpha", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.aero_coef.CL_alpha, k, v); c.scenario.aero_coef.CL_alpha = c.filter.aero_coef.CL_alpha; }},
      {"aero.CL_q", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.aero_coef.CL_q, k, v); c.scenario.aero_coef.CL_q = c.filter.aero_coef.CL_q; }},
      {"aero.CL_de", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.aero_coef.CL_de, k, v); c.scenario.aero_coef.CL_de = c.filter.aero_coef.CL_de; }},
      {"aero.CY0", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.aero_coef.CY0, k, v); c.scenario.aero_coef.CY0 = c.filter.aero_coef.CY0; }},
      {"aero.CY_beta", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.aero_coef.CY_beta, k, v); c.scenario.aero_coef.CY_beta = c.filter.aero_coef.CY_beta; }},
      {"aero.CY_dr", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.aero_coef.CY_dr, k, v); c.scenario.aero_coef.CY_dr = c.filter.aero_coef.CY_dr; }},
      {"aero.CY_p", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.aero_coef.CY_p, k, v); c.scenario.aero_coef.CY_p = c.filter.aero_coef.CY_p; }},
      {"aero.CY_r", [](Config& c, auto& k, auto& v) { set_scalar(&c.filter.aero_coef.CY_r, k, v); c.scenario.aero_coef.CY_r = c.filter.aero_coef.CY_r; }},
      // scenario
      {"scenario.seed",
       [](Config& c, auto& k, auto& v) { c.scenario.seed = std::uint64_t(to_double(k, v)); }},
      {"scenario.duration", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.duration, k, v); }},
      {"scenario.segments",
       [](Config& c, auto& k, auto& v) {
         c.scenario.segments.clear();
         for (const std::string& part : split(v, ',')) {
           c.scenario.segments.push_back(parse_segment(k, trim(part)));
         }
       }},
      {"scenario.wind_mean",
       [](Config& c, auto& k, auto& v) {
         const auto vals = to_doubles(k, v);
         if (vals.size() != 3) throw std::invalid_argument("config: " + k + " wants 3 values");
         c.scenario.wind_mean = Vec3(vals[0], vals[1], vals[2]);
       }},
      {"scenario.wind_walk_sigma", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.wind_walk_sigma, k, v); }},
      {"scenario.start_altitude", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.start_altitude, k, v); }},
      {"scenario.start_heading", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.start_heading, k, v); }},
      {"scenario.trim_alpha", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.trim_alpha, k, v); }},
      {"scenario.denial",
       [](Config& c, auto& k, auto& v) {
         c.scenario.denial_windows.clear();
         for (const std::string& part : split(v, ',')) {
           const auto se = split(trim(part), ':');
           if (se.size() != 2) throw std::invalid_argument("config: " + k + " wants start:end pairs");
           c.scenario.denial_windows.emplace_back(to_double(k, trim(se[0])),
                                                  to_double(k, trim(se[1])));
         }
       }},
      {"rates.imu", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.rates.imu, k, v); }},
      {"rates.gnss", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.rates.gnss, k, v); }},
      {"rates.baro", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.rates.baro, k, v); }},
      {"rates.mag", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.rates.mag, k, v); }},
      {"rates.pitot", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.rates.pitot, k, v); }},
      {"rates.aero", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.rates.aero, k, v); }},
      // sensor error characteristics
      {"sensors.gyro_bias_stability", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.sensors.gyro_bias_stability, k, v); }},
      {"sensors.gyro_arw", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.sensors.gyro_arw, k, v); }},
      {"sensors.accel_bias_stability", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.sensors.accel_bias_stability, k, v); }},
      {"sensors.accel_vrw", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.sensors.accel_vrw, k, v); }},
      {"sensors.gnss_pos_std", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.sensors.gnss_pos_std, k, v); }},
      {"sensors.gnss_vel_std", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.sensors.gnss_vel_std, k, v); }},
      {"sensors.mag_noise_mgauss", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.sensors.mag_noise_mgauss, k, v); }},
      {"sensors.baro_noise_bar", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.sensors.baro_noise_bar, k, v); }},
      {"sensors.pitot_std", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.sensors.pitot_std, k, v); }},
      {"sensors.rudder_noise", [](Config& c, auto& k, auto& v) { set_scalar(&c.scenario.sensors.rudder_noise, k, v); }},
      {"sensors.noise_scale",
       [](Config& c, auto& k, auto& v) { c.scenario.sensors.scale_noise(to_double(k, v)); }},
  };
  return table;
}

}  // namespace

Config parse_config_text(const std::string& text) {
  Config cfg;
  cfg.scenario = default_scenario();
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " has no '='");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = key_table().find(key);
    if (it == key_table().end()) {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    it->second(cfg, key, value);
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string dump_config(const Config& cfg) {
  std::ostringstream os;
  os.precision(17);
  const auto& f = cfg.filter;
  const auto& sc = cfg.scenario;
  os << "filter.variant = " << to_string(f.variant) << "\n";
  os << "filter.predictor = " << to_string(f.predictor) << "\n";
  os << "filter.gating = " << (f.gating_enabled ? "on" : "off") << "\n";
  os << "filter.min_airspeed = " << f.min_airspeed << "\n";
  os << "frame.gravity_z = " << f.gravity.z() << "\n";
  os << "Q0.sigma_a2 = " << f.q0.sigma_a2 << "\n";
  os << "Q0.sigma_g2 = " << f.q0.sigma_g2 << "\n";
  os << "Q0.sigma_ba2 = " << f.q0.sigma_ba2 << "\n";
  os << "Q0.sigma_bg2 = " << f.q0.sigma_bg2 << "\n";
  os << "Q0.sigma_theta_a2 = " << f.q0.sigma_theta_a2 << "\n";
  os << "Q0.sigma_vw2 = " << f.q0.sigma_wind2 << "\n";
  os << "P0.sigma_theta_I2 = " << f.p0.sigma_theta2.x() << " "
     << f.p0.sigma_theta2.y() << " " << f.p0.sigma_theta2.z() << "\n";
  os << "P0.sigma_v2 = " << f.p0.sigma_v2 << "\n";
  os << "P0.sigma_p2 = " << f.p0.sigma_p2 << "\n";
  os << "P0.sigma_bg2 = " << f.p0.sigma_bg2 << "\n";
  os << "P0.sigma_ba2 = " << f.p0.sigma_ba2 << "\n";
  os << "P0.sigma_theta_a2 = " << f.p0.sigma_theta_a2 << "\n";
  os << "P0.sigma_vw2 = " << f.p0.sigma_wind2 << "\n";
  os << "R0.sigma_vG2 = " << f.r0.sigma_vG2 << "\n";
  os << "R0.sigma_pG2 = " << f.r0.sigma_pG2 << "\n";
  os << "R0.sigma_vTAS2 = " << f.r0.sigma_vTAS2 << "\n";
  os << "R0.sigma_Hbaro2 = " << f.r0.sigma_Hbaro2 << "\n";
  os << "R0.sigma_m2 = " << f.r0.sigma_m2 << "\n";
  os << "R0.sigma_alpha2 = " << f.r0.sigma_alpha2 << "\n";
  os << "R0.sigma_beta2 = " << f.r0.sigma_beta2 << "\n";
  os << "scenario.seed = " << sc.seed << "\n";
  os << "scenario.duration = " << sc.duration << "\n";
  os << "scenario.segments = ";
  for (size_t i = 0; i < sc.segments.size(); ++i) {
    const Segment& s = sc.segments[i];
    if (i) os << ", ";
    os << to_string(s.kind) << ":" << s.duration << ":" << s.speed << ":"
       << s.turn_rate << ":" << s.climb_rate;
  }
  os << "\n";
  return os.str();
}

}  // namespace uavnav
