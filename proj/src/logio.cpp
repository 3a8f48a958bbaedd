#include "uavnav/logio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace uavnav {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double field(const std::vector<std::string>& f, size_t i, int lineno) {
  if (i >= f.size() || f[i].empty()) {
    throw std::invalid_argument("csv: missing field " + std::to_string(i) +
                                " on line " + std::to_string(lineno));
  }
  return std::stod(f[i]);
}

void write_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot write file: " + path);
  }
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open file: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Extracts the airflow angles encoded in an airflow-to-body rotation.
std::pair<double, double> angles_from_rab(const Mat3& R_ab) {
  return {std::atan2(R_ab(2, 0), R_ab(0, 0)), std::asin(R_ab(1, 0))};
}

}  // namespace

std::string sensor_log_to_csv(const EventStream& stream) {
  std::string out = "t,type,f1,f2,f3,f4,f5,f6,f7\n";
  for (const SensorEvent& ev : stream) {
    out += fmt(ev.t);
    if (const auto* imu = std::get_if<ImuSample>(&ev.payload)) {
      out += ",IMU," + fmt(imu->omega.x()) + "," + fmt(imu->omega.y()) + "," +
             fmt(imu->omega.z()) + "," + fmt(imu->accel.x()) + "," +
             fmt(imu->accel.y()) + "," + fmt(imu->accel.z()) + ",";
    } else if (const auto* g = std::get_if<GnssFix>(&ev.payload)) {
      out += ",GNSS," + fmt(g->p_n.x()) + "," + fmt(g->p_n.y()) + "," +
             fmt(g->p_n.z()) + "," + fmt(g->v_n.x()) + "," + fmt(g->v_n.y()) +
             "," + fmt(g->v_n.z()) + ",";
    } else if (const auto* b = std::get_if<BaroSample>(&ev.payload)) {
      out += ",BARO," + fmt(b->pressure) + ",,,,,,";
    } else if (const auto* m = std::get_if<MagSample>(&ev.payload)) {
      out += ",MAG," + fmt(m->m_b.x()) + "," + fmt(m->m_b.y()) + "," +
             fmt(m->m_b.z()) + ",,,,";
    } else if (const auto* a = std::get_if<AirspeedSample>(&ev.payload)) {
      out += ",TAS," + fmt(a->v_tas) + ",,,,,,";
    } else if (const auto* ae = std::get_if<AeroSample>(&ev.payload)) {
      out += ",AERO," + fmt(ae->delta_e) + "," + fmt(ae->delta_r) + "," +
             fmt(ae->alpha) + "," + fmt(ae->beta) + ",,,";
    }
    out += "\n";
  }
  return out;
}

EventStream sensor_log_from_csv(const std::string& text) {
  EventStream out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line.rfind("t,type", 0) != 0) {
        throw std::invalid_argument("sensor log: missing header row");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() < 2) {
      throw std::invalid_argument("sensor log: short line " +
                                  std::to_string(lineno));
    }
    SensorEvent ev;
    ev.t = field(f, 0, lineno);
    const std::string& type = f[1];
    if (type == "IMU") {
      ImuSample u;
      u.t = ev.t;
      u.omega = Vec3(field(f, 2, lineno), field(f, 3, lineno), field(f, 4, lineno));
      u.accel = Vec3(field(f, 5, lineno), field(f, 6, lineno), field(f, 7, lineno));
      ev.payload = u;
    } else if (type == "GNSS") {
      GnssFix g;
      g.p_n = Vec3(field(f, 2, lineno), field(f, 3, lineno), field(f, 4, lineno));
      g.v_n = Vec3(field(f, 5, lineno), field(f, 6, lineno), field(f, 7, lineno));
      ev.payload = g;
    } else if (type == "BARO") {
      ev.payload = BaroSample{field(f, 2, lineno)};
    } else if (type == "MAG") {
      MagSample m;
      m.m_b = Vec3(field(f, 2, lineno), field(f, 3, lineno), field(f, 4, lineno));
      ev.payload = m;
    } else if (type == "TAS") {
      ev.payload = AirspeedSample{field(f, 2, lineno)};
    } else if (type == "AERO") {
      AeroSample a;
      a.delta_e = field(f, 2, lineno);
      a.delta_r = field(f, 3, lineno);
      a.alpha = field(f, 4, lineno);
      a.beta = field(f, 5, lineno);
      ev.payload = a;
    } else {
      throw std::invalid_argument("sensor log: unknown type '" + type +
                                  "' on line " + std::to_string(lineno));
    }
    out.push_back(std::move(ev));
  }
  return out;
}

void write_sensor_log(const EventStream& stream, const std::string& path) {
  write_file(sensor_log_to_csv(stream), path);
}

EventStream read_sensor_log(const std::string& path) {
  return sensor_log_from_csv(read_file(path));
}

namespace {

void append_state_row(std::string& out, double t, const FullState& s,
                      double alpha, double beta) {
  out += fmt(t);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out += "," + fmt(s.R_bn(r, c));
  for (int i = 0; i < 3; ++i) out += "," + fmt(s.v_n(i));
  for (int i = 0; i < 3; ++i) out += "," + fmt(s.p_n(i));
  out += "," + fmt(alpha) + "," + fmt(beta);
  for (int i = 0; i < 3; ++i) out += "," + fmt(s.v_wind(i));
}

}  // namespace

std::string truth_to_csv(const TruthSequence& truth) {
  std::string out =
      "t,r11,r12,r13,r21,r22,r23,r31,r32,r33,vx,vy,vz,px,py,pz,alpha,beta,wx,"
      "wy,wz\n";
  for (const TruthRecord& rec : truth) {
    append_state_row(out, rec.t, rec.state, rec.alpha, rec.beta);
    out += "\n";
  }
  return out;
}

TruthSequence truth_from_csv(const std::string& text) {
  TruthSequence out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line.rfind("t,r11", 0) != 0) {
        throw std::invalid_argument("truth csv: missing header row");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv(line);
    TruthRecord rec;
    rec.t = field(f, 0, lineno);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        rec.state.R_bn(r, c) = field(f, 1 + 3 * r + c, lineno);
    for (int i = 0; i < 3; ++i) rec.state.v_n(i) = field(f, 10 + i, lineno);
    for (int i = 0; i < 3; ++i) rec.state.p_n(i) = field(f, 13 + i, lineno);
    rec.alpha = field(f, 16, lineno);
    rec.beta = field(f, 17, lineno);
    for (int i = 0; i < 3; ++i) rec.state.v_wind(i) = field(f, 18 + i, lineno);
    rec.state.R_ab = rab_from_angles(rec.alpha, rec.beta);
    out.push_back(std::move(rec));
  }
  return out;
}

void write_truth(const TruthSequence& truth, const std::string& path) {
  write_file(truth_to_csv(truth), path);
}

TruthSequence read_truth(const std::string& path) {
  return truth_from_csv(read_file(path));
}

std::string history_to_csv(const StateHistory& history) {
  std::string out =
      "t,r11,r12,r13,r21,r22,r23,r31,r32,r33,vx,vy,vz,px,py,pz,alpha,beta,wx,"
      "wy,wz,att_var,vel_var,pos_var\n";
  for (const HistoryRecord& rec : history.records) {
    const auto [alpha, beta] = angles_from_rab(rec.state.R_ab);
    append_state_row(out, rec.t, rec.state, alpha, beta);
    out += "," + fmt(rec.cov_diag.segment<3>(kIdxTheta).sum());
    out += "," + fmt(rec.cov_diag.segment<3>(kIdxVel).sum());
    out += "," + fmt(rec.cov_diag.segment<3>(kIdxPos).sum());
    out += "\n";
  }
  return out;
}

void write_history(const StateHistory& history, const std::string& path) {
  write_file(history_to_csv(history), path);
}

}  // namespace uavnav
