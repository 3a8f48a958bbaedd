#include "uavnav/airdata.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace uavnav {

AirflowAngles aoa_sa_from_body(const Vec3& v_body) {
  const double speed = v_body.norm();
  if (speed < 1e-6) {
    throw std::invalid_argument("aoa_sa_from_body: near-zero airspeed");
  }
  AirflowAngles out;
  out.v_tas = speed;
  out.alpha = std::atan2(v_body.z(), v_body.x());
  out.beta = std::asin(v_body.y() / speed);
  return out;
}

Mat3 rab_from_angles(double alpha, double beta) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  Mat3 R;
  R << ca * cb, -ca * sb, -sa,
       sb, cb, 0.0,
       sa * cb, -sa * sb, ca;
  return R;
}

Vec3 wind_triangle(const Vec3& v_ground_n, const Mat3& R_bn, const Mat3& R_ab,
                   const Vec3& v_tas_a) {
  return v_ground_n - R_bn * (R_ab * v_tas_a);
}

EquivalentCoefficients equivalent_coefficients(const Vec3& accel_body,
                                               double v_tas,
                                               const AirframeParams& af,
                                               const Mat3& R_ab) {
  if (v_tas <= 2.0) {
    throw std::invalid_argument(
        "equivalent_coefficients: airspeed below 2 m/s gate");
  }
  const Vec3 accel_air = R_ab.transpose() * accel_body;
  EquivalentCoefficients out;
  out.q_bar = 0.5 * af.rho * v_tas * v_tas;
  const double qs = out.q_bar * af.wing_area;
  out.CL = -af.mass * accel_air.z() / qs;
  out.CY = af.mass * accel_air.y() / qs;
  return out;
}

namespace {

// OLS solve with a condition gate on the regressor matrix.
VecX solve_ols(const MatX& A, const VecX& y, double* residual_rms) {
  Eigen::JacobiSVD<MatX> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e10) {
    throw DegenerateRegressorError("ls_fit: regressor matrix rank-deficient");
  }
  const VecX theta = svd.solve(y);
  const VecX resid = y - A * theta;
  *residual_rms = std::sqrt(resid.squaredNorm() / double(y.size()));
  return theta;
}

}  // namespace

LsFitResult ls_fit(const std::vector<AeroSamplePoint>& samples) {
  const int n = int(samples.size());
  if (n < 10) {
    throw std::invalid_argument("ls_fit: need at least 2x regressor count samples");
  }
  MatX A_lift(n, 4), A_side(n, 5);
  VecX y_lift(n), y_side(n);
  for (int i = 0; i < n; ++i) {
    const auto& s = samples[i];
    A_lift.row(i) << 1.0, s.alpha, s.q, s.de;
    y_lift(i) = s.CL;
    A_side.row(i) << 1.0, s.beta, s.dr, s.p, s.r;
    y_side(i) = s.CY;
  }
  LsFitResult out;
  const VecX th_l = solve_ols(A_lift, y_lift, &out.residual_rms_lift);
  const VecX th_s = solve_ols(A_side, y_side, &out.residual_rms_side);
  out.coef.CL0 = th_l(0);
  out.coef.CL_alpha = th_l(1);
  out.coef.CL_q = th_l(2);
  out.coef.CL_de = th_l(3);
  out.coef.CY0 = th_s(0);
  out.coef.CY_beta = th_s(1);
  out.coef.CY_dr = th_s(2);
  out.coef.CY_p = th_s(3);
  out.coef.CY_r = th_s(4);
  return out;
}

std::pair<double, double> ls_predict(const AeroCoefficients& coef, double CL,
                                     double CY, double q, double de, double dr,
                                     double p, double r) {
  if (std::abs(coef.CL_alpha) < 1e-6 || std::abs(coef.CY_beta) < 1e-6) {
    throw std::invalid_argument("ls_predict: vanishing slope coefficient");
  }
  const double alpha =
      (CL - coef.CL0 - coef.CL_q * q - coef.CL_de * de) / coef.CL_alpha;
  const double beta =
      (CY - coef.CY0 - coef.CY_dr * dr - coef.CY_p * p - coef.CY_r * r) /
      coef.CY_beta;
  return {alpha, beta};
}

LstmWeights LstmWeights::zeros(int input_size, int hidden_size, int seq_len) {
  LstmWeights w;
  w.input_size = input_size;
  w.hidden_size = hidden_size;
  w.seq_len = seq_len;
  w.W_i = w.W_f = w.W_o = w.W_g = MatX::Zero(hidden_size, input_size);
  w.U_i = w.U_f = w.U_o = w.U_g = MatX::Zero(hidden_size, hidden_size);
  w.b_i = w.b_f = w.b_o = w.b_g = VecX::Zero(hidden_size);
  w.readout_w = MatX::Zero(2, hidden_size);
  w.feature_mean = VecX::Zero(input_size);
  w.feature_scale = VecX::Ones(input_size);
  return w;
}

void LstmWeights::validate() const {
  auto check = [&](const MatX& m, int rows, int cols, const char* name) {
    if (m.rows() != rows || m.cols() != cols || !m.allFinite()) {
      throw std::invalid_argument(std::string("LstmWeights: bad ") + name);
    }
  };
  if (input_size <= 0 || hidden_size <= 0 || seq_len <= 0) {
    throw std::invalid_argument("LstmWeights: non-positive layer size");
  }
  check(W_i, hidden_size, input_size, "W_i");
  check(W_f, hidden_size, input_size, "W_f");
  check(W_o, hidden_size, input_size, "W_o");
  check(W_g, hidden_size, input_size, "W_g");
  check(U_i, hidden_size, hidden_size, "U_i");
  check(U_f, hidden_size, hidden_size, "U_f");
  check(U_o, hidden_size, hidden_size, "U_o");
  check(U_g, hidden_size, hidden_size, "U_g");
  check(readout_w, 2, hidden_size, "readout_w");
  if (b_i.size() != hidden_size || b_f.size() != hidden_size ||
      b_o.size() != hidden_size || b_g.size() != hidden_size) {
    throw std::invalid_argument("LstmWeights: bad bias size");
  }
  if (feature_mean.size() != input_size || feature_scale.size() != input_size) {
    throw std::invalid_argument("LstmWeights: bad scaler size");
  }
}

namespace {

inline VecX sigmoid(const VecX& x) {
  return (1.0 + (-x.array()).exp()).inverse().matrix();
}

}  // namespace

void lstm_cell(const LstmWeights& w, const VecX& x, VecX* h, VecX* c) {
  if (x.size() != w.input_size || h->size() != w.hidden_size ||
      c->size() != w.hidden_size) {
    throw std::invalid_argument("lstm_cell: dimension mismatch");
  }
  const VecX i = sigmoid(w.W_i * x + w.U_i * (*h) + w.b_i);
  const VecX f = sigmoid(w.W_f * x + w.U_f * (*h) + w.b_f);
  const VecX o = sigmoid(w.W_o * x + w.U_o * (*h) + w.b_o);
  const VecX g = (w.W_g * x + w.U_g * (*h) + w.b_g).array().tanh().matrix();
  *c = (f.array() * c->array() + i.array() * g.array()).matrix();
  *h = (o.array() * c->array().tanh()).matrix();
}

std::pair<double, double> sequence_predict(const LstmWeights& w,
                                           const std::vector<VecX>& window) {
  w.validate();
  if (int(window.size()) != w.seq_len) {
    throw std::invalid_argument("sequence_predict: wrong window length");
  }
  VecX h = VecX::Zero(w.hidden_size);
  VecX c = VecX::Zero(w.hidden_size);
  for (const VecX& raw : window) {
    if (raw.size() != w.input_size) {
      throw std::invalid_argument("sequence_predict: bad feature size");
    }
    const VecX x = ((raw - w.feature_mean).array() / w.feature_scale.array())
                       .matrix();
    lstm_cell(w, x, &h, &c);
  }
  const Vec2 y = w.readout_w * h + w.readout_b;
  return {y(0), y(1)};
}

namespace {

using nlohmann::json;

json mat_to_json(const MatX& m) {
  std::vector<double> flat(m.size());
  for (int r = 0; r < m.rows(); ++r)
    for (int col = 0; col < m.cols(); ++col) flat[r * m.cols() + col] = m(r, col);
  return json(flat);
}

MatX mat_from_json(const json& j, int rows, int cols, const char* name) {
  const auto flat = j.get<std::vector<double>>();
  if (int(flat.size()) != rows * cols) {
    throw std::invalid_argument(std::string("weights: bad size for ") + name);
  }
  MatX m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = flat[r * cols + c];
  return m;
}

}  // namespace

LstmWeights load_lstm_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open weights file: " + path);
  }
  json j;
  in >> j;
  LstmWeights w;
  w.input_size = j.at("input_size").get<int>();
  w.hidden_size = j.at("hidden_size").get<int>();
  w.seq_len = j.at("seq_len").get<int>();
  const int n = w.input_size, h = w.hidden_size;
  w.W_i = mat_from_json(j.at("W_i"), h, n, "W_i");
  w.W_f = mat_from_json(j.at("W_f"), h, n, "W_f");
  w.W_o = mat_from_json(j.at("W_o"), h, n, "W_o");
  w.W_g = mat_from_json(j.at("W_g"), h, n, "W_g");
  w.U_i = mat_from_json(j.at("U_i"), h, h, "U_i");
  w.U_f = mat_from_json(j.at("U_f"), h, h, "U_f");
  w.U_o = mat_from_json(j.at("U_o"), h, h, "U_o");
  w.U_g = mat_from_json(j.at("U_g"), h, h, "U_g");
  w.b_i = mat_from_json(j.at("b_i"), h, 1, "b_i");
  w.b_f = mat_from_json(j.at("b_f"), h, 1, "b_f");
  w.b_o = mat_from_json(j.at("b_o"), h, 1, "b_o");
  w.b_g = mat_from_json(j.at("b_g"), h, 1, "b_g");
  w.readout_w = mat_from_json(j.at("readout_w"), 2, h, "readout_w");
  const auto rb = j.at("readout_b").get<std::vector<double>>();
  if (rb.size() != 2) throw std::invalid_argument("weights: bad readout_b");
  w.readout_b = Vec2(rb[0], rb[1]);
  w.feature_mean = mat_from_json(j.at("feature_mean"), n, 1, "feature_mean");
  w.feature_scale = mat_from_json(j.at("feature_scale"), n, 1, "feature_scale");
  w.validate();
  return w;
}

void save_lstm_weights(const LstmWeights& w, const std::string& path) {
  w.validate();
  json j;
  j["input_size"] = w.input_size;
  j["hidden_size"] = w.hidden_size;
  j["seq_len"] = w.seq_len;
  j["W_i"] = mat_to_json(w.W_i);
  j["W_f"] = mat_to_json(w.W_f);
  j["W_o"] = mat_to_json(w.W_o);
  j["W_g"] = mat_to_json(w.W_g);
  j["U_i"] = mat_to_json(w.U_i);
  j["U_f"] = mat_to_json(w.U_f);
  j["U_o"] = mat_to_json(w.U_o);
  j["U_g"] = mat_to_json(w.U_g);
  j["b_i"] = mat_to_json(w.b_i);
  j["b_f"] = mat_to_json(w.b_f);
  j["b_o"] = mat_to_json(w.b_o);
  j["b_g"] = mat_to_json(w.b_g);
  j["readout_w"] = mat_to_json(w.readout_w);
  j["readout_b"] = std::vector<double>{w.readout_b(0), w.readout_b(1)};
  j["feature_mean"] = mat_to_json(w.feature_mean);
  j["feature_scale"] = mat_to_json(w.feature_scale);
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("cannot write weights file: " + path);
  }
  out << j.dump(1) << "\n";
}

AeroCoefficients load_aero_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open coefficients file: " + path);
  }
  json j;
  in >> j;
  AeroCoefficients c;
  c.CL0 = j.at("CL0").get<double>();
  c.CL_alpha = j.at("CL_alpha").get<double>();
  c.CL_q = j.at("CL_q").get<double>();
  c.CL_de = j.at("CL_de").get<double>();
  c.CY0 = j.at("CY0").get<double>();
  c.CY_beta = j.at("CY_beta").get<double>();
  c.CY_dr = j.at("CY_dr").get<double>();
  c.CY_p = j.at("CY_p").get<double>();
  c.CY_r = j.at("CY_r").get<double>();
  return c;
}

void save_aero_coefficients(const AeroCoefficients& coef,
                            const std::string& path) {
  nlohmann::ordered_json j;
  j["CL0"] = coef.CL0;
  j["CL_alpha"] = coef.CL_alpha;
  j["CL_q"] = coef.CL_q;
  j["CL_de"] = coef.CL_de;
  j["CY0"] = coef.CY0;
  j["CY_beta"] = coef.CY_beta;
  j["CY_dr"] = coef.CY_dr;
  j["CY_p"] = coef.CY_p;
  j["CY_r"] = coef.CY_r;
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("cannot write coefficients file: " + path);
  }
  out << j.dump(2) << "\n";
}

VecX predictor_features(double CL, double CY, double p, double q, double r,
                        double de, double dr, double v_tas) {
  VecX f(kPredictorFeatureDim);
  f << CL, CY, p, q, r, de, dr, v_tas;
  return f;
}

}  // namespace uavnav
