#pragma once

#include <string>
#include <vector>

#include "uavnav/core_types.hpp"

namespace uavnav {

/// True airspeed magnitude and airflow angles.
struct AirflowAngles {
  double v_tas = 0.0;  // [m/s]
  double alpha = 0.0;  // angle of attack [rad]
  double beta = 0.0;   // sideslip [rad]
};

/// Simplified longitudinal/lateral force coefficient model.
struct AeroCoefficients {
  double CL0 = 0.25;
  double CL_alpha = 4.5;   // 1/rad
  double CL_q = 2.0;       // s/rad
  double CL_de = 0.3;      // 1/rad
  double CY0 = 0.0;
  double CY_beta = -0.8;   // 1/rad
  double CY_dr = 0.15;     // 1/rad
  double CY_p = -0.05;     // s/rad
  double CY_r = 0.1;       // s/rad
};

struct AirframeParams {
  double mass = 10.0;      // [kg]
  double wing_area = 0.5;  // [m^2]
  double rho = 1.225;      // [kg/m^3]
  double span = 2.0;       // [m]
  double chord = 0.25;     // [m]
};

/// Angles from a body-frame air velocity vector.
AirflowAngles aoa_sa_from_body(const Vec3& v_body);

/// Airflow-to-body rotation built from the airflow angles.
Mat3 rab_from_angles(double alpha, double beta);

/// v_wind = v_ground - R_bn R_ab v_tas_a.
Vec3 wind_triangle(const Vec3& v_ground_n, const Mat3& R_bn, const Mat3& R_ab,
                   const Vec3& v_tas_a);

struct EquivalentCoefficients {
  double CL = 0.0;
  double CY = 0.0;
  double q_bar = 0.0;  // dynamic pressure [Pa]
};

/// Equivalent lift/side-force coefficients from the airflow-frame specific
/// force and dynamic pressure.
EquivalentCoefficients equivalent_coefficients(const Vec3& accel_body,
                                               double v_tas,
                                               const AirframeParams& af,
                                               const Mat3& R_ab);

/// One identification sample: regressors plus the measured equivalent
/// coefficients.
struct AeroSamplePoint {
  double CL = 0.0;
  double CY = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double p = 0.0;   // roll rate [rad/s]
  double q = 0.0;   // pitch rate [rad/s]
  double r = 0.0;   // yaw rate [rad/s]
  double de = 0.0;  // elevator [rad]
  double dr = 0.0;  // rudder [rad]
};

struct LsFitResult {
  AeroCoefficients coef;
  double residual_rms_lift = 0.0;
  double residual_rms_side = 0.0;
};

/// Ordinary least squares per axis. Throws DegenerateRegressorError when the
/// regressor matrix condition number exceeds 1e10.
LsFitResult ls_fit(const std::vector<AeroSamplePoint>& samples);

/// Inverts the coefficient model for the airflow angles.
std::pair<double, double> ls_predict(const AeroCoefficients& coef, double CL,
                                     double CY, double q, double de, double dr,
                                     double p, double r);

/// Gate weights for one LSTM cell plus the linear readout and the feature
/// scalers used on the input window.
struct LstmWeights {
  int input_size = 0;
  int hidden_size = 0;
  int seq_len = 0;
  MatX W_i, W_f, W_o, W_g;  // hidden x input
  MatX U_i, U_f, U_o, U_g;  // hidden x hidden
  VecX b_i, b_f, b_o, b_g;  // hidden
  MatX readout_w;           // 2 x hidden
  Vec2 readout_b = Vec2::Zero();
  VecX feature_mean, feature_scale;

  static LstmWeights zeros(int input_size, int hidden_size, int seq_len);
  void validate() const;
};

/// Single forward step of the cell.
void lstm_cell(const LstmWeights& w, const VecX& x, VecX* h, VecX* c);

/// Runs the cell over a fixed-length window from zeroed state and applies
/// the readout. Features are normalized by the stored scalers first.
std::pair<double, double> sequence_predict(const LstmWeights& w,
                                           const std::vector<VecX>& window);

LstmWeights load_lstm_weights(const std::string& path);
void save_lstm_weights(const LstmWeights& w, const std::string& path);

AeroCoefficients load_aero_coefficients(const std::string& path);
void save_aero_coefficients(const AeroCoefficients& coef,
                            const std::string& path);

// Feature vector order fed to the predictor.
inline constexpr int kPredictorFeatureDim = 8;
VecX predictor_features(double CL, double CY, double p, double q, double r,
                        double de, double dr, double v_tas);

}  // namespace uavnav
