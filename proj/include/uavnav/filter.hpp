#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>

#include "uavnav/airdata.hpp"
#include "uavnav/sensors.hpp"
#include "uavnav/updates.hpp"

namespace uavnav {

enum class PredictorSource { kNone, kLs, kLstm };

PredictorSource predictor_from_string(const std::string& s);
const char* to_string(PredictorSource p);

/// Initial error covariance entries, per axis where it matters.
struct InitialCovariance {
  Vec3 sigma_theta2{2.0 / 57.3 / 57.3 / 2.0, 0.0, 0.0};  // placeholder, set below
  double sigma_v2 = 0.01;
  double sigma_p2 = 0.04;
  double sigma_bg2 = 4.8478e-5 * 4.8478e-5;
  double sigma_ba2 = 0.0025;
  double sigma_theta_a2 = 0.035 * 0.035;
  double sigma_wind2 = 0.01;

  InitialCovariance();
  Covariance21 matrix() const;
};

/// Measurement noise variances.
struct MeasurementNoise {
  double sigma_vG2 = 1e-4;      // (m/s)^2
  double sigma_pG2 = 0.01;      // m^2
  double sigma_vTAS2 = 0.01;    // (m/s)^2
  double sigma_Hbaro2 = 0.01;   // m^2
  double sigma_m2 = 0.01;       // unit-vector residual
  // Predictor confidence for the airflow pseudo-measurement.
  double sigma_alpha2 = std::pow(1.0 * M_PI / 180.0, 2);
  double sigma_beta2 = std::pow(2.7 * M_PI / 180.0, 2);
};

struct FilterConfig {
  ProcessNoise q0;
  InitialCovariance p0;
  MeasurementNoise r0;
  FilterVariant variant = FilterVariant::kRiekf;
  PredictorSource predictor = PredictorSource::kNone;
  bool gating_enabled = true;
  Vec3 gravity = kDefaultGravity;
  AirframeParams airframe;
  AeroCoefficients aero_coef;          // used by the LS predictor
  std::string lstm_weights_path;       // used by the LSTM predictor
  double min_airspeed = 2.0;           // low-speed gate [m/s]
};

struct HistoryRecord {
  double t = 0.0;
  FullState state;
  ErrorState21 cov_diag = ErrorState21::Zero();
};

/// Initial covariance entries are stated in the additive nav-frame chart.
/// Each variant carries its error in a different chart, so the initial
/// covariance is transported there (lever-arm couplings for the
/// right-invariant chart, body-frame rotation for the left).
Covariance21 initial_covariance(FilterVariant variant, const FullState& init,
                                const InitialCovariance& p0);

/// Running per-component innovation statistics (Welford).
struct InnovationStats {
  long count = 0;
  long rejected_gate = 0;
  long rejected_stale = 0;
  long rejected_range = 0;
  VecX mean;
  VecX m2;

  void accept(const VecX& innov);
  VecX variance() const;
};

struct StateHistory {
  std::vector<HistoryRecord> records;
  std::map<std::string, InnovationStats> innovations;

  bool empty() const { return records.empty(); }
};

/// Multi-rate fusion filter over a time-ordered event stream. One instance
/// is strictly sequential; independent instances may run in parallel.
class FusionFilter {
 public:
  FusionFilter(const FilterConfig& cfg, const FullState& init_state,
               std::optional<double> init_time = std::nullopt);
  FusionFilter(const FilterConfig& cfg, const FullState& init_state,
               const Covariance21& init_cov,
               std::optional<double> init_time = std::nullopt);

  void process(const SensorEvent& event);

  const FullState& state() const { return est_; }
  const Covariance21& covariance() const { return P_; }
  double time() const { return time_; }
  const std::map<std::string, InnovationStats>& innovation_stats() const {
    return stats_;
  }

  /// Stops all measurement updates; propagation continues. Used as the
  /// pure-inertial control in the denial study.
  void freeze_updates() { updates_frozen_ = true; }

  std::optional<std::pair<double, double>> last_predicted_angles() const {
    return last_predicted_angles_;
  }

 private:
  void handle_imu(const ImuSample& u);
  void apply(const std::string& name, const LinearizedResidual& lr,
             const MatX& Rm);
  void handle_aero(const AeroSample& s);

  FilterConfig cfg_;
  FullState est_;
  Covariance21 P_;
  double time_ = -std::numeric_limits<double>::infinity();
  std::optional<double> last_imu_t_;
  std::optional<ImuSample> last_imu_;
  std::optional<double> last_tas_;
  bool updates_frozen_ = false;
  std::map<std::string, InnovationStats> stats_;
  std::optional<LstmWeights> lstm_;
  std::deque<VecX> feature_window_;
  std::optional<std::pair<double, double>> last_predicted_angles_;
};

/// Deterministic replay of a stream. Records one history entry per IMU event.
/// The initial state is taken at init_time (first event time when omitted).
/// Throws on unordered streams.
StateHistory run_filter(const EventStream& stream, const FilterConfig& cfg,
                        const FullState& init_state,
                        std::optional<double> init_time = std::nullopt);

}  // namespace uavnav
