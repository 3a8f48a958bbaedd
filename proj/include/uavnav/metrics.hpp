#pragma once

#include <optional>
#include <string>

#include "uavnav/filter.hpp"
#include "uavnav/simulator.hpp"

namespace uavnav {

struct ChannelError {
  double mae = 0.0;
  double rmse = 0.0;
};

struct MetricsReport {
  ChannelError attitude_deg;
  ChannelError position_m;
  ChannelError velocity_mps;
  ChannelError alpha_deg;
  ChannelError beta_deg;
  ChannelError wind_mps;
  double time_to_converge = 0.0;   // [s] from start of the estimate window
  bool converged = false;
  double post_convergence_att_rmse_deg = 0.0;
  double max_horizontal_error_m = 0.0;    // over denial windows when given
  double max_vertical_error_m = 0.0;
  std::string to_json() const;
};

ChannelError scalar_series_error(const std::vector<double>& errors);

/// Truth state interpolated to time t (linear; attitude through the
/// relative-rotation log). Throws outside the truth time range.
FullState interpolate_truth(const TruthSequence& truth, double t,
                            double* alpha = nullptr, double* beta = nullptr);

struct MetricsOptions {
  double converge_threshold_deg = 2.0;
  double converge_hold_s = 5.0;
  std::vector<std::pair<double, double>> denial_windows;
};

MetricsReport compute_metrics(const StateHistory& est,
                              const TruthSequence& truth,
                              const MetricsOptions& opt = {});

/// Total attitude error angle in degrees.
double attitude_error_deg(const Mat3& est, const Mat3& truth);

}  // namespace uavnav
