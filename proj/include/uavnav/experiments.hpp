#pragma once

#include "uavnav/config.hpp"
#include "uavnav/metrics.hpp"

namespace uavnav {

/// Builds the initial filter state from the first truth record, optionally
/// with a roll/pitch attitude offset (body-side, radians).
FullState initial_state_from_truth(const TruthRecord& first,
                                   double roll_pitch_bias_rad = 0.0);

struct SweepRow {
  double bias_deg = 0.0;
  FilterVariant variant = FilterVariant::kRiekf;
  std::uint64_t seed = 0;
  bool converged = false;
  double time_to_converge = 0.0;
  double post_rmse_deg = 0.0;
};

/// Initial-attitude convergence study: one filter run per (bias, variant,
/// seed) triple, runs execute in a parallel worker pool, rows come back
/// sorted.
std::vector<SweepRow> convergence_sweep(const Scenario& base,
                                        const FilterConfig& cfg,
                                        const std::vector<double>& biases_deg,
                                        const std::vector<FilterVariant>& variants,
                                        int n_seeds);

/// Long-format CSV, one row per (bias, variant, metric) aggregated over
/// seeds.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

struct DenialRow {
  std::string label;
  double max_horizontal_error_m = 0.0;
  double max_vertical_error_m = 0.0;
  double position_rmse_m = 0.0;
};

/// GNSS-denial study: each variant runs on the denied stream; the
/// pure-inertial control freezes every measurement update at denial start.
std::vector<DenialRow> denial_experiment(const Scenario& sc,
                                         const FilterConfig& cfg,
                                         const std::vector<FilterVariant>& variants);

std::string denial_to_csv(const std::vector<DenialRow>& rows);

/// Single filter run over a freshly simulated scenario; used by the CLI and
/// the acceptance suite.
struct RunResult {
  StateHistory history;
  MetricsReport metrics;
};

RunResult simulate_and_run(const Scenario& sc, const FilterConfig& cfg,
                           double attitude_bias_rad = 0.0,
                           bool freeze_at_denial = false);

/// Identification samples rebuilt from a sensor log: equivalent coefficients
/// from the IMU/pitot channels, regressors from the aero channel.
std::vector<AeroSamplePoint> aero_samples_from_log(const EventStream& stream,
                                                   const AirframeParams& af);

}  // namespace uavnav
