#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uavnav/airdata.hpp"
#include "uavnav/sensors.hpp"

namespace uavnav {

enum class SegmentKind { kTaxi, kClimb, kTurn, kCruise, kDescend };

SegmentKind segment_kind_from_string(const std::string& s);
const char* to_string(SegmentKind k);

struct Segment {
  SegmentKind kind = SegmentKind::kCruise;
  double duration = 60.0;    // [s]
  double speed = 30.0;       // commanded ground speed [m/s]
  double turn_rate = 0.0;    // [rad/s]
  double climb_rate = 0.0;   // [m/s]
};

/// Per-sensor error characteristics.
struct SensorSpec {
  double gyro_bias_stability = 6.25 * M_PI / 180.0 / 3600.0;  // [rad/s]
  double gyro_arw = 0.3 * M_PI / 180.0 / 60.0;    // [rad/sqrt(s)]
  double accel_bias_stability = 0.1;              // [m/s^2]
  double accel_vrw = 0.029 / 60.0;                // [m/s/sqrt(s)]
  double gnss_pos_std = 0.1;                      // [m]
  double gnss_vel_std = 0.1;                      // [m/s]
  double mag_noise_mgauss = 0.45;                 // [mgauss]
  double baro_noise_bar = 0.025e-3;               // [bar]
  double pitot_std = 1.0;                         // [m/s]
  double rudder_noise = 0.1 * M_PI / 180.0;       // [rad]

  void scale_noise(double factor);
};

struct SensorRates {
  double imu = 100.0;
  double gnss = 5.0;
  double baro = 100.0;
  double mag = 100.0;
  double pitot = 100.0;
  double aero = 100.0;
};

struct Scenario {
  std::uint64_t seed = 1;
  double duration = 300.0;
  std::vector<Segment> segments;
  Vec3 wind_mean = Vec3::Zero();
  double wind_walk_sigma = 0.0;  // [m/s/sqrt(s)]
  SensorRates rates;
  std::vector<std::pair<double, double>> denial_windows;
  double start_altitude = 100.0;
  double start_heading = 0.0;
  double trim_alpha = 3.0 * M_PI / 180.0;
  SensorSpec sensors;
  AirframeParams airframe;
  AeroCoefficients aero_coef;
  Vec3 gravity = kDefaultGravity;

  void validate() const;
  double total_segment_time() const;
};

struct TruthRecord {
  double t = 0.0;
  FullState state;     // biases stay zero; wind carries the simulated path
  double alpha = 0.0;  // [rad]
  double beta = 0.0;   // [rad]
  Vec3 omega_b = Vec3::Zero();  // emitted body rate
  Vec3 accel_b = Vec3::Zero();  // emitted specific force
};

using TruthSequence = std::vector<TruthRecord>;

/// Deterministic per-channel random stream derived from the scenario seed.
std::mt19937_64 channel_rng(std::uint64_t seed, std::uint32_t channel);

/// First-order random walk step, w+ = w + N(0, sigma^2 dt) per axis.
Vec3 wind_step(const Vec3& state, double sigma, double dt, std::mt19937_64& rng);

/// Kinematically consistent truth: the emitted (omega, accel) reproduce the
/// stored states exactly when re-integrated through strapdown_step.
TruthSequence generate_trajectory(const Scenario& sc);

/// Multi-rate sensor synthesis with the scenario's error characteristics.
EventStream synthesize_sensors(const TruthSequence& truth, const Scenario& sc);

/// Drops GNSS events inside the windows, everything else untouched.
EventStream apply_denial(const EventStream& stream,
                         const std::vector<std::pair<double, double>>& windows);

/// Built-in mixed-phase scenarios used by the experiments.
Scenario default_scenario();
Scenario denial_scenario();
Scenario sweep_scenario();

}  // namespace uavnav
