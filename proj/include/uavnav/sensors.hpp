#pragma once

#include <variant>
#include <vector>

#include "uavnav/propagation.hpp"

namespace uavnav {

struct GnssFix {
  Vec3 p_n = Vec3::Zero();
  Vec3 v_n = Vec3::Zero();
};

struct BaroSample {
  double pressure = 1.01325;  // static pressure [bar]
};

struct MagSample {
  Vec3 m_b = Vec3::UnitX();  // unit field direction, body frame
};

struct AirspeedSample {
  double v_tas = 0.0;  // true airspeed magnitude [m/s]
};

/// Control deflections plus reference airflow angles (labels for the
/// predictor pipeline, never fed to the filter as measurements).
struct AeroSample {
  double delta_e = 0.0;  // elevator [rad]
  double delta_r = 0.0;  // rudder [rad]
  double alpha = 0.0;    // [rad]
  double beta = 0.0;     // [rad]
};

using SensorPayload =
    std::variant<ImuSample, GnssFix, BaroSample, MagSample, AirspeedSample,
                 AeroSample>;

struct SensorEvent {
  double t = 0.0;
  SensorPayload payload;
};

using EventStream = std::vector<SensorEvent>;

}  // namespace uavnav
