#pragma once

#include <string>

#include "uavnav/filter.hpp"
#include "uavnav/simulator.hpp"

namespace uavnav {

// Sensor log CSV: header "t,type,f1,f2,f3,f4,f5,f6,f7", one row per event,
// unused fields empty, LF line endings. Types: IMU, GNSS, BARO, MAG, TAS,
// AERO.
std::string sensor_log_to_csv(const EventStream& stream);
EventStream sensor_log_from_csv(const std::string& text);
void write_sensor_log(const EventStream& stream, const std::string& path);
EventStream read_sensor_log(const std::string& path);

// Truth CSV: t, row-major body-to-nav DCM, velocity, position, airflow
// angles and wind.
std::string truth_to_csv(const TruthSequence& truth);
TruthSequence truth_from_csv(const std::string& text);
void write_truth(const TruthSequence& truth, const std::string& path);
TruthSequence read_truth(const std::string& path);

// Estimate CSV mirrors the truth layout plus covariance diagonal summary.
std::string history_to_csv(const StateHistory& history);
void write_history(const StateHistory& history, const std::string& path);

}  // namespace uavnav
