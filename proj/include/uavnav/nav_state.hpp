#pragma once

#include "uavnav/core_types.hpp"
#include "uavnav/lie.hpp"

namespace uavnav {

enum class FilterVariant { kRiekf, kLiekf, kEsekf };

const char* to_string(FilterVariant v);
FilterVariant variant_from_string(const std::string& s);

/// Full estimation state: extended pose, IMU biases, airflow attitude and
/// wind velocity, all in one value type.
struct FullState {
  Mat3 R_bn = Mat3::Identity();   // body to nav attitude
  Vec3 v_n = Vec3::Zero();        // nav-frame velocity [m/s]
  Vec3 p_n = Vec3::Zero();        // nav-frame position [m]
  Vec3 b_g = Vec3::Zero();        // gyro bias [rad/s]
  Vec3 b_a = Vec3::Zero();        // accel bias [m/s^2]
  Mat3 R_ab = Mat3::Identity();   // airflow to body attitude
  Vec3 v_wind = Vec3::Zero();     // nav-frame wind velocity [m/s]

  SE23Element pose() const { return SE23Element{R_bn, v_n, p_n}; }
  bool valid(double tol = 1e-9) const;
};

// Right-invariant injection: group blocks multiply from the left by
// exp of the error, Euclidean blocks add.
FullState inject_error_right(const FullState& est, const ErrorState21& dx);
ErrorState21 extract_error_right(const FullState& truth, const FullState& est);

// Left-invariant counterpart: exp multiplies from the right, translations
// are carried through the estimated attitude.
FullState inject_error_left(const FullState& est, const ErrorState21& dx);
ErrorState21 extract_error_left(const FullState& truth, const FullState& est);

// Error-state EKF baseline: nav-frame small-angle attitude error, plain
// additive velocity/position.
FullState inject_error_esekf(const FullState& est, const ErrorState21& dx);
ErrorState21 extract_error_esekf(const FullState& truth, const FullState& est);

FullState inject_error(FilterVariant variant, const FullState& est,
                       const ErrorState21& dx);
ErrorState21 extract_error(FilterVariant variant, const FullState& truth,
                           const FullState& est);

/// 21x21 inverse adjoint of the full state. The SE2(3) block carries the
/// R^T / -R^T[.]x structure; bias, airflow and wind rows are identity
/// because every in-scope left observation matrix has zero columns there.
Adjoint21 state_adjoint_inverse(const FullState& chi);

}  // namespace uavnav
