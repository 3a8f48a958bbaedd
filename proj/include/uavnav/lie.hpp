#pragma once

#include "uavnav/core_types.hpp"

namespace uavnav {

// Series fallback threshold for exp/log/left-Jacobian evaluations.
inline constexpr double kSmallAngle = 1e-6;
// Margin below pi past which so3_log refuses to pick an axis.
inline constexpr double kLogSingularityMargin = 1e-6;

/// Extended pose element of SE2(3): rotation plus velocity and position
/// columns of the 5x5 embedding.
struct SE23Element {
  Mat3 R = Mat3::Identity();
  Vec3 v = Vec3::Zero();
  Vec3 p = Vec3::Zero();

  Mat5 matrix() const;
  SE23Element inverse() const;
  SE23Element operator*(const SE23Element& rhs) const;
};

/// Tangent vector of SE2(3), ordered (theta, dv, dp).
struct TangentSE23 {
  Vec3 theta = Vec3::Zero();
  Vec3 dv = Vec3::Zero();
  Vec3 dp = Vec3::Zero();
};

Mat3 skew(const Vec3& w);
Vec3 vee(const Mat3& m);

/// Rodrigues formula; truncated series below kSmallAngle.
Mat3 so3_exp(const Vec3& theta);

/// Inverse of so3_exp. Throws NearSingularityError for angles within
/// kLogSingularityMargin of pi.
Vec3 so3_log(const Mat3& R);

/// Left Jacobian of SO(3).
Mat3 left_jacobian(const Vec3& theta);

/// Solves J_l(theta) x = rhs without forming the inverse.
Vec3 apply_left_jacobian_inverse(const Vec3& theta, const Vec3& rhs);

SE23Element se23_exp(const TangentSE23& xi);
TangentSE23 se23_log(const SE23Element& g);

/// Checks orthonormality and unit determinant within tol.
bool is_rotation(const Mat3& R, double tol = 1e-9);

/// Nearest rotation matrix (polar decomposition via SVD).
Mat3 orthonormalize(const Mat3& R);

}  // namespace uavnav
