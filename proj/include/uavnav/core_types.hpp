#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace uavnav {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Error-state vector layout, shared by every filter variant.
// Blocks: [dtheta, dvel, dpos, dbg, dba, dtheta_a, dwind].
inline constexpr int kIdxTheta = 0;
inline constexpr int kIdxVel = 3;
inline constexpr int kIdxPos = 6;
inline constexpr int kIdxBg = 9;
inline constexpr int kIdxBa = 12;
inline constexpr int kIdxThetaA = 15;
inline constexpr int kIdxWind = 18;
inline constexpr int kErrorDim = 21;

// Process-noise vector layout: [n_g, n_a, n_bg, n_ba, n_theta_a, n_wind].
inline constexpr int kNoiseG = 0;
inline constexpr int kNoiseA = 3;
inline constexpr int kNoiseBg = 6;
inline constexpr int kNoiseBa = 9;
inline constexpr int kNoiseThetaA = 12;
inline constexpr int kNoiseWind = 15;
inline constexpr int kNoiseDim = 18;

using ErrorState21 = Eigen::Matrix<double, kErrorDim, 1>;
using Covariance21 = Eigen::Matrix<double, kErrorDim, kErrorDim>;
using Adjoint21 = Eigen::Matrix<double, kErrorDim, kErrorDim>;
using Mat21 = Eigen::Matrix<double, kErrorDim, kErrorDim>;
using Noise18 = Eigen::Matrix<double, kNoiseDim, kNoiseDim>;
using Mat21x18 = Eigen::Matrix<double, kErrorDim, kNoiseDim>;

// Rotation angle past pi - margin has no unique logarithm axis.
class NearSingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Innovation covariance not invertible (condition number above threshold).
class SingularInnovationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Regressor matrix rank-deficient in a least-squares fit.
class DegenerateRegressorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uavnav
