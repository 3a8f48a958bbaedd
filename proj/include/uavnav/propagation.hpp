#pragma once

#include "uavnav/nav_state.hpp"

namespace uavnav {

// Default gravity, z-up navigation frame. Exposed through config so a
// z-down convention can be selected with one sign flip.
inline const Vec3 kDefaultGravity{0.0, 0.0, -9.79};

/// One IMU sample: body rate and specific force.
struct ImuSample {
  double t = 0.0;   // [s]
  Vec3 omega = Vec3::Zero();  // [rad/s]
  Vec3 accel = Vec3::Zero();  // [m/s^2]
};

/// Per-axis continuous-time process noise variances.
struct ProcessNoise {
  double sigma_g2 = 1e-8;        // (rad/s)^2
  double sigma_a2 = 1e-6;        // (m/s^2)^2
  double sigma_bg2 = 4e-10;      // (rad/s)^2/Hz
  double sigma_ba2 = 1e-8;       // (m/s^2)^2/Hz
  double sigma_theta_a2 = 3.0625e-4;  // rad^2
  double sigma_wind2 = 1e-4;     // (m/s)^2

  Noise18 matrix() const;
};

/// Discrete transition matrix and process noise over one step.
struct TransitionPair {
  Mat21 phi = Mat21::Identity();
  Mat21 qd = Mat21::Zero();
};

/// Strapdown mechanization over one step, bias-corrected rates internally.
/// Biases, airflow attitude and wind stay untouched.
FullState strapdown_step(const FullState& chi, const ImuSample& u, double dt,
                         const Vec3& gravity = kDefaultGravity);

/// Continuous error dynamics F and noise map G for one variant. Exposed for
/// tests; the filter uses the discretized pair below.
void error_dynamics(FilterVariant variant, const FullState& est,
                    const ImuSample& u, const Vec3& gravity, Mat21* F,
                    Mat21x18* G);

/// Discretization: Phi = I + F dt + 0.5 F^2 dt^2, Qd = Phi G Q G^T Phi^T dt.
TransitionPair error_jacobians(FilterVariant variant, const FullState& est,
                               const ImuSample& u, double dt,
                               const ProcessNoise& q,
                               const Vec3& gravity = kDefaultGravity);

TransitionPair error_jacobians_right(const FullState& est, const ImuSample& u,
                                     double dt, const ProcessNoise& q,
                                     const Vec3& gravity = kDefaultGravity);
TransitionPair error_jacobians_left(const FullState& est, const ImuSample& u,
                                    double dt, const ProcessNoise& q,
                                    const Vec3& gravity = kDefaultGravity);
TransitionPair es_ekf_jacobians(const FullState& est, const ImuSample& u,
                                double dt, const ProcessNoise& q,
                                const Vec3& gravity = kDefaultGravity);

/// P <- Phi P Phi^T + Qd, symmetrized.
Covariance21 propagate_covariance(const Covariance21& P,
                                  const TransitionPair& tp);

}  // namespace uavnav
