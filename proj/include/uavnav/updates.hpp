#pragma once

#include "uavnav/nav_state.hpp"

namespace uavnav {

/// Linearized measurement: H maps the error state to the innovation, z is
/// the innovation fed to the gain, Rm the measurement noise covariance.
struct MeasurementModel {
  MatX H;   // k x 21
  VecX z;   // k
  MatX Rm;  // k x k, symmetric positive definite
};

struct KfResult {
  ErrorState21 dx = ErrorState21::Zero();
  Covariance21 P = Covariance21::Identity();
};

/// Kalman gain and Joseph-form covariance update. Throws
/// SingularInnovationError when the innovation covariance condition number
/// exceeds 1e12.
KfResult kf_update(const Covariance21& P, const MeasurementModel& mm);

/// Squared Mahalanobis distance of the innovation.
double innovation_mahalanobis2(const Covariance21& P,
                               const MeasurementModel& mm);

/// chi-square 0.999 quantile for 1..6 degrees of freedom.
double chi2_gate_threshold(int dim);

/// Barometric altitude from static pressure [bar].
double pressure_to_height(double pressure_bar);
inline constexpr double kStandardPressureBar = 1.01325;

/// Residual plus its Jacobian under the variant's error injection with the
/// measurement held fixed. The residual is written predicted-minus-measured;
/// the gain is applied to its negation.
struct LinearizedResidual {
  VecX r;   // predicted - measured
  MatX H;   // d r / d(error), k x 21
};

LinearizedResidual linearize_gnss(FilterVariant variant, const FullState& est,
                                  const Vec3& p_meas, const Vec3& v_meas);
LinearizedResidual linearize_baro(FilterVariant variant, const FullState& est,
                                  double height_meas);
LinearizedResidual linearize_mag(FilterVariant variant, const FullState& est,
                                 const Vec3& m_body_unit);
LinearizedResidual linearize_airspeed(FilterVariant variant,
                                      const FullState& est, double v_tas);
LinearizedResidual linearize_airflow(FilterVariant variant,
                                     const FullState& est, double alpha,
                                     double beta);

/// Applies the correction to the state; the error vector is conceptually
/// zeroed afterwards and bias corrections accumulate into b_g, b_a.
FullState reset_and_feedback(FilterVariant variant, const FullState& est,
                             const ErrorState21& dx);

}  // namespace uavnav
