#include "uavnav/updates.hpp"

#include <cmath>

#include "uavnav/airdata.hpp"

namespace uavnav {

KfResult kf_update(const Covariance21& P, const MeasurementModel& mm) {
  const int k = int(mm.z.size());
  if (mm.H.rows() != k || mm.H.cols() != kErrorDim || mm.Rm.rows() != k ||
      mm.Rm.cols() != k) {
    throw std::invalid_argument("kf_update: dimension mismatch");
  }
  MatX S = mm.H * P * mm.H.transpose() + mm.Rm;
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatX> eig(S);
  const double ev_min = eig.eigenvalues().minCoeff();
  const double ev_max = eig.eigenvalues().maxCoeff();
  if (ev_min <= 0.0 || ev_max / ev_min > 1e12) {
    throw SingularInnovationError("kf_update: innovation covariance singular");
  }
  const MatX K = S.ldlt().solve(mm.H * P).transpose();
  KfResult out;
  out.dx = K * mm.z;
  const Mat21 IKH = Mat21::Identity() - K * mm.H;
  out.P = IKH * P * IKH.transpose() + K * mm.Rm * K.transpose();
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  return out;
}

double innovation_mahalanobis2(const Covariance21& P,
                               const MeasurementModel& mm) {
  MatX S = mm.H * P * mm.H.transpose() + mm.Rm;
  S = 0.5 * (S + S.transpose()).eval();
  return mm.z.dot(S.ldlt().solve(mm.z));
}

double chi2_gate_threshold(int dim) {
  // 0.999 quantiles of chi-square.
  static constexpr double kTable[7] = {0.0,    10.828, 13.816, 16.266,
                                       18.467, 20.515, 22.458};
  if (dim < 1 || dim > 6) {
    throw std::invalid_argument("chi2_gate_threshold: dim out of range");
  }
  return kTable[dim];
}

double pressure_to_height(double pressure_bar) {
  if (!(pressure_bar > 0.0) || pressure_bar > kStandardPressureBar) {
    throw std::invalid_argument("pressure_to_height: pressure out of range");
  }
  return 44300.0 *
         (1.0 - std::pow(pressure_bar / kStandardPressureBar, 1.0 / 5.255));
}

namespace {

MatX zero_h(int rows) { return MatX::Zero(rows, kErrorDim); }

}  // namespace

LinearizedResidual linearize_gnss(FilterVariant variant, const FullState& est,
                                  const Vec3& p_meas, const Vec3& v_meas) {
  LinearizedResidual out;
  out.r = VecX(6);
  out.r.segment<3>(0) = est.v_n - v_meas;
  out.r.segment<3>(3) = est.p_n - p_meas;
  out.H = zero_h(6);
  switch (variant) {
    case FilterVariant::kRiekf:
      out.H.block<3, 3>(0, kIdxTheta) = -skew(est.v_n);
      out.H.block<3, 3>(0, kIdxVel) = Mat3::Identity();
      out.H.block<3, 3>(3, kIdxTheta) = -skew(est.p_n);
      out.H.block<3, 3>(3, kIdxPos) = Mat3::Identity();
      break;
    case FilterVariant::kLiekf:
      out.H.block<3, 3>(0, kIdxVel) = est.R_bn;
      out.H.block<3, 3>(3, kIdxPos) = est.R_bn;
      break;
    case FilterVariant::kEsekf:
      out.H.block<3, 3>(0, kIdxVel) = Mat3::Identity();
      out.H.block<3, 3>(3, kIdxPos) = Mat3::Identity();
      break;
  }
  return out;
}

LinearizedResidual linearize_baro(FilterVariant variant, const FullState& est,
                                  double height_meas) {
  // Altitude is the z position; A_b selects the third row.
  LinearizedResidual out;
  out.r = VecX(1);
  out.r(0) = est.p_n.z() - height_meas;
  out.H = zero_h(1);
  switch (variant) {
    case FilterVariant::kRiekf:
      out.H.block<1, 3>(0, kIdxTheta) = -skew(est.p_n).row(2);
      out.H(0, kIdxPos + 2) = 1.0;
      break;
    case FilterVariant::kLiekf:
      out.H.block<1, 3>(0, kIdxPos) = est.R_bn.row(2);
      break;
    case FilterVariant::kEsekf:
      out.H(0, kIdxPos + 2) = 1.0;
      break;
  }
  return out;
}

LinearizedResidual linearize_mag(FilterVariant variant, const FullState& est,
                                 const Vec3& m_body_unit) {
  if (m_body_unit.norm() < 1e-9) {
    throw std::invalid_argument("linearize_mag: zero-norm field vector");
  }
  const Vec3 m = m_body_unit / m_body_unit.norm();
  const Vec3 m_nav = est.R_bn * m;  // measured vector mapped to nav frame
  LinearizedResidual out;
  out.r = Vec3::UnitX() - m_nav;
  out.H = zero_h(3);
  switch (variant) {
    case FilterVariant::kRiekf:
      out.H.block<3, 3>(0, kIdxTheta) = skew(m_nav);
      break;
    case FilterVariant::kLiekf:
    case FilterVariant::kEsekf:
      out.H.block<3, 3>(0, kIdxTheta) = est.R_bn * skew(m);
      break;
  }
  return out;
}

LinearizedResidual linearize_airspeed(FilterVariant variant,
                                      const FullState& est, double v_tas) {
  if (v_tas <= 2.0) {
    throw std::invalid_argument("linearize_airspeed: airspeed below gate");
  }
  const Vec3 t_air(v_tas, 0.0, 0.0);
  const Vec3 air_body = est.R_ab * t_air;
  const Vec3 air_nav = est.R_bn * air_body;  // predicted air velocity, nav
  LinearizedResidual out;
  out.r = est.v_n - (air_nav + est.v_wind);
  out.H = zero_h(3);
  switch (variant) {
    case FilterVariant::kRiekf:
      out.H.block<3, 3>(0, kIdxTheta) = -skew(est.v_n - air_nav);
      out.H.block<3, 3>(0, kIdxVel) = Mat3::Identity();
      out.H.block<3, 3>(0, kIdxThetaA) = est.R_bn * skew(air_body);
      out.H.block<3, 3>(0, kIdxWind) = -Mat3::Identity();
      break;
    case FilterVariant::kLiekf:
      out.H.block<3, 3>(0, kIdxTheta) = est.R_bn * skew(air_body);
      out.H.block<3, 3>(0, kIdxVel) = est.R_bn;
      out.H.block<3, 3>(0, kIdxThetaA) = est.R_bn * est.R_ab * skew(t_air);
      out.H.block<3, 3>(0, kIdxWind) = -Mat3::Identity();
      break;
    case FilterVariant::kEsekf:
      out.H.block<3, 3>(0, kIdxTheta) = est.R_bn * skew(air_body);
      out.H.block<3, 3>(0, kIdxVel) = Mat3::Identity();
      out.H.block<3, 3>(0, kIdxThetaA) = est.R_bn * est.R_ab * skew(t_air);
      out.H.block<3, 3>(0, kIdxWind) = -Mat3::Identity();
      break;
  }
  return out;
}

LinearizedResidual linearize_airflow(FilterVariant variant,
                                     const FullState& est, double alpha,
                                     double beta) {
  if (std::abs(alpha) >= 0.5 || std::abs(beta) >= 0.5) {
    throw std::invalid_argument("linearize_airflow: angles out of range");
  }
  const Mat3 R_meas = rab_from_angles(alpha, beta);
  LinearizedResidual out;
  out.r = so3_log(R_meas * est.R_ab.transpose());
  out.H = zero_h(3);
  switch (variant) {
    case FilterVariant::kRiekf:
      out.H.block<3, 3>(0, kIdxThetaA) = -Mat3::Identity();
      break;
    case FilterVariant::kLiekf:
    case FilterVariant::kEsekf:
      out.H.block<3, 3>(0, kIdxThetaA) = -est.R_ab;
      break;
  }
  return out;
}

FullState reset_and_feedback(FilterVariant variant, const FullState& est,
                             const ErrorState21& dx) {
  return inject_error(variant, est, dx);
}

}  // namespace uavnav
