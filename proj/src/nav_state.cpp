#include "uavnav/nav_state.hpp"

#include <string>

namespace uavnav {

const char* to_string(FilterVariant v) {
  switch (v) {
    case FilterVariant::kRiekf: return "riekf";
    case FilterVariant::kLiekf: return "liekf";
    case FilterVariant::kEsekf: return "esekf";
  }
  return "?";
}

FilterVariant variant_from_string(const std::string& s) {
  if (s == "riekf") return FilterVariant::kRiekf;
  if (s == "liekf") return FilterVariant::kLiekf;
  if (s == "esekf") return FilterVariant::kEsekf;
  throw std::invalid_argument("unknown filter variant: " + s);
}

bool FullState::valid(double tol) const {
  return is_rotation(R_bn, tol) && is_rotation(R_ab, tol) && v_n.allFinite() &&
         p_n.allFinite() && b_g.allFinite() && b_a.allFinite() &&
         v_wind.allFinite();
}

FullState inject_error_right(const FullState& est, const ErrorState21& dx) {
  const Vec3 dtheta = dx.segment<3>(kIdxTheta);
  const Mat3 E = so3_exp(dtheta);
  const Mat3 Jl = left_jacobian(dtheta);
  FullState out;
  out.R_bn = E * est.R_bn;
  out.v_n = E * est.v_n + Jl * dx.segment<3>(kIdxVel);
  out.p_n = E * est.p_n + Jl * dx.segment<3>(kIdxPos);
  out.b_g = est.b_g + dx.segment<3>(kIdxBg);
  out.b_a = est.b_a + dx.segment<3>(kIdxBa);
  out.R_ab = so3_exp(dx.segment<3>(kIdxThetaA)) * est.R_ab;
  out.v_wind = est.v_wind + dx.segment<3>(kIdxWind);
  return out;
}

ErrorState21 extract_error_right(const FullState& truth, const FullState& est) {
  ErrorState21 dx = ErrorState21::Zero();
  const Vec3 dtheta = so3_log(truth.R_bn * est.R_bn.transpose());
  const Mat3 E = so3_exp(dtheta);
  dx.segment<3>(kIdxTheta) = dtheta;
  dx.segment<3>(kIdxVel) =
      apply_left_jacobian_inverse(dtheta, truth.v_n - E * est.v_n);
  dx.segment<3>(kIdxPos) =
      apply_left_jacobian_inverse(dtheta, truth.p_n - E * est.p_n);
  dx.segment<3>(kIdxBg) = truth.b_g - est.b_g;
  dx.segment<3>(kIdxBa) = truth.b_a - est.b_a;
  dx.segment<3>(kIdxThetaA) = so3_log(truth.R_ab * est.R_ab.transpose());
  dx.segment<3>(kIdxWind) = truth.v_wind - est.v_wind;
  return dx;
}

FullState inject_error_left(const FullState& est, const ErrorState21& dx) {
  const Vec3 dtheta = dx.segment<3>(kIdxTheta);
  const Mat3 Jl = left_jacobian(dtheta);
  FullState out;
  out.R_bn = est.R_bn * so3_exp(dtheta);
  out.v_n = est.v_n + est.R_bn * (Jl * dx.segment<3>(kIdxVel));
  out.p_n = est.p_n + est.R_bn * (Jl * dx.segment<3>(kIdxPos));
  out.b_g = est.b_g + dx.segment<3>(kIdxBg);
  out.b_a = est.b_a + dx.segment<3>(kIdxBa);
  out.R_ab = est.R_ab * so3_exp(dx.segment<3>(kIdxThetaA));
  out.v_wind = est.v_wind + dx.segment<3>(kIdxWind);
  return out;
}

ErrorState21 extract_error_left(const FullState& truth, const FullState& est) {
  ErrorState21 dx = ErrorState21::Zero();
  const Vec3 dtheta = so3_log(est.R_bn.transpose() * truth.R_bn);
  dx.segment<3>(kIdxTheta) = dtheta;
  dx.segment<3>(kIdxVel) = apply_left_jacobian_inverse(
      dtheta, est.R_bn.transpose() * (truth.v_n - est.v_n));
  dx.segment<3>(kIdxPos) = apply_left_jacobian_inverse(
      dtheta, est.R_bn.transpose() * (truth.p_n - est.p_n));
  dx.segment<3>(kIdxBg) = truth.b_g - est.b_g;
  dx.segment<3>(kIdxBa) = truth.b_a - est.b_a;
  dx.segment<3>(kIdxThetaA) = so3_log(est.R_ab.transpose() * truth.R_ab);
  dx.segment<3>(kIdxWind) = truth.v_wind - est.v_wind;
  return dx;
}

FullState inject_error_esekf(const FullState& est, const ErrorState21& dx) {
  // Body-frame multiplicative attitude error, plain additive translation
  // states, matching the usual error-state EKF convention.
  FullState out;
  out.R_bn = est.R_bn * so3_exp(dx.segment<3>(kIdxTheta));
  out.v_n = est.v_n + dx.segment<3>(kIdxVel);
  out.p_n = est.p_n + dx.segment<3>(kIdxPos);
  out.b_g = est.b_g + dx.segment<3>(kIdxBg);
  out.b_a = est.b_a + dx.segment<3>(kIdxBa);
  out.R_ab = est.R_ab * so3_exp(dx.segment<3>(kIdxThetaA));
  out.v_wind = est.v_wind + dx.segment<3>(kIdxWind);
  return out;
}

ErrorState21 extract_error_esekf(const FullState& truth, const FullState& est) {
  ErrorState21 dx = ErrorState21::Zero();
  dx.segment<3>(kIdxTheta) = so3_log(est.R_bn.transpose() * truth.R_bn);
  dx.segment<3>(kIdxVel) = truth.v_n - est.v_n;
  dx.segment<3>(kIdxPos) = truth.p_n - est.p_n;
  dx.segment<3>(kIdxBg) = truth.b_g - est.b_g;
  dx.segment<3>(kIdxBa) = truth.b_a - est.b_a;
  dx.segment<3>(kIdxThetaA) = so3_log(est.R_ab.transpose() * truth.R_ab);
  dx.segment<3>(kIdxWind) = truth.v_wind - est.v_wind;
  return dx;
}

FullState inject_error(FilterVariant variant, const FullState& est,
                       const ErrorState21& dx) {
  switch (variant) {
    case FilterVariant::kRiekf: return inject_error_right(est, dx);
    case FilterVariant::kLiekf: return inject_error_left(est, dx);
    case FilterVariant::kEsekf: return inject_error_esekf(est, dx);
  }
  throw std::invalid_argument("inject_error: unknown variant");
}

ErrorState21 extract_error(FilterVariant variant, const FullState& truth,
                           const FullState& est) {
  switch (variant) {
    case FilterVariant::kRiekf: return extract_error_right(truth, est);
    case FilterVariant::kLiekf: return extract_error_left(truth, est);
    case FilterVariant::kEsekf: return extract_error_esekf(truth, est);
  }
  throw std::invalid_argument("extract_error: unknown variant");
}

Adjoint21 state_adjoint_inverse(const FullState& chi) {
  Adjoint21 ad = Adjoint21::Identity();
  const Mat3 Rt = chi.R_bn.transpose();
  ad.block<3, 3>(kIdxTheta, kIdxTheta) = Rt;
  ad.block<3, 3>(kIdxVel, kIdxTheta) = -Rt * skew(chi.v_n);
  ad.block<3, 3>(kIdxVel, kIdxVel) = Rt;
  ad.block<3, 3>(kIdxPos, kIdxTheta) = -Rt * skew(chi.p_n);
  ad.block<3, 3>(kIdxPos, kIdxPos) = Rt;
  return ad;
}

}  // namespace uavnav
