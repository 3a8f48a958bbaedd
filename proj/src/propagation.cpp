#include "uavnav/propagation.hpp"

namespace uavnav {

Noise18 ProcessNoise::matrix() const {
  Noise18 Q = Noise18::Zero();
  Q.block<3, 3>(kNoiseG, kNoiseG) = sigma_g2 * Mat3::Identity();
  Q.block<3, 3>(kNoiseA, kNoiseA) = sigma_a2 * Mat3::Identity();
  Q.block<3, 3>(kNoiseBg, kNoiseBg) = sigma_bg2 * Mat3::Identity();
  Q.block<3, 3>(kNoiseBa, kNoiseBa) = sigma_ba2 * Mat3::Identity();
  Q.block<3, 3>(kNoiseThetaA, kNoiseThetaA) = sigma_theta_a2 * Mat3::Identity();
  Q.block<3, 3>(kNoiseWind, kNoiseWind) = sigma_wind2 * Mat3::Identity();
  return Q;
}

FullState strapdown_step(const FullState& chi, const ImuSample& u, double dt,
                         const Vec3& gravity) {
  if (!(dt > 0.0) || dt > 0.1) {
    throw std::invalid_argument("strapdown_step: dt outside (0, 0.1]");
  }
  const Vec3 omega = u.omega - chi.b_g;
  const Vec3 accel_n = chi.R_bn * (u.accel - chi.b_a) + gravity;
  FullState out = chi;
  out.R_bn = chi.R_bn * so3_exp(omega * dt);
  out.v_n = chi.v_n + accel_n * dt;
  out.p_n = chi.p_n + chi.v_n * dt + 0.5 * accel_n * dt * dt;
  return out;
}

void error_dynamics(FilterVariant variant, const FullState& est,
                    const ImuSample& u, const Vec3& gravity, Mat21* F,
                    Mat21x18* G) {
  F->setZero();
  G->setZero();
  const Mat3 R = est.R_bn;
  const Vec3 omega = u.omega - est.b_g;
  const Vec3 accel = u.accel - est.b_a;

  switch (variant) {
    case FilterVariant::kRiekf:
      // Group rows are state-independent apart from the bias couplings,
      // which make this the imperfect variant.
      F->block<3, 3>(kIdxTheta, kIdxBg) = -R;
      F->block<3, 3>(kIdxVel, kIdxTheta) = skew(gravity);
      F->block<3, 3>(kIdxVel, kIdxBg) = -skew(est.v_n) * R;
      F->block<3, 3>(kIdxVel, kIdxBa) = -R;
      F->block<3, 3>(kIdxPos, kIdxVel) = Mat3::Identity();
      F->block<3, 3>(kIdxPos, kIdxBg) = -skew(est.p_n) * R;
      G->block<3, 3>(kIdxTheta, kNoiseG) = -R;
      G->block<3, 3>(kIdxVel, kNoiseG) = -skew(est.v_n) * R;
      G->block<3, 3>(kIdxVel, kNoiseA) = -R;
      G->block<3, 3>(kIdxPos, kNoiseG) = -skew(est.p_n) * R;
      break;
    case FilterVariant::kLiekf:
      F->block<3, 3>(kIdxTheta, kIdxTheta) = -skew(omega);
      F->block<3, 3>(kIdxTheta, kIdxBg) = -Mat3::Identity();
      F->block<3, 3>(kIdxVel, kIdxTheta) = -skew(accel);
      F->block<3, 3>(kIdxVel, kIdxVel) = -skew(omega);
      F->block<3, 3>(kIdxVel, kIdxBa) = -Mat3::Identity();
      F->block<3, 3>(kIdxPos, kIdxVel) = Mat3::Identity();
      F->block<3, 3>(kIdxPos, kIdxPos) = -skew(omega);
      G->block<3, 3>(kIdxTheta, kNoiseG) = -Mat3::Identity();
      G->block<3, 3>(kIdxVel, kNoiseA) = -Mat3::Identity();
      break;
    case FilterVariant::kEsekf:
      // Body-frame attitude error with additive velocity and position.
      F->block<3, 3>(kIdxTheta, kIdxTheta) = -skew(omega);
      F->block<3, 3>(kIdxTheta, kIdxBg) = -Mat3::Identity();
      F->block<3, 3>(kIdxVel, kIdxTheta) = -R * skew(accel);
      F->block<3, 3>(kIdxVel, kIdxBa) = -R;
      F->block<3, 3>(kIdxPos, kIdxVel) = Mat3::Identity();
      G->block<3, 3>(kIdxTheta, kNoiseG) = -Mat3::Identity();
      G->block<3, 3>(kIdxVel, kNoiseA) = -R;
      break;
  }
  // Airflow attitude and wind follow random walks in every variant.
  G->block<3, 3>(kIdxThetaA, kNoiseThetaA) = Mat3::Identity();
  G->block<3, 3>(kIdxWind, kNoiseWind) = Mat3::Identity();
  G->block<3, 3>(kIdxBg, kNoiseBg) = Mat3::Identity();
  G->block<3, 3>(kIdxBa, kNoiseBa) = Mat3::Identity();
}

TransitionPair error_jacobians(FilterVariant variant, const FullState& est,
                               const ImuSample& u, double dt,
                               const ProcessNoise& q, const Vec3& gravity) {
  // One-step transition of the implemented integrator in closed form. This
  // is the second-order truncation with the bias and lever-arm cross terms
  // placed where the discrete map actually puts them; the plain
  // I + F dt + F^2 dt^2/2 misses O(dt^2 |p| |omega|) terms.
  const Mat3 R = est.R_bn;
  const Vec3 omega = u.omega - est.b_g;
  const Vec3 accel = u.accel - est.b_a;
  const Mat3 D = so3_exp(omega * dt).transpose();
  // Bias-to-attitude couplings over one step: global-frame errors pick up
  // exp([w dt]) J_r(w dt) = J_l(w dt); the body-frame error keeps J_r.
  const Mat3 Jr_dt = left_jacobian(-omega * dt) * dt;
  const Mat3 Jl_dt = left_jacobian(omega * dt) * dt;
  const Mat3 I3 = Mat3::Identity();

  TransitionPair tp;
  tp.phi = Mat21::Identity();
  Mat21& phi = tp.phi;
  switch (variant) {
    case FilterVariant::kRiekf: {
      const Vec3 v_next = est.v_n + (R * accel + gravity) * dt;
      const Vec3 p_next =
          est.p_n + est.v_n * dt + 0.5 * (R * accel + gravity) * dt * dt;
      const Mat3 E = R * Jl_dt;
      phi.block<3, 3>(kIdxVel, kIdxTheta) = skew(gravity) * dt;
      phi.block<3, 3>(kIdxPos, kIdxTheta) = 0.5 * skew(gravity) * dt * dt;
      phi.block<3, 3>(kIdxPos, kIdxVel) = I3 * dt;
      phi.block<3, 3>(kIdxTheta, kIdxBg) = -E;
      phi.block<3, 3>(kIdxVel, kIdxBg) = -skew(v_next) * E;
      phi.block<3, 3>(kIdxPos, kIdxBg) = -skew(p_next) * E;
      phi.block<3, 3>(kIdxVel, kIdxBa) = -R * dt;
      phi.block<3, 3>(kIdxPos, kIdxBa) = -0.5 * R * dt * dt;
      break;
    }
    case FilterVariant::kLiekf: {
      phi.block<3, 3>(kIdxTheta, kIdxTheta) = D;
      phi.block<3, 3>(kIdxVel, kIdxVel) = D;
      phi.block<3, 3>(kIdxPos, kIdxPos) = D;
      phi.block<3, 3>(kIdxTheta, kIdxBg) = -Jr_dt;
      phi.block<3, 3>(kIdxVel, kIdxTheta) = -D * skew(accel) * dt;
      phi.block<3, 3>(kIdxVel, kIdxBa) = -D * dt;
      phi.block<3, 3>(kIdxPos, kIdxVel) = D * dt;
      phi.block<3, 3>(kIdxPos, kIdxTheta) = -0.5 * D * skew(accel) * dt * dt;
      phi.block<3, 3>(kIdxPos, kIdxBa) = -0.5 * D * dt * dt;
      break;
    }
    case FilterVariant::kEsekf: {
      phi.block<3, 3>(kIdxTheta, kIdxTheta) = D;
      phi.block<3, 3>(kIdxTheta, kIdxBg) = -Jr_dt;
      phi.block<3, 3>(kIdxVel, kIdxTheta) = -R * skew(accel) * dt;
      phi.block<3, 3>(kIdxVel, kIdxBa) = -R * dt;
      phi.block<3, 3>(kIdxPos, kIdxVel) = I3 * dt;
      phi.block<3, 3>(kIdxPos, kIdxTheta) = -0.5 * R * skew(accel) * dt * dt;
      phi.block<3, 3>(kIdxPos, kIdxBa) = -0.5 * R * dt * dt;
      break;
    }
  }

  Mat21 F;
  Mat21x18 G;
  error_dynamics(variant, est, u, gravity, &F, &G);
  const Mat21x18 PhiG = tp.phi * G;
  tp.qd = PhiG * q.matrix() * PhiG.transpose() * dt;
  tp.qd = 0.5 * (tp.qd + tp.qd.transpose()).eval();
  return tp;
}

TransitionPair error_jacobians_right(const FullState& est, const ImuSample& u,
                                     double dt, const ProcessNoise& q,
                                     const Vec3& gravity) {
  return error_jacobians(FilterVariant::kRiekf, est, u, dt, q, gravity);
}

TransitionPair error_jacobians_left(const FullState& est, const ImuSample& u,
                                    double dt, const ProcessNoise& q,
                                    const Vec3& gravity) {
  return error_jacobians(FilterVariant::kLiekf, est, u, dt, q, gravity);
}

TransitionPair es_ekf_jacobians(const FullState& est, const ImuSample& u,
                                double dt, const ProcessNoise& q,
                                const Vec3& gravity) {
  return error_jacobians(FilterVariant::kEsekf, est, u, dt, q, gravity);
}

Covariance21 propagate_covariance(const Covariance21& P,
                                  const TransitionPair& tp) {
  Covariance21 out = tp.phi * P * tp.phi.transpose() + tp.qd;
  return 0.5 * (out + out.transpose());
}

}  // namespace uavnav
