#include "uavnav/filter.hpp"

#include <cmath>

namespace uavnav {

PredictorSource predictor_from_string(const std::string& s) {
  if (s == "none") return PredictorSource::kNone;
  if (s == "ls") return PredictorSource::kLs;
  if (s == "lstm") return PredictorSource::kLstm;
  throw std::invalid_argument("unknown predictor source: " + s);
}

const char* to_string(PredictorSource p) {
  switch (p) {
    case PredictorSource::kNone: return "none";
    case PredictorSource::kLs: return "ls";
    case PredictorSource::kLstm: return "lstm";
  }
  return "?";
}

InitialCovariance::InitialCovariance() {
  const double d = 1.0 / 57.3;
  sigma_theta2 = Vec3(d * d, d * d, 25.0 * d * d);
}

Covariance21 InitialCovariance::matrix() const {
  Covariance21 P = Covariance21::Zero();
  P.block<3, 3>(kIdxTheta, kIdxTheta) = sigma_theta2.asDiagonal();
  P.block<3, 3>(kIdxVel, kIdxVel) = sigma_v2 * Mat3::Identity();
  P.block<3, 3>(kIdxPos, kIdxPos) = sigma_p2 * Mat3::Identity();
  P.block<3, 3>(kIdxBg, kIdxBg) = sigma_bg2 * Mat3::Identity();
  P.block<3, 3>(kIdxBa, kIdxBa) = sigma_ba2 * Mat3::Identity();
  P.block<3, 3>(kIdxThetaA, kIdxThetaA) = sigma_theta_a2 * Mat3::Identity();
  P.block<3, 3>(kIdxWind, kIdxWind) = sigma_wind2 * Mat3::Identity();
  return P;
}

void InnovationStats::accept(const VecX& innov) {
  if (mean.size() == 0) {
    mean = VecX::Zero(innov.size());
    m2 = VecX::Zero(innov.size());
  }
  ++count;
  const VecX delta = innov - mean;
  mean += delta / double(count);
  m2 += delta.cwiseProduct(innov - mean);
}

VecX InnovationStats::variance() const {
  if (count < 2) return VecX::Zero(mean.size());
  return m2 / double(count - 1);
}

Covariance21 initial_covariance(FilterVariant variant, const FullState& init,
                                const InitialCovariance& p0) {
  const Covariance21 base = p0.matrix();
  Mat21 T = Mat21::Identity();
  switch (variant) {
    case FilterVariant::kEsekf:
      T.block<3, 3>(kIdxTheta, kIdxTheta) = init.R_bn.transpose();
      T.block<3, 3>(kIdxThetaA, kIdxThetaA) = init.R_ab.transpose();
      break;
    case FilterVariant::kRiekf:
      // delta_v_R = delta_v + [v]x delta_theta, same for position.
      T.block<3, 3>(kIdxVel, kIdxTheta) = skew(init.v_n);
      T.block<3, 3>(kIdxPos, kIdxTheta) = skew(init.p_n);
      break;
    case FilterVariant::kLiekf: {
      const Mat3 Rt = init.R_bn.transpose();
      T.block<3, 3>(kIdxTheta, kIdxTheta) = Rt;
      T.block<3, 3>(kIdxVel, kIdxVel) = Rt;
      T.block<3, 3>(kIdxPos, kIdxPos) = Rt;
      T.block<3, 3>(kIdxThetaA, kIdxThetaA) = init.R_ab.transpose();
      break;
    }
  }
  Covariance21 P = T * base * T.transpose();
  return 0.5 * (P + P.transpose());
}

FusionFilter::FusionFilter(const FilterConfig& cfg, const FullState& init_state,
                           std::optional<double> init_time)
    : FusionFilter(cfg, init_state,
                   initial_covariance(cfg.variant, init_state, cfg.p0),
                   init_time) {}

FusionFilter::FusionFilter(const FilterConfig& cfg, const FullState& init_state,
                           const Covariance21& init_cov,
                           std::optional<double> init_time)
    : cfg_(cfg), est_(init_state), P_(init_cov) {
  if (init_time) {
    time_ = *init_time;
    last_imu_t_ = *init_time;
  }
  if (cfg_.predictor == PredictorSource::kLstm) {
    lstm_ = load_lstm_weights(cfg_.lstm_weights_path);
  }
}

void FusionFilter::handle_imu(const ImuSample& u) {
  if (last_imu_t_) {
    const double dt = u.t - *last_imu_t_;
    if (dt > 0.0) {
      const TransitionPair tp =
          error_jacobians(cfg_.variant, est_, u, dt, cfg_.q0, cfg_.gravity);
      est_ = strapdown_step(est_, u, dt, cfg_.gravity);
      P_ = propagate_covariance(P_, tp);
    }
  }
  last_imu_t_ = u.t;
  last_imu_ = u;
}

void FusionFilter::apply(const std::string& name, const LinearizedResidual& lr,
                         const MatX& Rm) {
  MeasurementModel mm;
  mm.H = lr.H;
  mm.z = -lr.r;  // gain acts on measured-minus-predicted
  mm.Rm = Rm;
  auto& st = stats_[name];
  if (cfg_.gating_enabled) {
    const double d2 = innovation_mahalanobis2(P_, mm);
    if (d2 > chi2_gate_threshold(int(mm.z.size()))) {
      ++st.rejected_gate;
      return;
    }
  }
  KfResult res;
  try {
    res = kf_update(P_, mm);
  } catch (const SingularInnovationError&) {
    ++st.rejected_range;
    return;
  }
  est_ = reset_and_feedback(cfg_.variant, est_, res.dx);
  P_ = res.P;
  st.accept(lr.r);
}

void FusionFilter::handle_aero(const AeroSample& s) {
  if (cfg_.predictor == PredictorSource::kNone) return;
  if (!last_imu_ || !last_tas_ ||
      *last_tas_ <= std::max(cfg_.min_airspeed, 2.0)) {
    return;
  }

  const Vec3 omega = last_imu_->omega - est_.b_g;
  const Vec3 accel = last_imu_->accel - est_.b_a;
  const EquivalentCoefficients ec =
      equivalent_coefficients(accel, *last_tas_, cfg_.airframe, est_.R_ab);

  double alpha = 0.0, beta = 0.0;
  if (cfg_.predictor == PredictorSource::kLs) {
    std::tie(alpha, beta) =
        ls_predict(cfg_.aero_coef, ec.CL, ec.CY, omega.y(), s.delta_e,
                   s.delta_r, omega.x(), omega.z());
  } else {
    feature_window_.push_back(predictor_features(ec.CL, ec.CY, omega.x(),
                                                 omega.y(), omega.z(),
                                                 s.delta_e, s.delta_r,
                                                 *last_tas_));
    if (int(feature_window_.size()) > lstm_->seq_len) {
      feature_window_.pop_front();
    }
    if (int(feature_window_.size()) < lstm_->seq_len) return;
    std::vector<VecX> window(feature_window_.begin(), feature_window_.end());
    std::tie(alpha, beta) = sequence_predict(*lstm_, window);
  }
  last_predicted_angles_ = {alpha, beta};

  auto& st = stats_["airflow"];
  if (std::abs(alpha) >= 0.5 || std::abs(beta) >= 0.5) {
    ++st.rejected_range;
    return;
  }
  MatX Rm = MatX::Zero(3, 3);
  // Rotation-vector residual; axis 1 tracks alpha, axis 2 beta.
  Rm(0, 0) = cfg_.r0.sigma_beta2;
  Rm(1, 1) = cfg_.r0.sigma_alpha2;
  Rm(2, 2) = cfg_.r0.sigma_beta2;
  apply("airflow", linearize_airflow(cfg_.variant, est_, alpha, beta), Rm);
}

void FusionFilter::process(const SensorEvent& event) {
  if (std::holds_alternative<ImuSample>(event.payload)) {
    handle_imu(std::get<ImuSample>(event.payload));
    time_ = std::max(time_, event.t);
    return;
  }
  if (event.t < time_) {
    // Stale measurement; count and drop.
    const char* name = std::holds_alternative<GnssFix>(event.payload) ? "gnss"
                       : std::holds_alternative<BaroSample>(event.payload)
                           ? "baro"
                       : std::holds_alternative<MagSample>(event.payload)
                           ? "mag"
                       : std::holds_alternative<AirspeedSample>(event.payload)
                           ? "airspeed"
                           : "aero";
    ++stats_[name].rejected_stale;
    return;
  }
  time_ = event.t;
  if (updates_frozen_) {
    if (std::holds_alternative<AirspeedSample>(event.payload)) {
      last_tas_ = std::get<AirspeedSample>(event.payload).v_tas;
    }
    return;
  }

  if (const auto* gnss = std::get_if<GnssFix>(&event.payload)) {
    MatX Rm = MatX::Zero(6, 6);
    Rm.block<3, 3>(0, 0) = cfg_.r0.sigma_vG2 * Mat3::Identity();
    Rm.block<3, 3>(3, 3) = cfg_.r0.sigma_pG2 * Mat3::Identity();
    apply("gnss", linearize_gnss(cfg_.variant, est_, gnss->p_n, gnss->v_n), Rm);
  } else if (const auto* baro = std::get_if<BaroSample>(&event.payload)) {
    if (baro->pressure <= 0.0 || baro->pressure > kStandardPressureBar) {
      ++stats_["baro"].rejected_range;
      return;
    }
    const double h = pressure_to_height(baro->pressure);
    MatX Rm = MatX::Constant(1, 1, cfg_.r0.sigma_Hbaro2);
    apply("baro", linearize_baro(cfg_.variant, est_, h), Rm);
  } else if (const auto* mag = std::get_if<MagSample>(&event.payload)) {
    MatX Rm = cfg_.r0.sigma_m2 * MatX::Identity(3, 3);
    apply("mag", linearize_mag(cfg_.variant, est_, mag->m_b), Rm);
  } else if (const auto* tas = std::get_if<AirspeedSample>(&event.payload)) {
    last_tas_ = tas->v_tas;
    if (tas->v_tas <= cfg_.min_airspeed) {
      ++stats_["airspeed"].rejected_range;
    } else {
      MatX Rm = cfg_.r0.sigma_vTAS2 * MatX::Identity(3, 3);
      apply("airspeed", linearize_airspeed(cfg_.variant, est_, tas->v_tas), Rm);
    }
  } else if (const auto* aero = std::get_if<AeroSample>(&event.payload)) {
    handle_aero(*aero);
  }
}

StateHistory run_filter(const EventStream& stream, const FilterConfig& cfg,
                        const FullState& init_state,
                        std::optional<double> init_time) {
  StateHistory history;
  if (stream.empty()) return history;
  for (size_t i = 1; i < stream.size(); ++i) {
    if (stream[i].t < stream[i - 1].t) {
      throw std::runtime_error("run_filter: event stream not time-ordered");
    }
  }
  FusionFilter filter(cfg, init_state,
                      init_time ? init_time : std::optional<double>(stream.front().t));
  history.records.reserve(stream.size());
  for (const SensorEvent& ev : stream) {
    filter.process(ev);
    if (std::holds_alternative<ImuSample>(ev.payload)) {
      HistoryRecord rec;
      rec.t = ev.t;
      rec.state = filter.state();
      rec.cov_diag = filter.covariance().diagonal();
      history.records.push_back(std::move(rec));
    }
  }
  history.innovations = filter.innovation_stats();
  return history;
}

}  // namespace uavnav
