#include "uavnav/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace uavnav {

ChannelError scalar_series_error(const std::vector<double>& errors) {
  ChannelError out;
  if (errors.empty()) return out;
  double abs_sum = 0.0, sq_sum = 0.0;
  for (double e : errors) {
    abs_sum += std::abs(e);
    sq_sum += e * e;
  }
  out.mae = abs_sum / double(errors.size());
  out.rmse = std::sqrt(sq_sum / double(errors.size()));
  return out;
}

double attitude_error_deg(const Mat3& est, const Mat3& truth) {
  return so3_log(est * truth.transpose()).norm() * 180.0 / M_PI;
}

FullState interpolate_truth(const TruthSequence& truth, double t, double* alpha,
                            double* beta) {
  if (truth.empty()) {
    throw std::invalid_argument("interpolate_truth: empty truth");
  }
  const double eps = 1e-9;
  if (t < truth.front().t - eps || t > truth.back().t + eps) {
    throw std::invalid_argument("interpolate_truth: time outside truth range");
  }
  auto it = std::lower_bound(
      truth.begin(), truth.end(), t,
      [](const TruthRecord& r, double tv) { return r.t < tv; });
  if (it == truth.begin()) ++it;
  if (it == truth.end()) --it;
  const TruthRecord& b = *it;
  const TruthRecord& a = *(it - 1);
  const double span = std::max(b.t - a.t, 1e-12);
  const double s = std::clamp((t - a.t) / span, 0.0, 1.0);

  FullState out = a.state;
  out.R_bn = a.state.R_bn *
             so3_exp(s * so3_log(a.state.R_bn.transpose() * b.state.R_bn));
  out.v_n = (1.0 - s) * a.state.v_n + s * b.state.v_n;
  out.p_n = (1.0 - s) * a.state.p_n + s * b.state.p_n;
  out.v_wind = (1.0 - s) * a.state.v_wind + s * b.state.v_wind;
  const double al = (1.0 - s) * a.alpha + s * b.alpha;
  const double be = (1.0 - s) * a.beta + s * b.beta;
  out.R_ab = rab_from_angles(al, be);
  if (alpha) *alpha = al;
  if (beta) *beta = be;
  return out;
}

MetricsReport compute_metrics(const StateHistory& est,
                              const TruthSequence& truth,
                              const MetricsOptions& opt) {
  if (est.empty() || truth.empty()) {
    throw std::invalid_argument("compute_metrics: empty estimate or truth");
  }
  MetricsReport rep;
  std::vector<double> att, pos, vel, dal, dbe, wind;
  std::vector<std::pair<double, double>> att_series;  // (t, deg)
  att.reserve(est.records.size());

  for (const HistoryRecord& rec : est.records) {
    if (rec.t < truth.front().t || rec.t > truth.back().t) continue;
    double al_t = 0.0, be_t = 0.0;
    const FullState tr = interpolate_truth(truth, rec.t, &al_t, &be_t);
    const double att_deg = attitude_error_deg(rec.state.R_bn, tr.R_bn);
    att.push_back(att_deg);
    att_series.emplace_back(rec.t, att_deg);
    pos.push_back((rec.state.p_n - tr.p_n).norm());
    vel.push_back((rec.state.v_n - tr.v_n).norm());
    wind.push_back((rec.state.v_wind - tr.v_wind).norm());
    const double al_e = std::atan2(rec.state.R_ab(2, 0), rec.state.R_ab(0, 0));
    const double be_e = std::asin(std::clamp(rec.state.R_ab(1, 0), -1.0, 1.0));
    dal.push_back((al_e - al_t) * 180.0 / M_PI);
    dbe.push_back((be_e - be_t) * 180.0 / M_PI);

    for (const auto& w : opt.denial_windows) {
      if (rec.t >= w.first && rec.t <= w.second) {
        const Vec3 dp = rec.state.p_n - tr.p_n;
        rep.max_horizontal_error_m =
            std::max(rep.max_horizontal_error_m, dp.head<2>().norm());
        rep.max_vertical_error_m =
            std::max(rep.max_vertical_error_m, std::abs(dp.z()));
      }
    }
  }
  if (att.empty()) {
    throw std::invalid_argument("compute_metrics: no overlapping time range");
  }
  rep.attitude_deg = scalar_series_error(att);
  rep.position_m = scalar_series_error(pos);
  rep.velocity_mps = scalar_series_error(vel);
  rep.alpha_deg = scalar_series_error(dal);
  rep.beta_deg = scalar_series_error(dbe);
  rep.wind_mps = scalar_series_error(wind);

  // First time the attitude error stays below the threshold for the hold
  // window.
  const double t0 = att_series.front().first;
  const double t_end = att_series.back().first;
  rep.time_to_converge = t_end - t0;
  size_t hold_start = 0;
  bool in_hold = false;
  for (size_t i = 0; i < att_series.size(); ++i) {
    if (att_series[i].second < opt.converge_threshold_deg) {
      if (!in_hold) {
        in_hold = true;
        hold_start = i;
      }
      if (att_series[i].first - att_series[hold_start].first >=
          opt.converge_hold_s) {
        rep.converged = true;
        rep.time_to_converge = att_series[hold_start].first - t0;
        break;
      }
    } else {
      in_hold = false;
    }
  }
  // Edge case: the hold window reaches the end of the series.
  if (!rep.converged && in_hold &&
      t_end - att_series[hold_start].first >= opt.converge_hold_s) {
    rep.converged = true;
    rep.time_to_converge = att_series[hold_start].first - t0;
  }
  if (rep.converged) {
    std::vector<double> post;
    for (const auto& [t, e] : att_series) {
      if (t >= rep.time_to_converge + t0) post.push_back(e);
    }
    rep.post_convergence_att_rmse_deg = scalar_series_error(post).rmse;
  }
  return rep;
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  auto channel = [](const ChannelError& c) {
    nlohmann::ordered_json cj;
    cj["mae"] = c.mae;
    cj["rmse"] = c.rmse;
    return cj;
  };
  j["attitude_deg"] = channel(attitude_deg);
  j["position_m"] = channel(position_m);
  j["velocity_mps"] = channel(velocity_mps);
  j["alpha_deg"] = channel(alpha_deg);
  j["beta_deg"] = channel(beta_deg);
  j["wind_mps"] = channel(wind_mps);
  j["time_to_converge_s"] = time_to_converge;
  j["converged"] = converged;
  j["post_convergence_att_rmse_deg"] = post_convergence_att_rmse_deg;
  j["max_horizontal_error_m"] = max_horizontal_error_m;
  j["max_vertical_error_m"] = max_vertical_error_m;
  return j.dump(2) + "\n";
}

}  // namespace uavnav
