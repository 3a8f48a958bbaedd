#include "uavnav/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

namespace uavnav {

FullState initial_state_from_truth(const TruthRecord& first,
                                   double roll_pitch_bias_rad) {
  FullState s = first.state;
  if (roll_pitch_bias_rad != 0.0) {
    s.R_bn = s.R_bn *
             so3_exp(Vec3(roll_pitch_bias_rad, roll_pitch_bias_rad, 0.0));
  }
  return s;
}

namespace {

StateHistory run_with_freeze(const EventStream& stream, const FilterConfig& cfg,
                             const FullState& init, double init_time,
                             std::optional<double> freeze_time) {
  StateHistory history;
  FusionFilter filter(cfg, init, init_time);
  bool frozen = false;
  for (const SensorEvent& ev : stream) {
    if (freeze_time && !frozen && ev.t >= *freeze_time) {
      filter.freeze_updates();
      frozen = true;
    }
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

}  // namespace

RunResult simulate_and_run(const Scenario& sc, const FilterConfig& cfg,
                           double attitude_bias_rad, bool freeze_at_denial) {
  const TruthSequence truth = generate_trajectory(sc);
  EventStream stream = synthesize_sensors(truth, sc);
  std::optional<double> freeze_time;
  if (!sc.denial_windows.empty()) {
    stream = apply_denial(stream, sc.denial_windows);
    if (freeze_at_denial) freeze_time = sc.denial_windows.front().first;
  }
  const FullState init =
      initial_state_from_truth(truth.front(), attitude_bias_rad);
  RunResult out;
  out.history = run_with_freeze(stream, cfg, init, truth.front().t, freeze_time);
  MetricsOptions opt;
  opt.denial_windows = sc.denial_windows;
  out.metrics = compute_metrics(out.history, truth, opt);
  return out;
}

std::vector<SweepRow> convergence_sweep(const Scenario& base,
                                        const FilterConfig& cfg,
                                        const std::vector<double>& biases_deg,
                                        const std::vector<FilterVariant>& variants,
                                        int n_seeds) {
  struct Job {
    double bias_deg;
    FilterVariant variant;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int s = 0; s < n_seeds; ++s) {
    for (double b : biases_deg) {
      for (FilterVariant v : variants) {
        jobs.push_back({b, v, base.seed + std::uint64_t(s)});
      }
    }
  }

  std::vector<SweepRow> rows(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      Scenario sc = base;
      sc.seed = job.seed;
      FilterConfig fc = cfg;
      fc.variant = job.variant;
      // Deliberate-fault study: the outlier gate would reject the very
      // innovations that drive recovery.
      fc.gating_enabled = false;
      const RunResult res =
          simulate_and_run(sc, fc, job.bias_deg * M_PI / 180.0);
      SweepRow row;
      row.bias_deg = job.bias_deg;
      row.variant = job.variant;
      row.seed = job.seed;
      row.converged = res.metrics.converged;
      row.time_to_converge = res.metrics.converged
                                 ? res.metrics.time_to_converge
                                 : base.duration;
      row.post_rmse_deg = res.metrics.converged
                              ? res.metrics.post_convergence_att_rmse_deg
                              : res.metrics.attitude_deg.rmse;
      rows[i] = row;
    }
  };
  const unsigned n_threads =
      std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.bias_deg != b.bias_deg) return a.bias_deg < b.bias_deg;
    if (a.variant != b.variant) return int(a.variant) < int(b.variant);
    return a.seed < b.seed;
  });
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  struct Key {
    double bias;
    FilterVariant variant;
    bool operator<(const Key& o) const {
      if (bias != o.bias) return bias < o.bias;
      return int(variant) < int(o.variant);
    }
  };
  std::map<Key, std::pair<std::vector<double>, std::vector<double>>> agg;
  for (const SweepRow& r : rows) {
    auto& [tconv, rmse] = agg[{r.bias_deg, r.variant}];
    tconv.push_back(r.time_to_converge);
    rmse.push_back(r.post_rmse_deg);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / double(v.size());
  };
  std::string out = "bias_deg,variant,metric,value\n";
  char buf[160];
  for (const auto& [key, vals] : agg) {
    std::snprintf(buf, sizeof(buf), "%g,%s,time_to_converge_s,%.6g\n", key.bias,
                  to_string(key.variant), mean(vals.first));
    out += buf;
    std::snprintf(buf, sizeof(buf), "%g,%s,post_rmse_deg,%.6g\n", key.bias,
                  to_string(key.variant), mean(vals.second));
    out += buf;
  }
  return out;
}

std::vector<DenialRow> denial_experiment(const Scenario& sc,
                                         const FilterConfig& cfg,
                                         const std::vector<FilterVariant>& variants) {
  if (sc.denial_windows.empty()) {
    throw std::invalid_argument("denial_experiment: scenario has no denial window");
  }
  struct Job {
    std::string label;
    FilterVariant variant;
    bool freeze;
  };
  std::vector<Job> jobs;
  for (FilterVariant v : variants) {
    jobs.push_back({to_string(v), v, false});
  }
  jobs.push_back({"pure_inertial", FilterVariant::kRiekf, true});

  std::vector<DenialRow> rows(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      FilterConfig fc = cfg;
      fc.variant = jobs[i].variant;
      const RunResult res = simulate_and_run(sc, fc, 0.0, jobs[i].freeze);
      rows[i] = DenialRow{jobs[i].label, res.metrics.max_horizontal_error_m,
                          res.metrics.max_vertical_error_m,
                          res.metrics.position_m.rmse};
    }
  };
  const unsigned n_threads =
      std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return rows;
}

std::vector<AeroSamplePoint> aero_samples_from_log(const EventStream& stream,
                                                   const AirframeParams& af) {
  std::vector<AeroSamplePoint> out;
  std::optional<ImuSample> imu;
  std::optional<double> tas;
  for (const SensorEvent& ev : stream) {
    if (const auto* u = std::get_if<ImuSample>(&ev.payload)) {
      imu = *u;
    } else if (const auto* a = std::get_if<AirspeedSample>(&ev.payload)) {
      tas = a->v_tas;
    } else if (const auto* ae = std::get_if<AeroSample>(&ev.payload)) {
      if (!imu || !tas || *tas <= 2.0) continue;
      const Mat3 R_ab = rab_from_angles(ae->alpha, ae->beta);
      const EquivalentCoefficients ec =
          equivalent_coefficients(imu->accel, *tas, af, R_ab);
      AeroSamplePoint s;
      s.CL = ec.CL;
      s.CY = ec.CY;
      s.alpha = ae->alpha;
      s.beta = ae->beta;
      s.p = imu->omega.x();
      s.q = imu->omega.y();
      s.r = imu->omega.z();
      s.de = ae->delta_e;
      s.dr = ae->delta_r;
      out.push_back(s);
    }
  }
  return out;
}

std::string denial_to_csv(const std::vector<DenialRow>& rows) {
  std::string out =
      "label,max_horizontal_error_m,max_vertical_error_m,position_rmse_m\n";
  char buf[160];
  for (const DenialRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.6g\n", r.label.c_str(),
                  r.max_horizontal_error_m, r.max_vertical_error_m,
                  r.position_rmse_m);
    out += buf;
  }
  return out;
}

}  // namespace uavnav
