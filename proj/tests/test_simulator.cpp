#include <doctest.h>

#include "test_support.hpp"
#include "uavnav/logio.hpp"
#include "uavnav/simulator.hpp"

using namespace uavnav;

namespace {

Scenario tiny_scenario() {
  Scenario sc;
  sc.duration = 20.0;
  sc.segments = {
      {SegmentKind::kCruise, 10.0, 25.0, 0.0, 0.0},
      {SegmentKind::kTurn, 10.0, 25.0, 0.1, 0.0},
  };
  sc.wind_mean = Vec3(1.0, -0.5, 0.2);
  sc.wind_walk_sigma = 0.05;
  return sc;
}

}  // namespace

TEST_CASE("kinematic consistency by construction") {
  Scenario sc = tiny_scenario();
  const TruthSequence truth = generate_trajectory(sc);
  REQUIRE(truth.size() > 100);
  const double dt = 1.0 / sc.rates.imu;
  double max_err = 0.0;
  for (size_t k = 0; k + 1 < truth.size(); ++k) {
    ImuSample u;
    u.t = truth[k].t;
    u.omega = truth[k].omega_b;
    u.accel = truth[k].accel_b;
    const FullState re = strapdown_step(truth[k].state, u, dt, sc.gravity);
    max_err = std::max(max_err, (re.R_bn - truth[k + 1].state.R_bn)
                                    .cwiseAbs()
                                    .maxCoeff());
    max_err = std::max(max_err, (re.v_n - truth[k + 1].state.v_n).norm());
    max_err = std::max(max_err, (re.p_n - truth[k + 1].state.p_n).norm());
  }
  CHECK(max_err < 1e-9);
}

TEST_CASE("single cruise segment holds speed, heading and trim alpha") {
  Scenario sc;
  sc.duration = 10.0;
  sc.segments = {{SegmentKind::kCruise, 10.0, 30.0, 0.0, 0.0}};
  sc.wind_mean = Vec3::Zero();
  sc.wind_walk_sigma = 0.0;
  sc.trim_alpha = 4.0 * M_PI / 180.0;
  const TruthSequence truth = generate_trajectory(sc);
  for (size_t k = 0; k < truth.size(); k += 100) {
    CHECK(truth[k].state.v_n.norm() == doctest::Approx(30.0).epsilon(1e-9));
    CHECK(truth[k].state.v_n.y() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(truth[k].alpha == doctest::Approx(sc.trim_alpha).epsilon(1e-9));
    CHECK(truth[k].beta == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("coordinated full turn returns to the initial heading") {
  Scenario sc;
  const double T = 62.83;
  sc.duration = T;
  sc.segments = {{SegmentKind::kTurn, T, 25.0, 2.0 * M_PI / T, 0.0}};
  sc.wind_mean = Vec3::Zero();
  sc.wind_walk_sigma = 0.0;
  const TruthSequence truth = generate_trajectory(sc);
  const Mat3 R0 = truth.front().state.R_bn;
  const Mat3 RT = truth.back().state.R_bn;
  CHECK(so3_log(R0.transpose() * RT).norm() < 1e-6);
}

TEST_CASE("same seed reproduces identical records and streams") {
  Scenario sc = tiny_scenario();
  const TruthSequence t1 = generate_trajectory(sc);
  const TruthSequence t2 = generate_trajectory(sc);
  REQUIRE(t1.size() == t2.size());
  for (size_t k = 0; k < t1.size(); k += 37) {
    CHECK(t1[k].state.p_n == t2[k].state.p_n);
    CHECK(t1[k].state.v_wind == t2[k].state.v_wind);
  }
  const std::string csv1 = sensor_log_to_csv(synthesize_sensors(t1, sc));
  const std::string csv2 = sensor_log_to_csv(synthesize_sensors(t2, sc));
  CHECK(csv1 == csv2);

  Scenario other = sc;
  other.seed = sc.seed + 1;
  const std::string csv3 =
      sensor_log_to_csv(synthesize_sensors(generate_trajectory(other), other));
  CHECK(csv1 != csv3);
}

TEST_CASE("wind random walk statistics") {
  SUBCASE("zero sigma keeps wind constant") {
    auto rng = channel_rng(5, 8);
    Vec3 w(1.0, 2.0, 3.0);
    for (int i = 0; i < 100; ++i) w = wind_step(w, 0.0, 0.01, rng);
    CHECK((w - Vec3(1.0, 2.0, 3.0)).norm() == 0.0);
  }

  SUBCASE("sample variance grows like sigma^2 t") {
    const double sigma = 0.3, dt = 0.01;
    const int n_steps = 200, n_paths = 500;
    auto rng = channel_rng(7, 8);
    double sq_sum = 0.0;
    for (int p = 0; p < n_paths; ++p) {
      Vec3 w = Vec3::Zero();
      for (int i = 0; i < n_steps; ++i) w = wind_step(w, sigma, dt, rng);
      sq_sum += w.squaredNorm() / 3.0;
    }
    const double measured = sq_sum / n_paths;
    const double expected = sigma * sigma * n_steps * dt;
    CHECK(std::abs(measured - expected) / expected < 0.15);
  }

  SUBCASE("fixed seed reproduces the path") {
    auto r1 = channel_rng(9, 8);
    auto r2 = channel_rng(9, 8);
    Vec3 a = Vec3::Zero(), b = Vec3::Zero();
    for (int i = 0; i < 50; ++i) {
      a = wind_step(a, 0.2, 0.01, r1);
      b = wind_step(b, 0.2, 0.01, r2);
    }
    CHECK((a - b).norm() == 0.0);
  }
}

TEST_CASE("sensor synthesis rates and noise levels") {
  Scenario sc = tiny_scenario();
  sc.duration = 60.0;
  sc.segments = {{SegmentKind::kCruise, 60.0, 25.0, 0.0, 0.0}};
  const TruthSequence truth = generate_trajectory(sc);
  const EventStream stream = synthesize_sensors(truth, sc);

  SUBCASE("gnss event count matches the configured rate") {
    int gnss = 0;
    for (const auto& ev : stream)
      if (std::holds_alternative<GnssFix>(ev.payload)) ++gnss;
    CHECK(std::abs(gnss - int(sc.duration * sc.rates.gnss)) <= 1);
  }

  SUBCASE("gnss empirical noise std within 10 percent") {
    std::vector<double> errs;
    size_t ti = 0;
    for (const auto& ev : stream) {
      if (!std::holds_alternative<GnssFix>(ev.payload)) continue;
      while (ti + 1 < truth.size() && truth[ti].t < ev.t - 1e-9) ++ti;
      const auto& fix = std::get<GnssFix>(ev.payload);
      const Vec3 e = fix.p_n - truth[ti].state.p_n;
      errs.push_back(e.x());
      errs.push_back(e.y());
      errs.push_back(e.z());
    }
    REQUIRE(errs.size() > 500);
    double sq = 0.0;
    for (double e : errs) sq += e * e;
    const double std_meas = std::sqrt(sq / double(errs.size()));
    CHECK(std::abs(std_meas - sc.sensors.gnss_pos_std) /
              sc.sensors.gnss_pos_std <
          0.10);
  }

  SUBCASE("imu white noise std within 10 percent") {
    const double dt = 1.0 / sc.rates.imu;
    std::vector<double> errs;
    size_t ti = 0;
    for (const auto& ev : stream) {
      if (!std::holds_alternative<ImuSample>(ev.payload)) continue;
      const auto& u = std::get<ImuSample>(ev.payload);
      while (ti + 1 < truth.size() && truth[ti].t < ev.t - 1e-9) ++ti;
      // Bias walk stays tiny over a minute; white noise dominates.
      const Vec3 e = u.omega - truth[ti].omega_b;
      errs.push_back(e.x());
      errs.push_back(e.y());
      errs.push_back(e.z());
    }
    REQUIRE(errs.size() > 10000);
    double sq = 0.0;
    for (double e : errs) sq += e * e;
    const double std_meas = std::sqrt(sq / double(errs.size()));
    const double expected = sc.sensors.gyro_arw / std::sqrt(dt);
    CHECK(std::abs(std_meas - expected) / expected < 0.10);
  }

  SUBCASE("pitot and baro empirical noise std within 10 percent") {
    std::vector<double> tas_err, baro_err;
    size_t ti = 0;
    for (const auto& ev : stream) {
      while (ti + 1 < truth.size() && truth[ti].t < ev.t - 1e-9) ++ti;
      if (const auto* a = std::get_if<AirspeedSample>(&ev.payload)) {
        tas_err.push_back(
            a->v_tas - (truth[ti].state.v_n - truth[ti].state.v_wind).norm());
      } else if (const auto* b = std::get_if<BaroSample>(&ev.payload)) {
        const double clean =
            kStandardPressureBar *
            std::pow(1.0 - truth[ti].state.p_n.z() / 44300.0, 5.255);
        baro_err.push_back(b->pressure - clean);
      }
    }
    REQUIRE(tas_err.size() > 5000);
    auto std_of = [](const std::vector<double>& xs) {
      double sq = 0.0;
      for (double x : xs) sq += x * x;
      return std::sqrt(sq / double(xs.size()));
    };
    CHECK(std::abs(std_of(tas_err) - sc.sensors.pitot_std) /
              sc.sensors.pitot_std <
          0.10);
    CHECK(std::abs(std_of(baro_err) - sc.sensors.baro_noise_bar) /
              sc.sensors.baro_noise_bar <
          0.10);
  }

  SUBCASE("noiseless synthesis inverts exactly") {
    Scenario clean = sc;
    clean.sensors.scale_noise(0.0);
    clean.wind_walk_sigma = 0.0;
    const TruthSequence t2 = generate_trajectory(clean);
    const EventStream s2 = synthesize_sensors(t2, clean);
    size_t ti = 0;
    for (const auto& ev : s2) {
      while (ti + 1 < t2.size() && t2[ti].t < ev.t - 1e-9) ++ti;
      if (const auto* b = std::get_if<BaroSample>(&ev.payload)) {
        CHECK(pressure_to_height(b->pressure) ==
              doctest::Approx(t2[ti].state.p_n.z()).epsilon(1e-9));
      } else if (const auto* m = std::get_if<MagSample>(&ev.payload)) {
        CHECK((m->m_b - t2[ti].state.R_bn.transpose() * Vec3::UnitX()).norm() <
              1e-12);
      } else if (const auto* a = std::get_if<AirspeedSample>(&ev.payload)) {
        CHECK(a->v_tas ==
              doctest::Approx(
                  (t2[ti].state.v_n - t2[ti].state.v_wind).norm())
                  .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("denial windowing") {
  Scenario sc = tiny_scenario();
  const TruthSequence truth = generate_trajectory(sc);
  const EventStream stream = synthesize_sensors(truth, sc);

  SUBCASE("empty windows are the identity") {
    const EventStream same = apply_denial(stream, {});
    CHECK(same.size() == stream.size());
  }

  SUBCASE("full window removes all gnss") {
    const EventStream none = apply_denial(stream, {{0.0, sc.duration}});
    for (const auto& ev : none) {
      CHECK_FALSE(std::holds_alternative<GnssFix>(ev.payload));
    }
  }

  SUBCASE("window removes exactly the in-range fixes") {
    const double t0 = 5.0, t1 = 12.0;
    int in_window = 0, total = 0;
    for (const auto& ev : stream) {
      if (!std::holds_alternative<GnssFix>(ev.payload)) continue;
      ++total;
      if (ev.t >= t0 && ev.t <= t1) ++in_window;
    }
    const EventStream cut = apply_denial(stream, {{t0, t1}});
    int remaining = 0;
    for (const auto& ev : cut)
      if (std::holds_alternative<GnssFix>(ev.payload)) ++remaining;
    CHECK(remaining == total - in_window);
    CHECK(in_window > 0);
  }
}

TEST_CASE("scenario validation") {
  Scenario sc = tiny_scenario();
  sc.segments.clear();
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);

  sc = tiny_scenario();
  sc.duration = 50.0;  // segments cover only 20 s
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);

  sc = tiny_scenario();
  sc.denial_windows = {{5.0, 50.0}};
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
}
