#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "uavnav/config.hpp"
#include "uavnav/experiments.hpp"
#include "uavnav/logio.hpp"

namespace fs = std::filesystem;
using namespace uavnav;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

Config load_or_default(const std::string& path) {
  if (path.empty()) {
    Config cfg;
    cfg.scenario = default_scenario();
    return cfg;
  }
  return load_config(path);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot write " + path.string());
  }
  out << text;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed,
                 bool seed_set, double noise_scale, const std::string& out_dir) {
  Config cfg = load_or_default(config_path);
  if (seed_set) cfg.scenario.seed = seed;
  if (noise_scale >= 0.0) {
    cfg.scenario.sensors.scale_noise(noise_scale);
    cfg.scenario.wind_walk_sigma *= noise_scale;
  }
  fs::create_directories(out_dir);
  const TruthSequence truth = generate_trajectory(cfg.scenario);
  EventStream stream = synthesize_sensors(truth, cfg.scenario);
  stream = apply_denial(stream, cfg.scenario.denial_windows);
  write_sensor_log(stream, (fs::path(out_dir) / "sensors.csv").string());
  write_truth(truth, (fs::path(out_dir) / "truth.csv").string());
  std::cout << "wrote " << stream.size() << " events and " << truth.size()
            << " truth records to " << out_dir << "\n";
  return kExitOk;
}

int cmd_run(const std::string& log_path, const std::string& truth_path,
            const std::string& config_path, const std::string& variant,
            const std::string& out_dir) {
  Config cfg = load_or_default(config_path);
  if (!variant.empty()) cfg.filter.variant = variant_from_string(variant);
  const EventStream stream = read_sensor_log(log_path);
  const TruthSequence truth = read_truth(truth_path);
  if (truth.empty()) {
    throw std::invalid_argument("run: empty truth file");
  }
  fs::create_directories(out_dir);
  const FullState init = initial_state_from_truth(truth.front());
  const StateHistory history =
      run_filter(stream, cfg.filter, init, truth.front().t);
  MetricsOptions opt;
  opt.denial_windows = cfg.scenario.denial_windows;
  const MetricsReport metrics = compute_metrics(history, truth, opt);
  write_history(history, (fs::path(out_dir) / "state.csv").string());
  write_text(fs::path(out_dir) / "metrics.json", metrics.to_json());
  std::cout << metrics.to_json();
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& biases_csv,
              const std::string& variants_csv, int seeds,
              const std::string& out_dir) {
  Config cfg = load_or_default(config_path);
  if (config_path.empty()) cfg.scenario = sweep_scenario();
  std::vector<double> biases;
  {
    std::stringstream ss(biases_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) biases.push_back(std::stod(tok));
  }
  std::vector<FilterVariant> variants;
  {
    std::stringstream ss(variants_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) variants.push_back(variant_from_string(tok));
  }
  const auto rows = convergence_sweep(cfg.scenario, cfg.filter, biases,
                                      variants, seeds);
  fs::create_directories(out_dir);
  const std::string csv = sweep_to_csv(rows);
  write_text(fs::path(out_dir) / "sweep.csv", csv);
  std::cout << csv;
  return kExitOk;
}

int cmd_denial(const std::string& config_path, const std::string& out_dir) {
  Config cfg = load_or_default(config_path);
  if (config_path.empty()) {
    cfg.scenario = denial_scenario();
    cfg.filter.predictor = PredictorSource::kLs;
    cfg.filter.aero_coef = cfg.scenario.aero_coef;
    cfg.filter.airframe = cfg.scenario.airframe;
  }
  if (cfg.scenario.denial_windows.empty()) {
    throw std::invalid_argument("denial: scenario has no denial window");
  }
  const auto rows = denial_experiment(
      cfg.scenario, cfg.filter,
      {FilterVariant::kRiekf, FilterVariant::kLiekf, FilterVariant::kEsekf});
  fs::create_directories(out_dir);
  const std::string csv = denial_to_csv(rows);
  write_text(fs::path(out_dir) / "denial.csv", csv);
  std::cout << csv;
  return kExitOk;
}

int cmd_fit_aero(const std::string& log_path, const std::string& config_path,
                 const std::string& out_path) {
  Config cfg = load_or_default(config_path);
  const EventStream stream = read_sensor_log(log_path);
  const auto samples = aero_samples_from_log(stream, cfg.filter.airframe);
  const LsFitResult fit = ls_fit(samples);
  save_aero_coefficients(fit.coef, out_path);
  std::cout << "fit " << samples.size() << " samples, lift residual rms "
            << fit.residual_rms_lift << ", side residual rms "
            << fit.residual_rms_side << "\n";
  return kExitOk;
}

int cmd_predict(const std::string& log_path, const std::string& config_path,
                const std::string& coef_path, const std::string& weights_path,
                const std::string& out_path) {
  Config cfg = load_or_default(config_path);
  const EventStream stream = read_sensor_log(log_path);
  AeroCoefficients coef = cfg.filter.aero_coef;
  if (!coef_path.empty()) coef = load_aero_coefficients(coef_path);
  std::optional<LstmWeights> lstm;
  if (!weights_path.empty()) lstm = load_lstm_weights(weights_path);

  std::string csv = "t,alpha_pred,beta_pred,alpha_ref,beta_ref\n";
  std::optional<ImuSample> imu;
  std::optional<double> tas;
  std::deque<VecX> window;
  char buf[200];
  int count = 0;
  for (const SensorEvent& ev : stream) {
    if (const auto* u = std::get_if<ImuSample>(&ev.payload)) {
      imu = *u;
    } else if (const auto* a = std::get_if<AirspeedSample>(&ev.payload)) {
      tas = a->v_tas;
    } else if (const auto* ae = std::get_if<AeroSample>(&ev.payload)) {
      if (!imu || !tas || *tas <= 2.0) continue;
      const Mat3 R_ab = rab_from_angles(ae->alpha, ae->beta);
      const EquivalentCoefficients ec =
          equivalent_coefficients(imu->accel, *tas, cfg.filter.airframe, R_ab);
      double alpha = 0.0, beta = 0.0;
      if (lstm) {
        window.push_back(predictor_features(ec.CL, ec.CY, imu->omega.x(),
                                            imu->omega.y(), imu->omega.z(),
                                            ae->delta_e, ae->delta_r, *tas));
        if (int(window.size()) > lstm->seq_len) window.pop_front();
        if (int(window.size()) < lstm->seq_len) continue;
        std::vector<VecX> w(window.begin(), window.end());
        std::tie(alpha, beta) = sequence_predict(*lstm, w);
      } else {
        std::tie(alpha, beta) =
            ls_predict(coef, ec.CL, ec.CY, imu->omega.y(), ae->delta_e,
                       ae->delta_r, imu->omega.x(), imu->omega.z());
      }
      std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%.9g\n", ev.t, alpha,
                    beta, ae->alpha, ae->beta);
      csv += buf;
      ++count;
    }
  }
  write_text(out_path, csv);
  std::cout << "predicted " << count << " airflow angle pairs to " << out_path
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-source UAV state estimation: simulator, invariant "
               "filter bank and experiment harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", log_path, truth_path, variant;
  std::string biases_csv = "-30,-15,15,30", variants_csv = "riekf,esekf";
  std::string coef_path, weights_path, out_path;
  std::uint64_t seed = 0;
  double noise_scale = -1.0;
  int seeds = 20;

  auto* sim = app.add_subcommand("simulate", "Generate a sensor log and truth CSV");
  sim->add_option("--config", config_path, "config file");
  auto* seed_opt = sim->add_option("--seed", seed, "scenario seed");
  sim->add_option("--noise-scale", noise_scale, "scale all sensor noise");
  sim->add_option("--out-dir", out_dir, "output directory");

  auto* run = app.add_subcommand("run", "Replay a sensor log through a filter");
  run->add_option("--log", log_path, "sensor log CSV")->required();
  run->add_option("--truth", truth_path, "truth CSV")->required();
  run->add_option("--config", config_path, "config file");
  run->add_option("--variant", variant, "riekf|liekf|esekf");
  run->add_option("--out-dir", out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "Initial-attitude convergence study");
  sweep->add_option("--config", config_path, "config file");
  sweep->add_option("--biases", biases_csv, "comma-separated degrees");
  sweep->add_option("--variants", variants_csv, "comma-separated variants");
  sweep->add_option("--seeds", seeds, "seeds per bias");
  sweep->add_option("--out-dir", out_dir, "output directory");

  auto* denial = app.add_subcommand("denial", "GNSS-denial resilience study");
  denial->add_option("--config", config_path, "config file");
  denial->add_option("--out-dir", out_dir, "output directory");

  auto* fit = app.add_subcommand("fit-aero", "Least-squares coefficient fit");
  fit->add_option("--log", log_path, "sensor log CSV")->required();
  fit->add_option("--config", config_path, "config file");
  fit->add_option("--out", out_path, "coefficients JSON")->required();

  auto* pred = app.add_subcommand("predict", "Batch airflow-angle prediction");
  pred->add_option("--log", log_path, "sensor log CSV")->required();
  pred->add_option("--config", config_path, "config file");
  pred->add_option("--coef", coef_path, "coefficients JSON (LS predictor)");
  pred->add_option("--weights", weights_path, "LSTM weights JSON");
  pred->add_option("--out", out_path, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate(config_path, seed, seed_opt->count() > 0, noise_scale,
                          out_dir);
    }
    if (run->parsed()) {
      return cmd_run(log_path, truth_path, config_path, variant, out_dir);
    }
    if (sweep->parsed()) {
      return cmd_sweep(config_path, biases_csv, variants_csv, seeds, out_dir);
    }
    if (denial->parsed()) {
      return cmd_denial(config_path, out_dir);
    }
    if (fit->parsed()) {
      return cmd_fit_aero(log_path, config_path, out_path);
    }
    if (pred->parsed()) {
      return cmd_predict(log_path, config_path, coef_path, weights_path,
                         out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
