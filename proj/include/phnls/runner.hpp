#pragma once

#include "phnls/config.hpp"

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace phnls {

namespace exit_status {
inline constexpr int ok = 0;
inline constexpr int validation_error = 2;
inline constexpr int solver_error = 3;
inline constexpr int finite_time_blowup = 10;
inline constexpr int grow_along_sequence = 11;
inline constexpr int undetermined = 12;
inline constexpr int out_of_scope = 13;
} // namespace exit_status

int exit_status_for(Outcome outcome);

struct BetaValue {
  double value = 0.0;
  /// "config", "cache" or "computed".
  std::string source;
};

/// β from the config value, else from the cached summary (refused when its
/// model or grid differ), else by solving on the config grid.
BetaValue resolve_beta(const ExperimentConfig &cfg, const GridPtr &grid);

/// The initial state described by cfg.initial on the given grid.
Field initial_field(const ExperimentConfig &cfg, const GridPtr &grid);

/// Writes Q.nlsfld and ground_state.json into out_dir; returns the summary.
nlohmann::ordered_json run_ground_state(const ExperimentConfig &cfg, const std::string &out_dir);

/// Membership of the state in the file, or of the configured initial state
/// when state_path is empty.
nlohmann::ordered_json run_classify(const ExperimentConfig &cfg, const std::string &state_path);

struct EvolveRun {
  EvolutionTrace trace;
  Verdict verdict;
  nlohmann::ordered_json summary;
  int exit_code = exit_status::ok;
};

/// Writes trace.csv, plot.csv and verdict.json into out_dir when it is
/// non-empty.
EvolveRun run_evolve(const ExperimentConfig &cfg, const std::string &out_dir);

struct SweepOptions {
  double from = 0.5;
  double to = 1.5;
  int steps = 5;
  bool bisect = false;
  /// Bisection stops once the bracket is narrower than this.
  double width = 1e-2;
  /// 0 uses the hardware concurrency.
  int workers = 0;
};

struct SweepPoint {
  double value = 0.0;
  double S = 0.0;
  double P = 0.0;
  Membership membership = Membership::OutOfScope;
  Verdict verdict;
};

struct SweepResult {
  /// Ordered by value.
  std::vector<SweepPoint> points;
  /// Adjacent values where P changes sign.
  std::optional<std::pair<double, double>> p_crossing;
  /// Last K⁺ value and first K⁻ value after it.
  std::optional<std::pair<double, double>> membership_flip;
  /// Adjacent valid verdicts that differ in outcome, refined by bisection.
  std::optional<std::pair<double, double>> dynamic_transition;
  /// Every verdict was Undetermined.
  bool inconclusive = false;
};

/// Amplitude sweep of run_evolve. Writes sweep.csv and sweep.json into
/// out_dir when it is non-empty.
SweepResult run_sweep(const ExperimentConfig &cfg, const SweepOptions &opt, const std::string &out_dir);
nlohmann::ordered_json sweep_json(const SweepResult &r);

nlohmann::ordered_json exponents_json(const ModelParams &params);

struct DecayFit {
  std::vector<double> times;
  std::vector<double> lr_norms;
  double slope = 0.0;
  double delta = 0.0;
  double r = 0.0;
  /// |slope + δ|/δ.
  double relative_error = 0.0;
};

/// Least-squares slope of log‖e^{−itH}u₀‖_{L^r} against log t, r = 2σ+2,
/// at 12 log-spaced times in [t0, t1].
DecayFit linear_decay(const Field &u0, double t0 = 5.0, double t1 = 50.0, int samples = 12);
nlohmann::ordered_json run_linear_decay(const ExperimentConfig &cfg, const std::string &out_dir);

nlohmann::ordered_json report_json(const FunctionalReport &rep);
nlohmann::ordered_json verdict_json(const Verdict &v);
nlohmann::ordered_json classification_json(const Classification &c);

/// Deterministic file output: 2-space JSON with a trailing newline.
void write_json(const std::string &path, const nlohmann::ordered_json &j);

} // namespace phnls
