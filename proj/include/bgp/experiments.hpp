#pragma once

#include "bgp/model.hpp"
#include "bgp/metrics.hpp"
#include "bgp/pursuit.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bgp {

struct AlgoSpec {
  std::string id;
  // parse() turns this on for bstomp/bsp, which estimate the noise variance
  // from the residual by default; the ":fixed" option opts out and
  // ":adaptive" opts in for bmp/bomp.
  bool adaptive_noise = false;
  int p_flips = 0;  // BSP P; 0 means P = K
  double t_cfar = 2.5;
  int stomp_stages = 10;

  /// Parses "bstomp:t=2.0" / "bmp:adaptive" style ids. Throws on unknown id
  /// or option.
  static AlgoSpec parse(const std::string& text);
  std::string label() const;
};

enum class PriorMode { kUniform, kBeta, kBetaPerturbed };

PriorMode prior_mode_from_string(const std::string& text);
std::string to_string(PriorMode mode);

struct ExperimentConfig {
  int n_rows = 154;
  int n_cols = 256;
  std::vector<int> k_grid = {20};
  double sigma2_w = 1e-4;
  double sigma2_x = 1.0;  // may be inf
  int trials = 200;
  std::uint64_t master_seed = 1;
  std::vector<AlgoSpec> algorithms;
  PriorMode prior_mode = PriorMode::kUniform;
  double beta_alpha = 0.4;
  double beta_beta = 0.4;
  double delta_p = 0.3;
  bool fixed_dictionary = false;  // default: fresh dictionary per trial
  int workers = 0;                // 0 = all cores
  bool deterministic_output = false;  // zero the runtime column in the CSV

  void validate() const;  // throws with all failures listed at once
};

struct MetricRow {
  std::string algorithm;
  std::string sweep_var;
  double sweep_value = 0.0;
  double mse = 0.0;
  double mse_se = 0.0;
  double pe = 0.0;
  double pe_se = 0.0;
  double runtime_s = 0.0;
  int trials_used = 0;
  int excluded = 0;
};

/// (1/K) sum over the true support of (s_hat_i x_hat_i - x_i)^2.
/// K = 0 is the caller's responsibility (trials with K = 0 are skipped).
double mse_on_true_support(const GroundTruth& truth,
                           const PursuitState& estimate);

/// (1/M) #{i : s_hat_i != s_i}.
double support_error_rate(const GroundTruth& truth,
                          const PursuitState& estimate);

/// One row per (K grid point, algorithm). Trials fan out over an OpenMP
/// worker pool; per-trial seeding makes the result independent of worker
/// count. Rank failures in individual trials are excluded and counted.
std::vector<MetricRow> run_sweep(const ExperimentConfig& config);

std::string metric_csv_header();
std::string metric_csv_row(const MetricRow& row);

struct PhaseConfig {
  ExperimentConfig base;
  std::vector<double> n_over_m_grid = {0.3, 0.5, 0.7};
  std::vector<double> k_over_n_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  std::string target_metric = "pe";  // "pe" | "mse"
  double target_value = 1e-2;
};

struct PhasePoint {
  std::string algorithm;
  int n_rows = 0;
  double n_over_m = 0.0;
  double k_over_n = 0.0;  // interpolated crossing; meaningless if !crossed
  bool crossed = false;
};

/// For each N on the grid, locates where the metric crosses the target as K
/// grows (3-point smoothing, linear interpolation). A column where the
/// metric never crosses yields a no-crossing sentinel point.
std::vector<PhasePoint> phase_transition(const PhaseConfig& config);

std::string phase_csv_header();
std::string phase_csv_row(const PhasePoint& point);

}  // namespace bgp
