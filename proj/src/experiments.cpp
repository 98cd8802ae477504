#include "bgp/experiments.hpp"

#include "bgp/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bgp {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Per-trial stream labels fed into derive_seed so every random quantity has
// its own reproducible stream, independent of worker scheduling.
enum : std::uint64_t {
  kStreamDictionary = 0,
  kStreamTruth = 1,
  kStreamPriors = 2,
  kStreamPerturb = 3,
  kStreamSharedDictionary = 0xD1C7,
};

std::uint64_t trial_tag(int k, int trial, std::uint64_t stream) {
  return (static_cast<std::uint64_t>(k) << 32) |
         (static_cast<std::uint64_t>(stream) << 24) |
         static_cast<std::uint64_t>(trial);
}

struct TrialOutcome {
  double mse = 0.0;
  double pe = 0.0;
  double runtime_s = 0.0;
  bool excluded = false;
};

}  // namespace

AlgoSpec AlgoSpec::parse(const std::string& text) {
  AlgoSpec spec;
  std::stringstream ss(text);
  std::string token;
  bool first = true;
  while (std::getline(ss, token, ':')) {
    if (first) {
      spec.id = token;
      if (!is_known_algorithm(spec.id)) {
        throw std::invalid_argument(
            "unknown algorithm '" + token +
            "' (valid: bmp, bomp, bstomp, bsp, mp, omp, stomp, sp)");
      }
      // The stagewise and subspace variants estimate the noise variance from
      // the residual by default, as in the benchmark protocol.
      spec.adaptive_noise = spec.id == "bstomp" || spec.id == "bsp";
      first = false;
      continue;
    }
    if (token == "adaptive") {
      spec.adaptive_noise = true;
    } else if (token == "fixed") {
      spec.adaptive_noise = false;
    } else if (token.rfind("P=", 0) == 0) {
      spec.p_flips = std::stoi(token.substr(2));
      if (spec.p_flips < 1) {
        throw std::invalid_argument("algorithm option '" + token +
                                    "' must be >= 1");
      }
    } else if (token.rfind("t=", 0) == 0) {
      spec.t_cfar = std::stod(token.substr(2));
    } else if (token.rfind("stages=", 0) == 0) {
      spec.stomp_stages = std::stoi(token.substr(7));
    } else {
      throw std::invalid_argument("unknown algorithm option '" + token + "' in '" +
                               text + "'");
    }
  }
  if (spec.id.empty()) throw std::invalid_argument("empty algorithm id");
  if (spec.adaptive_noise && !is_bayesian_algorithm(spec.id)) {
    throw std::invalid_argument("adaptive noise applies to Bayesian algorithms, "
                             "not '" + spec.id + "'");
  }
  return spec;
}

std::string AlgoSpec::label() const {
  std::string out = id;
  const bool default_adaptive = id == "bstomp" || id == "bsp";
  if (adaptive_noise && !default_adaptive) out += ":adaptive";
  if (!adaptive_noise && default_adaptive) out += ":fixed";
  if (p_flips > 0) out += ":P=" + std::to_string(p_flips);
  if (t_cfar != 2.5) out += ":t=" + fmt(t_cfar);
  if (stomp_stages != 10) out += ":stages=" + std::to_string(stomp_stages);
  return out;
}

PriorMode prior_mode_from_string(const std::string& text) {
  if (text == "uniform") return PriorMode::kUniform;
  if (text == "beta") return PriorMode::kBeta;
  if (text == "beta-perturbed" || text == "beta_perturbed") {
    return PriorMode::kBetaPerturbed;
  }
  throw std::runtime_error("unknown prior mode '" + text +
                           "' (expected uniform | beta | beta-perturbed)");
}

std::string to_string(PriorMode mode) {
  switch (mode) {
    case PriorMode::kUniform: return "uniform";
    case PriorMode::kBeta: return "beta";
    case PriorMode::kBetaPerturbed: return "beta-perturbed";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  if (n_rows < 1) problems.push_back("n_rows must be >= 1");
  if (n_cols < 1) problems.push_back("n_cols must be >= 1");
  if (k_grid.empty()) problems.push_back("k_grid must be nonempty");
  for (int k : k_grid) {
    if (k < 1 || k > std::min(n_rows, n_cols)) {
      problems.push_back("sparsity " + std::to_string(k) +
                         " outside [1, min(n_rows, n_cols)]");
    }
  }
  if (!(sigma2_w > 0.0)) problems.push_back("sigma2_w must be positive");
  if (!(sigma2_x > 0.0)) problems.push_back("sigma2_x must be positive");
  if (trials < 1) problems.push_back("trials must be >= 1");
  if (algorithms.empty()) problems.push_back("no algorithms selected");
  if (!(beta_alpha > 0.0) || !(beta_beta > 0.0)) {
    problems.push_back("beta prior parameters must be positive");
  }
  if (delta_p < 0.0 || delta_p > 1.0) {
    problems.push_back("delta_p must lie in [0, 1]");
  }
  if (workers < 0) problems.push_back("workers must be >= 0");
  if (!problems.empty()) {
    std::string message = "invalid experiment configuration:";
    for (const auto& p : problems) message += "\n  - " + p;
    throw std::runtime_error(message);
  }
}

double mse_on_true_support(const GroundTruth& truth,
                           const PursuitState& estimate) {
  double sum = 0.0;
  int k = 0;
  for (int i = 0; i < truth.x.size(); ++i) {
    if (!truth.s[static_cast<std::size_t>(i)]) continue;
    const double est = estimate.s_hat[static_cast<std::size_t>(i)]
                           ? estimate.x_hat[i]
                           : 0.0;
    const double d = est - truth.x[i];
    sum += d * d;
    ++k;
  }
  return sum / k;
}

double support_error_rate(const GroundTruth& truth,
                          const PursuitState& estimate) {
  int mismatches = 0;
  for (std::size_t i = 0; i < truth.s.size(); ++i) {
    if (truth.s[i] != estimate.s_hat[i]) ++mismatches;
  }
  return static_cast<double>(mismatches) / static_cast<double>(truth.s.size());
}

std::vector<MetricRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
#ifdef _OPENMP
  if (config.workers > 0) omp_set_num_threads(config.workers);
#endif
  const int n_algos = static_cast<int>(config.algorithms.size());

  Dictionary shared_dict =
      config.fixed_dictionary
          ? Dictionary::gaussian(config.n_rows, config.n_cols,
                                 derive_seed(config.master_seed,
                                             kStreamSharedDictionary))
          : Dictionary(Mat::Identity(1, 1));

  std::vector<MetricRow> rows;
  for (int k : config.k_grid) {
    // Outcomes indexed [trial][algo]; reduced in index order afterwards so
    // the result does not depend on scheduling.
    std::vector<std::vector<TrialOutcome>> outcomes(
        static_cast<std::size_t>(config.trials));

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < config.trials; ++t) {
      const Dictionary dict =
          config.fixed_dictionary
              ? shared_dict
              : Dictionary::gaussian(
                    config.n_rows, config.n_cols,
                    derive_seed(config.master_seed,
                                trial_tag(k, t, kStreamDictionary)));
      const double p_uniform =
          static_cast<double>(k) / static_cast<double>(config.n_cols);
      const ModelParams gen_params = ModelParams::uniform(
          config.sigma2_w, config.sigma2_x, config.n_cols, p_uniform);
      const GroundTruth truth = generate_trial(
          dict, gen_params, k,
          derive_seed(config.master_seed, trial_tag(k, t, kStreamTruth)));

      ModelParams params = gen_params;
      if (config.prior_mode != PriorMode::kUniform) {
        params.p = posterior_prior_draw(
            truth.s, config.beta_alpha, config.beta_beta,
            derive_seed(config.master_seed, trial_tag(k, t, kStreamPriors)));
        if (config.prior_mode == PriorMode::kBetaPerturbed) {
          params.p = perturb_priors(
              params.p, config.delta_p,
              derive_seed(config.master_seed,
                          trial_tag(k, t, kStreamPerturb)));
        }
      }

      auto& per_algo = outcomes[static_cast<std::size_t>(t)];
      per_algo.resize(static_cast<std::size_t>(n_algos));
      for (int a = 0; a < n_algos; ++a) {
        const AlgoSpec& spec = config.algorithms[static_cast<std::size_t>(a)];
        PursuitOptions options;
        options.adaptive_noise = spec.adaptive_noise;
        options.p_flips = spec.p_flips;
        options.k_target = k;
        options.t_cfar = spec.t_cfar;
        options.stomp_stages = spec.stomp_stages;
        const StopRule stop = default_stop_rule(
            spec.id, config.n_rows, config.n_cols, config.sigma2_w);
        auto& out = per_algo[static_cast<std::size_t>(a)];
        const auto start = std::chrono::steady_clock::now();
        try {
          const AlgoReport report =
              run(spec.id, dict, truth.y, params, stop, options);
          out.mse = mse_on_true_support(truth, report.state);
          out.pe = support_error_rate(truth, report.state);
        } catch (const std::exception&) {
          out.excluded = true;
        }
        out.runtime_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
      }
    }

    for (int a = 0; a < n_algos; ++a) {
      MetricRow row;
      row.algorithm = config.algorithms[static_cast<std::size_t>(a)].label();
      row.sweep_var = "K";
      row.sweep_value = k;
      double mse_sum = 0.0, mse_sq = 0.0, pe_sum = 0.0, pe_sq = 0.0;
      for (int t = 0; t < config.trials; ++t) {
        const auto& out =
            outcomes[static_cast<std::size_t>(t)][static_cast<std::size_t>(a)];
        row.runtime_s += out.runtime_s;
        if (out.excluded) {
          ++row.excluded;
          continue;
        }
        ++row.trials_used;
        mse_sum += out.mse;
        mse_sq += out.mse * out.mse;
        pe_sum += out.pe;
        pe_sq += out.pe * out.pe;
      }
      if (row.trials_used > 0) {
        const double n = row.trials_used;
        row.mse = mse_sum / n;
        row.pe = pe_sum / n;
        if (row.trials_used > 1) {
          const double mse_var =
              std::max(0.0, (mse_sq - n * row.mse * row.mse) / (n - 1.0));
          const double pe_var =
              std::max(0.0, (pe_sq - n * row.pe * row.pe) / (n - 1.0));
          row.mse_se = std::sqrt(mse_var / n);
          row.pe_se = std::sqrt(pe_var / n);
        }
      }
      if (config.deterministic_output) row.runtime_s = 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string metric_csv_header() {
  return "sweep_var,sweep_value,algorithm,mse,mse_se,pe,pe_se,runtime_s,"
         "trials,excluded";
}

std::string metric_csv_row(const MetricRow& row) {
  std::string out;
  out += row.sweep_var + "," + fmt(row.sweep_value) + "," + row.algorithm;
  out += "," + fmt(row.mse) + "," + fmt(row.mse_se);
  out += "," + fmt(row.pe) + "," + fmt(row.pe_se);
  out += "," + fmt(row.runtime_s);
  out += "," + std::to_string(row.trials_used);
  out += "," + std::to_string(row.excluded);
  return out;
}

std::vector<PhasePoint> phase_transition(const PhaseConfig& config) {
  if (config.target_metric != "pe" && config.target_metric != "mse") {
    throw std::runtime_error("phase target metric must be 'pe' or 'mse'");
  }
  std::vector<PhasePoint> points;
  for (double n_over_m : config.n_over_m_grid) {
    ExperimentConfig exp = config.base;
    exp.n_rows = std::max(
        1, static_cast<int>(std::lround(n_over_m * exp.n_cols)));
    std::vector<double> ratios;
    exp.k_grid.clear();
    for (double k_over_n : config.k_over_n_grid) {
      const int k = std::max(
          1, static_cast<int>(std::lround(k_over_n * exp.n_rows)));
      if (k > std::min(exp.n_rows, exp.n_cols)) continue;
      if (!exp.k_grid.empty() && exp.k_grid.back() == k) continue;
      exp.k_grid.push_back(k);
      ratios.push_back(k_over_n);
    }
    const auto rows = run_sweep(exp);

    for (const auto& spec : exp.algorithms) {
      const std::string label = spec.label();
      std::vector<double> metric;
      for (std::size_t i = 0; i < exp.k_grid.size(); ++i) {
        for (const auto& row : rows) {
          if (row.algorithm == label &&
              row.sweep_value == static_cast<double>(exp.k_grid[i])) {
            metric.push_back(config.target_metric == "pe" ? row.pe : row.mse);
            break;
          }
        }
      }

      // Centered 3-point moving average on interior points; endpoints are
      // kept as-is (a one-sided average would drag a steeply rising curve's
      // first point up and hide a genuine sub-target start).
      std::vector<double> smooth(metric);
      for (std::size_t i = 1; i + 1 < metric.size(); ++i) {
        smooth[i] = (metric[i - 1] + metric[i] + metric[i + 1]) / 3.0;
      }

      // A crossing exists only when the curve starts at or below the target
      // and later exceeds it; a curve that never reaches the target at all
      // (or never leaves it) yields the no-crossing sentinel.
      PhasePoint point;
      point.algorithm = label;
      point.n_rows = exp.n_rows;
      point.n_over_m = n_over_m;
      point.k_over_n = -1.0;
      for (std::size_t i = 1; i < smooth.size(); ++i) {
        if (smooth[i - 1] <= config.target_value &&
            smooth[i] > config.target_value) {
          point.crossed = true;
          const double f = (config.target_value - smooth[i - 1]) /
                           (smooth[i] - smooth[i - 1]);
          point.k_over_n = ratios[i - 1] + f * (ratios[i] - ratios[i - 1]);
          break;
        }
      }
      points.push_back(std::move(point));
    }
  }
  return points;
}

std::string phase_csv_header() {
  return "algorithm,n_rows,n_over_m,k_over_n,crossed";
}

std::string phase_csv_row(const PhasePoint& point) {
  return point.algorithm + "," + std::to_string(point.n_rows) + "," +
         fmt(point.n_over_m) + "," + fmt(point.k_over_n) + "," +
         (point.crossed ? "1" : "0");
}

}  // namespace bgp
