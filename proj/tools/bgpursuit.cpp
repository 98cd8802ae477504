// Command-line front end: single solves, Monte-Carlo sweeps, phase-transition
// maps, exhaustive-search verification, and synthetic data generation.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include "bgp/classic.hpp"
#include "bgp/config.hpp"
#include "bgp/experiments.hpp"
#include "bgp/oracle.hpp"
#include "bgp/pursuit.hpp"
#include "bgp/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nlohmann::json;

json environment_stamp() {
  json env;
#ifdef _OPENMP
  env["openmp"] = true;
  env["max_threads"] = omp_get_max_threads();
#else
  env["openmp"] = false;
  env["max_threads"] = 1;
#endif
  return env;
}

std::uint64_t master_seed_with_env(std::uint64_t configured) {
  if (const char* env = std::getenv("BGPURSUIT_SEED")) {
    return std::stoull(env);
  }
  return configured;
}

bgp::Config load_config(const std::string& path,
                        const std::vector<std::string>& overrides) {
  bgp::Config config =
      path.empty() ? bgp::Config() : bgp::Config::from_file(path);
  for (const auto& assignment : overrides) config.apply_override(assignment);
  return config;
}

bgp::ExperimentConfig experiment_from_config(const bgp::Config& config) {
  bgp::ExperimentConfig exp;
  exp.n_rows = config.get_int("n_rows", exp.n_rows);
  exp.n_cols = config.get_int("n_cols", exp.n_cols);
  exp.k_grid = config.get_int_list("k_grid", exp.k_grid);
  exp.sigma2_w = config.get_double("sigma2_w", exp.sigma2_w);
  exp.sigma2_x =
      bgp::parse_sigma2_x(config.get_string("sigma2_x", "1.0"));
  exp.trials = config.get_int("trials", exp.trials);
  exp.master_seed =
      master_seed_with_env(config.get_u64("master_seed", exp.master_seed));
  for (const auto& text :
       config.get_string_list("algorithms", {"bmp", "bomp", "bstomp", "bsp",
                                             "mp", "omp", "stomp", "sp"})) {
    exp.algorithms.push_back(bgp::AlgoSpec::parse(text));
  }
  exp.prior_mode = bgp::prior_mode_from_string(
      config.get_string("prior_mode", "uniform"));
  exp.beta_alpha = config.get_double("beta_alpha", exp.beta_alpha);
  exp.beta_beta = config.get_double("beta_beta", exp.beta_beta);
  exp.delta_p = config.get_double("delta_p", exp.delta_p);
  exp.fixed_dictionary =
      config.get_bool("fixed_dictionary", exp.fixed_dictionary);
  exp.workers = config.get_int("workers", exp.workers);
  exp.deterministic_output =
      config.get_bool("deterministic_output", exp.deterministic_output);
  return exp;
}

json config_echo(const bgp::Config& config) {
  json echo = json::object();
  for (const auto& [key, value] : config.entries()) echo[key] = value;
  return echo;
}

void write_lines(const std::string& path, const std::string& header,
                 const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << header << "\n";
  for (const auto& line : lines) out << line << "\n";
}

int cmd_solve(const std::string& dict_path, const std::string& y_path,
              const std::string& algo_text, double sigma2_w,
              const std::string& sigma2_x_text, double prob, int k_target,
              int max_iter, const std::string& out_prefix) {
  bgp::Mat dict_data;
  bgp::Vec y;
  try {
    dict_data = bgp::load_matrix_csv(dict_path);
    y = bgp::load_vector_csv(y_path);
  } catch (const std::exception& e) {
    // Unreadable input is a usage problem, not a runtime failure.
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const bgp::Dictionary dict(std::move(dict_data));
  const bgp::AlgoSpec spec = bgp::AlgoSpec::parse(algo_text);
  bgp::ModelParams params = bgp::ModelParams::uniform(
      sigma2_w, bgp::parse_sigma2_x(sigma2_x_text), dict.cols(), prob);

  bgp::PursuitOptions options;
  options.adaptive_noise = spec.adaptive_noise;
  options.p_flips = spec.p_flips;
  options.k_target = k_target;
  options.t_cfar = spec.t_cfar;
  options.stomp_stages = spec.stomp_stages;
  bgp::StopRule stop = bgp::default_stop_rule(spec.id, dict.rows(),
                                              dict.cols(), sigma2_w);
  if (max_iter > 0) stop.max_iter = max_iter;

  const bgp::AlgoReport report =
      bgp::run(spec.id, dict, y, params, stop, options);

  json summary;
  summary["algorithm"] = spec.label();
  summary["iterations"] = report.iterations;
  summary["stop_reason"] = bgp::to_string(report.reason);
  summary["residual_norm"] = report.state.r.norm();
  summary["support_size"] = bgp::support_size(report.state.s_hat);
  summary["objective"] = report.state.objective;
  if (!out_prefix.empty()) {
    bgp::save_vector_csv(out_prefix + "_x.csv", report.state.x_hat);
    bgp::Vec s(dict.cols());
    for (int i = 0; i < dict.cols(); ++i) {
      s[i] = report.state.s_hat[static_cast<std::size_t>(i)];
    }
    bgp::save_vector_csv(out_prefix + "_s.csv", s);
    summary["outputs"] = {out_prefix + "_x.csv", out_prefix + "_s.csv"};
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bernoulli-Gaussian pursuit toolbox"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run one algorithm on given data");
  std::string dict_path, y_path, algo_text = "bomp", sigma2_x_text = "1.0";
  std::string out_prefix;
  double sigma2_w = 1e-4, prob = 0.1;
  int k_target = 0, max_iter = 0;
  solve->add_option("--dict", dict_path, "dictionary CSV (unit columns)")
      ->required();
  solve->add_option("--y", y_path, "observation CSV")->required();
  solve->add_option("--algo", algo_text,
                    "bmp|bomp|bstomp|bsp|mp|omp|stomp|sp, with :adaptive, "
                    ":P=, :t=, :stages= options");
  solve->add_option("--sigma2-w", sigma2_w, "noise variance");
  solve->add_option("--sigma2-x", sigma2_x_text,
                    "coefficient variance, or 'inf'");
  solve->add_option("--p", prob, "uniform occurrence probability");
  solve->add_option("--K", k_target, "target support size (bsp, sp)");
  solve->add_option("--max-iter", max_iter, "iteration cap override");
  solve->add_option("--out", out_prefix, "prefix for _x.csv and _s.csv");

  // sweep / phase share config handling
  std::string config_path, out_path = "sweep.csv";
  std::vector<std::string> overrides;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sparsity sweep");
  sweep->add_option("--config", config_path, "key=value config file");
  sweep->add_option("--set", overrides, "config overrides (key=value)");
  sweep->add_option("--out", out_path, "output CSV path");

  std::string phase_config_path, phase_out = "phase.csv";
  std::vector<std::string> phase_overrides;
  auto* phase =
      app.add_subcommand("phase", "phase-transition boundary estimate");
  phase->add_option("--config", phase_config_path, "key=value config file");
  phase->add_option("--set", phase_overrides, "config overrides (key=value)");
  phase->add_option("--out", phase_out, "output CSV path");

  // verify-theorem1
  auto* verify = app.add_subcommand(
      "verify-theorem1",
      "compare exhaustive l0 and Bernoulli-Gaussian MAP solution sets");
  int v_n = 5, v_m = 8, v_instances = 100;
  double v_p = 0.25, v_sigma2_w = 1e-3, v_sigma2_x = 1e10;
  std::uint64_t v_seed = 1;
  verify->add_option("--n", v_n, "rows");
  verify->add_option("--m", v_m, "columns (max 20)");
  verify->add_option("--p", v_p, "occurrence probability");
  verify->add_option("--sigma2-w", v_sigma2_w, "noise variance");
  verify->add_option("--sigma2-x", v_sigma2_x, "large coefficient variance");
  verify->add_option("--instances", v_instances, "random instances");
  verify->add_option("--seed", v_seed, "master seed");

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "write a synthetic instance");
  int g_n = 32, g_m = 64, g_k = 5;
  double g_sigma2_w = 1e-4;
  std::string g_sigma2_x = "1.0", g_prefix = "instance";
  std::uint64_t g_seed = 1;
  gen->add_option("--n", g_n, "rows");
  gen->add_option("--m", g_m, "columns");
  gen->add_option("--k", g_k, "true support size");
  gen->add_option("--sigma2-w", g_sigma2_w, "noise variance");
  gen->add_option("--sigma2-x", g_sigma2_x, "coefficient variance, or 'inf'");
  gen->add_option("--seed", g_seed, "master seed");
  gen->add_option("--out", g_prefix,
                  "prefix for _dict.csv, _y.csv, _x.csv, _s.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors, except --help/--version
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(dict_path, y_path, algo_text, sigma2_w, sigma2_x_text,
                       prob, k_target, max_iter, out_prefix);
    }

    if (sweep->parsed()) {
      const bgp::Config config = load_config(config_path, overrides);
      bgp::ExperimentConfig exp;
      try {
        exp = experiment_from_config(config);
        exp.validate();
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      const auto rows = bgp::run_sweep(exp);
      std::vector<std::string> lines;
      for (const auto& row : rows) lines.push_back(bgp::metric_csv_row(row));
      write_lines(out_path, bgp::metric_csv_header(), lines);
      json summary;
      summary["config"] = config_echo(config);
      summary["environment"] = environment_stamp();
      summary["master_seed"] = exp.master_seed;
      summary["rows"] = lines.size();
      summary["output"] = out_path;
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (phase->parsed()) {
      const bgp::Config config = load_config(phase_config_path, phase_overrides);
      bgp::PhaseConfig phase_config;
      try {
        phase_config.base = experiment_from_config(config);
        phase_config.base.k_grid = {1};  // replaced per grid column
        phase_config.n_over_m_grid = config.get_double_list(
            "n_over_m_grid", phase_config.n_over_m_grid);
        phase_config.k_over_n_grid = config.get_double_list(
            "k_over_n_grid", phase_config.k_over_n_grid);
        phase_config.target_metric =
            config.get_string("target_metric", phase_config.target_metric);
        phase_config.target_value =
            config.get_double("target_value", phase_config.target_value);
        phase_config.base.validate();
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      const auto points = bgp::phase_transition(phase_config);
      std::vector<std::string> lines;
      for (const auto& point : points) {
        lines.push_back(bgp::phase_csv_row(point));
      }
      write_lines(phase_out, bgp::phase_csv_header(), lines);
      json summary;
      summary["config"] = config_echo(config);
      summary["environment"] = environment_stamp();
      summary["points"] = lines.size();
      summary["output"] = phase_out;
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (verify->parsed()) {
      if (v_m > bgp::kMaxEnumerationCols) {
        std::cerr << "error: --m must be <= " << bgp::kMaxEnumerationCols
                  << "\n";
        return 2;
      }
      v_seed = master_seed_with_env(v_seed);
      int matches = 0;
      int noise_free = 0;
      for (int inst = 0; inst < v_instances; ++inst) {
        const auto dict = bgp::Dictionary::gaussian(
            v_n, v_m, bgp::derive_seed(v_seed, inst, 0));
        auto params =
            bgp::ModelParams::uniform(v_sigma2_w, v_sigma2_x, v_m, v_p);
        if (inst % 5 == 0) {  // every fifth instance is exactly noise-free
          params.sigma2_w = 0.0;
          ++noise_free;
        }
        const auto truth = bgp::generate_trial(
            dict, params, std::max(1, v_m / 4),
            bgp::derive_seed(v_seed, inst, 1));
        const auto report = bgp::verify_theorem1(dict, truth.y, v_p,
                                                 v_sigma2_w, v_sigma2_x);
        if (report.match) ++matches;
      }
      std::cout << (matches == v_instances ? "PASS " : "FAIL ") << matches
                << "/" << v_instances << "\n";
      json summary;
      summary["instances"] = v_instances;
      summary["matches"] = matches;
      summary["noise_free_instances"] = noise_free;
      summary["master_seed"] = v_seed;
      std::cout << summary.dump(2) << "\n";
      return matches == v_instances ? 0 : 1;
    }

    if (gen->parsed()) {
      g_seed = master_seed_with_env(g_seed);
      const auto dict =
          bgp::Dictionary::gaussian(g_n, g_m, bgp::derive_seed(g_seed, 0, 0));
      const auto params = bgp::ModelParams::uniform(
          g_sigma2_w, bgp::parse_sigma2_x(g_sigma2_x), g_m,
          static_cast<double>(g_k) / g_m);
      const auto truth =
          bgp::generate_trial(dict, params, g_k, bgp::derive_seed(g_seed, 1, 0));
      bgp::save_matrix_csv(g_prefix + "_dict.csv", dict.data());
      bgp::save_vector_csv(g_prefix + "_y.csv", truth.y);
      bgp::save_vector_csv(g_prefix + "_x.csv", truth.x);
      bgp::Vec s(g_m);
      for (int i = 0; i < g_m; ++i) {
        s[i] = truth.s[static_cast<std::size_t>(i)];
      }
      bgp::save_vector_csv(g_prefix + "_s.csv", s);
      json summary;
      summary["outputs"] = {g_prefix + "_dict.csv", g_prefix + "_y.csv",
                            g_prefix + "_x.csv", g_prefix + "_s.csv"};
      summary["master_seed"] = g_seed;
      std::cout << summary.dump(2) << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
