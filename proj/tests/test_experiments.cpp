#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bgp/experiments.hpp"

#include <algorithm>

using namespace bgp;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig config;
  config.n_rows = 16;
  config.n_cols = 32;
  config.k_grid = {4};
  config.sigma2_w = 1e-4;
  config.sigma2_x = 1.0;
  config.trials = 8;
  config.master_seed = 42;
  config.algorithms = {AlgoSpec::parse("bomp"), AlgoSpec::parse("omp")};
  config.deterministic_output = true;
  return config;
}

std::vector<std::string> csv_lines(const std::vector<MetricRow>& rows) {
  std::vector<std::string> lines;
  for (const auto& row : rows) lines.push_back(metric_csv_row(row));
  return lines;
}

}  // namespace

TEST_CASE("algorithm specs parse ids and options") {
  const auto plain = AlgoSpec::parse("bomp");
  CHECK(plain.id == "bomp");
  CHECK_FALSE(plain.adaptive_noise);
  CHECK(plain.label() == "bomp");

  // The stagewise and subspace variants default to the residual-based noise
  // estimate; ":fixed" opts out, ":adaptive" opts in for the ascent pair.
  const auto stagewise = AlgoSpec::parse("bstomp");
  CHECK(stagewise.adaptive_noise);
  CHECK(stagewise.label() == "bstomp");
  const auto frozen = AlgoSpec::parse("bstomp:fixed");
  CHECK_FALSE(frozen.adaptive_noise);
  CHECK(frozen.label() == "bstomp:fixed");
  const auto fancy = AlgoSpec::parse("bmp:adaptive");
  CHECK(fancy.id == "bmp");
  CHECK(fancy.adaptive_noise);
  CHECK(fancy.label() == "bmp:adaptive");

  const auto bsp = AlgoSpec::parse("bsp:P=3");
  CHECK(bsp.p_flips == 3);

  const auto stomp = AlgoSpec::parse("stomp:t=3.0:stages=5");
  CHECK(stomp.t_cfar == doctest::Approx(3.0));
  CHECK(stomp.stomp_stages == 5);

  CHECK_THROWS_AS(AlgoSpec::parse("bogus"), std::invalid_argument);
  CHECK_THROWS_AS(AlgoSpec::parse("bomp:what"), std::invalid_argument);
  CHECK_THROWS_AS(AlgoSpec::parse("omp:adaptive"), std::invalid_argument);
}

TEST_CASE("prior modes parse from text") {
  CHECK(prior_mode_from_string("uniform") == PriorMode::kUniform);
  CHECK(prior_mode_from_string("beta") == PriorMode::kBeta);
  CHECK(prior_mode_from_string("beta-perturbed") == PriorMode::kBetaPerturbed);
  CHECK_THROWS_AS(prior_mode_from_string("informed"), std::runtime_error);
}

TEST_CASE("config validation reports every problem at once") {
  ExperimentConfig config = tiny_config();
  config.n_rows = 0;
  config.trials = 0;
  config.delta_p = 2.0;
  try {
    config.validate();
    FAIL("expected validation to throw");
  } catch (const std::runtime_error& e) {
    const std::string message = e.what();
    CHECK(message.find("n_rows") != std::string::npos);
    CHECK(message.find("trials") != std::string::npos);
    CHECK(message.find("delta_p") != std::string::npos);
  }
}

TEST_CASE("metrics evaluate hand-built estimates") {
  GroundTruth truth;
  truth.s = {1, 0, 1, 0};
  truth.x = Vec::Zero(4);
  truth.x << 2.0, 0.0, -1.0, 0.0;

  PursuitState estimate;
  estimate.s_hat = {1, 1, 0, 0};
  estimate.x_hat = Vec::Zero(4);
  estimate.x_hat << 2.5, 9.0, 7.0, 0.0;  // atom 2 inactive: its 7.0 is unused

  // true-support error: (2.5-2)^2 + (0-(-1))^2 over K = 2
  CHECK(mse_on_true_support(truth, estimate) ==
        doctest::Approx((0.25 + 1.0) / 2).epsilon(1e-14));
  // mismatches at atoms 1 and 2 out of M = 4
  CHECK(support_error_rate(truth, estimate) == doctest::Approx(0.5));
}

TEST_CASE("a small sweep produces one row per algorithm and sane metrics") {
  const auto rows = run_sweep(tiny_config());
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.sweep_var == "K");
    CHECK(row.sweep_value == 4.0);
    CHECK(row.trials_used + row.excluded == 8);
    CHECK(row.pe >= 0.0);
    CHECK(row.pe <= 1.0);
    CHECK(row.mse >= 0.0);
    CHECK(row.runtime_s == 0.0);  // deterministic output zeroes it
  }
}

TEST_CASE("sweeps are reproducible and independent of the worker count") {
  auto config = tiny_config();
  config.workers = 1;
  const auto once = csv_lines(run_sweep(config));
  const auto again = csv_lines(run_sweep(config));
  CHECK(once == again);
  config.workers = 4;
  CHECK(csv_lines(run_sweep(config)) == once);
}

TEST_CASE("informed priors reuse the exact same trial data") {
  auto uniform_config = tiny_config();
  auto beta_config = tiny_config();
  beta_config.prior_mode = PriorMode::kBeta;
  // Classic algorithms ignore the prior entirely, so their row must be
  // byte-identical across prior modes (same dictionaries, same noise).
  uniform_config.algorithms = {AlgoSpec::parse("omp")};
  beta_config.algorithms = {AlgoSpec::parse("omp")};
  CHECK(csv_lines(run_sweep(uniform_config)) ==
        csv_lines(run_sweep(beta_config)));
}

TEST_CASE("metric csv rows have a fixed column count") {
  const auto rows = run_sweep(tiny_config());
  const auto count_commas = [](const std::string& s) {
    return std::count(s.begin(), s.end(), ',');
  };
  CHECK(count_commas(metric_csv_header()) == 9);
  for (const auto& row : rows) {
    CHECK(count_commas(metric_csv_row(row)) == 9);
  }
}

TEST_CASE("phase transitions produce one point per algorithm and column") {
  PhaseConfig phase;
  phase.base = tiny_config();
  phase.base.n_cols = 32;
  phase.base.trials = 6;
  phase.base.algorithms = {AlgoSpec::parse("omp")};
  phase.n_over_m_grid = {0.5, 0.75};
  phase.k_over_n_grid = {0.1, 0.3, 0.5, 0.7};
  phase.target_value = 1e-2;
  const auto points = phase_transition(phase);
  REQUIRE(points.size() == 2);
  for (const auto& point : points) {
    CHECK(point.algorithm == "omp");
    if (point.crossed) {
      CHECK(point.k_over_n >= 0.1);
      CHECK(point.k_over_n <= 0.7);
    } else {
      CHECK(point.k_over_n == -1.0);
    }
  }
  CHECK(points[0].n_rows == 16);
  CHECK(points[1].n_rows == 24);
}
