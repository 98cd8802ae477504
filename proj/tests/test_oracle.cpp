#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bgp/oracle.hpp"
#include "bgp/rng.hpp"

#include <cmath>

using namespace bgp;

TEST_CASE("exhaustive l0 finds the unique optimum of a hand-solved case") {
  // D = I2, y = (3, 0.1), lambda = 1: support {0} costs 0.01 + 1 = 1.01,
  // beating {} (9.01), {1} (10) and {0,1} (2).
  const Dictionary dict{Mat::Identity(2, 2)};
  Vec y(2);
  y << 3.0, 0.1;
  const auto set = solve_l0(dict, y, 1.0);
  CHECK(set.objective_value == doctest::Approx(1.01).epsilon(1e-12));
  REQUIRE(set.coefs.size() == 1);
  CHECK(set.coefs[0][0] == doctest::Approx(3.0));
  CHECK(set.coefs[0][1] == 0.0);
}

TEST_CASE("exhaustive l0 keeps every tied optimizer") {
  // D = I2, y = (1, 1), lambda = 1: all four supports cost exactly 2.
  const Dictionary dict{Mat::Identity(2, 2)};
  Vec y(2);
  y << 1.0, 1.0;
  const auto set = solve_l0(dict, y, 1.0);
  CHECK(set.objective_value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(set.coefs.size() == 4);
}

TEST_CASE("the l0 count uses fitted coefficients, not the mask") {
  // y = (1, 0): the {0,1} support fits x = (1, 0), which counts as one
  // nonzero and deduplicates with the {0} support.
  const Dictionary dict{Mat::Identity(2, 2)};
  Vec y(2);
  y << 1.0, 0.0;
  const auto set = solve_l0(dict, y, 0.5);
  CHECK(set.objective_value == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(set.coefs.size() == 1);
  CHECK(set.coefs[0][0] == doctest::Approx(1.0));
}

TEST_CASE("exhaustive search refuses oversized dictionaries") {
  const auto dict = Dictionary::gaussian(4, kMaxEnumerationCols + 1, 1);
  const Vec y = Vec::Zero(4);
  CHECK_THROWS_AS(solve_l0(dict, y, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(
      solve_bg_map(dict, y, ModelParams::uniform(1e-3, 1.0, 22, 0.2)),
      std::invalid_argument);
}

TEST_CASE("joint-map search matches the scalar closed form") {
  // One unit atom: activating it fits x = y sigma2_x / (sigma2_x + sigma2_w).
  const Dictionary dict{Mat::Identity(1, 1)};
  Vec y(1);
  y << 2.0;
  const auto params = ModelParams::uniform(0.5, 2.0, 1, 0.4);
  const auto set = solve_bg_map(dict, y, params);
  REQUIRE(set.coefs.size() == 1);
  REQUIRE(support_size(set.supports[0]) == 1);
  CHECK(set.coefs[0][0] == doctest::Approx(2.0 * 2.0 / 2.5).epsilon(1e-12));

  // Both branch objectives recomputed directly must bracket the winner.
  const double active = log_joint(dict, params, set.coefs[0], {1}, y);
  Vec zero(1);
  zero.setZero();
  const double inactive = log_joint(dict, params, zero, {0}, y);
  CHECK(set.objective_value == doctest::Approx(active).epsilon(1e-12));
  CHECK(active > inactive);
}

TEST_CASE("joint-map search is exhaustive over supports") {
  const auto dict = Dictionary::gaussian(4, 6, 9);
  const auto params = ModelParams::uniform(1e-2, 1.0, 6, 0.25);
  const auto truth = generate_trial(dict, params, 2, 33);
  const auto set = solve_bg_map(dict, truth.y, params);
  // No support may beat the reported optimum.
  for (std::uint32_t bits = 0; bits < (1u << 6); ++bits) {
    SupportMask s(6, 0);
    for (int i = 0; i < 6; ++i) {
      if (bits & (1u << i)) s[static_cast<std::size_t>(i)] = 1;
    }
    const Vec x = ridge_solve_on_support(dict, s, truth.y, params.eps());
    CHECK(log_joint(dict, params, x, s, truth.y) <=
          set.objective_value + 1e-9 * (1.0 + std::abs(set.objective_value)));
  }
}

TEST_CASE("penalized-fit and joint-map solution sets agree on seeded instances") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const auto dict = Dictionary::gaussian(5, 8, seed);
    const auto gen = ModelParams::uniform(1e-3, 1.0, 8, 0.25);
    const auto truth = generate_trial(dict, gen, 2, derive_seed(seed, 9));
    const auto report = verify_theorem1(dict, truth.y, 0.25, 1e-3, 1e10);
    CHECK(report.match);
    CHECK(report.lambda_used ==
          doctest::Approx(2e-3 * std::log(3.0)).epsilon(1e-12));
  }
}
