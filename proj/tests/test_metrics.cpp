#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bgp/metrics.hpp"
#include "bgp/pursuit.hpp"

#include <cmath>

using namespace bgp;

namespace {

/// A nontrivial state reached by a few single-atom updates, so s_hat, x_hat
/// and r exercise both branches of the per-atom metric.
PursuitState busy_state(const Dictionary& dict, const ModelParams& params,
                        const Vec& y, int steps) {
  PursuitState state = PursuitState::zero(dict, y);
  for (int i = 0; i < steps; ++i) state = bmp_step(state, dict, params);
  return state;
}

/// rho recomputed the slow way: rebuild the full residual with coordinate i
/// replaced, then apply the definition term by term.
double rho_brute(const Dictionary& dict, const ModelParams& params,
                 const PursuitState& state, int i, double x_i,
                 std::uint8_t s_i) {
  Vec effective = state.x_hat;
  for (int j = 0; j < effective.size(); ++j) {
    if (!state.s_hat[static_cast<std::size_t>(j)]) effective[j] = 0.0;
  }
  const Vec y = state.r + dict.data() * effective;
  effective[i] = s_i ? x_i : 0.0;
  const double r2 = (y - dict.data() * effective).squaredNorm();
  double value = -r2 - params.eps() * x_i * x_i;
  if (s_i) value -= support_penalty(params, i);
  return value;
}

}  // namespace

TEST_CASE("zero state has the observation as residual") {
  const auto dict = Dictionary::gaussian(5, 8, 1);
  Vec y(5);
  y << 1, 2, 3, 4, 5;
  const auto state = PursuitState::zero(dict, y);
  CHECK(state.r == y);
  CHECK(state.x_hat.norm() == 0.0);
  CHECK(support_size(state.s_hat) == 0);
}

TEST_CASE("support penalty is 2 sigma2_w log((1-p)/p)") {
  auto params = ModelParams::uniform(0.01, 1.0, 2, 0.25);
  CHECK(support_penalty(params, 0) ==
        doctest::Approx(2.0 * 0.01 * std::log(3.0)).epsilon(1e-15));
  params.p[1] = 0.5;
  CHECK(support_penalty(params, 1) == doctest::Approx(0.0));
}

TEST_CASE("rho matches a residual-rebuilding reference") {
  const auto dict = Dictionary::gaussian(7, 12, 3);
  const auto params = ModelParams::uniform(0.02, 1.5, 12, 0.2);
  const auto truth = generate_trial(dict, params, 4, 9);
  const auto state = busy_state(dict, params, truth.y, 5);
  for (int i : {0, 3, 7, 11}) {
    for (double x : {-1.3, 0.0, 0.4, 2.0}) {
      CHECK(rho(dict, params, state, i, x, 1) ==
            doctest::Approx(rho_brute(dict, params, state, i, x, 1))
                .epsilon(1e-10));
      CHECK(rho(dict, params, state, i, x, 0) ==
            doctest::Approx(rho_brute(dict, params, state, i, x, 0))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("2 sigma2_w times the log-joint change equals the rho change") {
  const auto dict = Dictionary::gaussian(6, 10, 5);
  const auto params = ModelParams::uniform(0.05, 2.0, 10, 0.3);
  const auto truth = generate_trial(dict, params, 3, 21);
  const auto state = busy_state(dict, params, truth.y, 4);
  const Vec y = state.r + dict.data() * state.x_hat;

  for (int i : {1, 4, 8}) {
    const double cur_x = state.x_hat[i];
    const std::uint8_t cur_s = state.s_hat[static_cast<std::size_t>(i)];
    for (double x_new : {0.7, -0.2}) {
      for (std::uint8_t s_new : {std::uint8_t{0}, std::uint8_t{1}}) {
        Vec x_mod = state.x_hat;
        x_mod[i] = s_new ? x_new : 0.0;
        SupportMask s_mod = state.s_hat;
        s_mod[static_cast<std::size_t>(i)] = s_new;
        const double d_joint = log_joint(dict, params, x_mod, s_mod, y) -
                               log_joint(dict, params, state.x_hat,
                                         state.s_hat, y);
        const double d_rho =
            rho(dict, params, state, i, s_new ? x_new : 0.0, s_new) -
            rho(dict, params, state, i, cur_x, cur_s);
        CHECK(2.0 * params.sigma2_w * d_joint ==
              doctest::Approx(d_rho).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("the locally optimal coefficient beats a dense grid") {
  const auto dict = Dictionary::gaussian(6, 9, 7);
  const auto params = ModelParams::uniform(0.01, 1.0, 9, 0.2);
  const auto truth = generate_trial(dict, params, 3, 13);
  const auto state = busy_state(dict, params, truth.y, 3);
  for (int i : {0, 4, 8}) {
    const auto d = local_optimum(dict, params, state, i);
    const double best = rho(dict, params, state, i, d.x_s1, 1);
    CHECK(best == doctest::Approx(d.rho_s1).epsilon(1e-10));
    CHECK(rho(dict, params, state, i, 0.0, 0) ==
          doctest::Approx(d.rho_s0).epsilon(1e-10));
    for (int g = 0; g <= 200; ++g) {
      const double x = -4.0 + g * (8.0 / 200);
      CHECK(rho(dict, params, state, i, x, 1) <= best + 1e-10);
    }
  }
}

TEST_CASE("activation decision equals the correlation-energy threshold test") {
  const auto dict = Dictionary::gaussian(8, 14, 9);
  const auto params = ModelParams::uniform(0.03, 0.8, 14, 0.15);
  const auto truth = generate_trial(dict, params, 4, 3);
  const auto state = busy_state(dict, params, truth.y, 6);
  for (int i = 0; i < 14; ++i) {
    const auto d = local_optimum(dict, params, state, i);
    const double c = dict.data().col(i).dot(state.r);
    const double cur =
        state.s_hat[static_cast<std::size_t>(i)] ? state.x_hat[i] : 0.0;
    const double z = c + cur;
    CHECK(d.s_tilde == (z * z > threshold(params, i) ? 1 : 0));
  }
}

TEST_CASE("an atom orthogonal to the residual is not activated") {
  const Dictionary dict{Mat::Identity(3, 3)};
  const auto params =
      ModelParams::uniform(1e-6, ModelParams::infinite_sigma2_x(), 3, 0.5);
  Vec y(3);
  y << 1, 0, 0;  // atoms 1 and 2 have zero correlation and zero penalty
  const auto state = PursuitState::zero(dict, y);
  CHECK(local_optimum(dict, params, state, 1).s_tilde == 0);
  CHECK(local_optimum(dict, params, state, 2).s_tilde == 0);
  CHECK(local_optimum(dict, params, state, 0).s_tilde == 1);
}

TEST_CASE("adaptive threshold substitutes the residual energy estimate") {
  const auto dict = Dictionary::gaussian(5, 6, 2);
  auto params = ModelParams::uniform(123.0, 2.0, 6, 0.2);
  Vec y(5);
  y << 1, 1, 1, 1, 1;
  const auto state = PursuitState::zero(dict, y);
  const double est = y.squaredNorm() / 5;
  const double expected =
      2.0 * est * (2.0 + est) / 2.0 * std::log(0.8 / 0.2);
  CHECK(adaptive_threshold(state, params, 0, 5) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("serial and parallel decision sweeps are identical") {
  const auto dict = Dictionary::gaussian(16, 40, 4);
  const auto params = ModelParams::uniform(0.01, 1.0, 40, 0.1);
  const auto truth = generate_trial(dict, params, 6, 77);
  const auto state = busy_state(dict, params, truth.y, 8);
  const auto serial = atom_decisions(dict, params, state, false);
  const auto parallel = atom_decisions(dict, params, state, true);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].x_tilde == parallel[i].x_tilde);
    CHECK(serial[i].s_tilde == parallel[i].s_tilde);
    CHECK(serial[i].rho_at_decision == parallel[i].rho_at_decision);
    CHECK(serial[i].rho_s0 == parallel[i].rho_s0);
    CHECK(serial[i].rho_s1 == parallel[i].rho_s1);
  }
}

TEST_CASE("decision sweep agrees with per-atom local optima") {
  const auto dict = Dictionary::gaussian(10, 20, 8);
  const auto params = ModelParams::uniform(0.02, 1.0, 20, 0.2);
  const auto truth = generate_trial(dict, params, 5, 12);
  const auto state = busy_state(dict, params, truth.y, 5);
  const auto sweep = atom_decisions(dict, params, state);
  for (int i = 0; i < 20; ++i) {
    const auto single = local_optimum(dict, params, state, i);
    CHECK(sweep[static_cast<std::size_t>(i)].s_tilde == single.s_tilde);
    CHECK(sweep[static_cast<std::size_t>(i)].x_tilde ==
          doctest::Approx(single.x_tilde).epsilon(1e-13));
  }
}

TEST_CASE("bsp gain is the nonnegative branch margin") {
  const auto dict = Dictionary::gaussian(6, 10, 14);
  const auto params = ModelParams::uniform(0.05, 1.0, 10, 0.2);
  const auto truth = generate_trial(dict, params, 3, 15);
  const auto state = busy_state(dict, params, truth.y, 4);
  for (const auto& d : atom_decisions(dict, params, state)) {
    CHECK(bsp_gain(d) >= 0.0);
    CHECK(bsp_gain(d) == doctest::Approx(std::abs(d.rho_s1 - d.rho_s0)));
  }
}
