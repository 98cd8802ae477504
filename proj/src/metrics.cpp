#include "bgp/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace bgp {

namespace {

constexpr double kNoiseVarFloor = 1e-12;

AtomDecision decide(double c, double current, double r2, double shrink,
                    double eps, double penalty) {
  // current = s_hat_i x_hat_i, the atom's contribution inside the residual.
  AtomDecision d;
  const double z = c + current;
  d.rho_s0 = -(r2 + 2.0 * current * c + current * current);
  const double x1 = shrink * z;
  const double a1 = current - x1;
  d.x_s1 = x1;
  d.rho_s1 = -(r2 + 2.0 * a1 * c + a1 * a1) - eps * x1 * x1 - penalty;
  if (d.rho_s1 > d.rho_s0) {
    d.s_tilde = 1;
    d.x_tilde = x1;
    d.rho_at_decision = d.rho_s1;
  } else {
    d.s_tilde = 0;
    d.x_tilde = 0.0;
    d.rho_at_decision = d.rho_s0;
  }
  return d;
}

}  // namespace

PursuitState PursuitState::zero(const Dictionary& dict, const Vec& y) {
  PursuitState state;
  state.x_hat = Vec::Zero(dict.cols());
  state.s_hat.assign(static_cast<std::size_t>(dict.cols()), 0);
  state.r = y;
  state.n = 0;
  state.objective = 0.0;
  return state;
}

void PursuitState::refresh_residual(const Dictionary& dict, const Vec& y) {
  r = y - dict.data() * x_hat;
}

double support_penalty(const ModelParams& params, int i) {
  return 2.0 * params.sigma2_w * params.log_odds(i);
}

double rho(const Dictionary& dict, const ModelParams& params,
           const PursuitState& state, int i, double x_i, std::uint8_t s_i) {
  const double current = state.s_hat[static_cast<std::size_t>(i)]
                             ? state.x_hat[i]
                             : 0.0;
  const double effective = s_i ? x_i : 0.0;
  const double a = current - effective;
  const double c = dict.data().col(i).dot(state.r);
  double value = -(state.r.squaredNorm() + 2.0 * a * c + a * a) -
                 params.eps() * x_i * x_i;
  if (s_i) value -= support_penalty(params, i);
  return value;
}

double threshold(const ModelParams& params, int i) {
  const double ratio =
      params.infinite_x() ? 1.0
                          : (params.sigma2_x + params.sigma2_w) / params.sigma2_x;
  return 2.0 * params.sigma2_w * ratio * params.log_odds(i);
}

double adaptive_threshold(const PursuitState& state, const ModelParams& params,
                          int i, int n_rows) {
  const double noise_var =
      std::max(state.r.squaredNorm() / n_rows, kNoiseVarFloor);
  const double ratio =
      params.infinite_x() ? 1.0 : (params.sigma2_x + noise_var) / params.sigma2_x;
  return 2.0 * noise_var * ratio * params.log_odds(i);
}

AtomDecision local_optimum(const Dictionary& dict, const ModelParams& params,
                           const PursuitState& state, int i) {
  const double c = dict.data().col(i).dot(state.r);
  const double current =
      state.s_hat[static_cast<std::size_t>(i)] ? state.x_hat[i] : 0.0;
  return decide(c, current, state.r.squaredNorm(), params.shrink(),
                params.eps(), support_penalty(params, i));
}

std::vector<AtomDecision> atom_decisions(const Dictionary& dict,
                                         const ModelParams& params,
                                         const PursuitState& state,
                                         bool parallel) {
  const int m = dict.cols();
  const Vec c = correlate_all(dict, state.r);
  const double r2 = state.r.squaredNorm();
  const double shrink = params.shrink();
  const double eps = params.eps();
  std::vector<AtomDecision> decisions(static_cast<std::size_t>(m));
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
      const double current =
          state.s_hat[static_cast<std::size_t>(i)] ? state.x_hat[i] : 0.0;
      decisions[static_cast<std::size_t>(i)] =
          decide(c[i], current, r2, shrink, eps, support_penalty(params, i));
    }
  } else {
    for (int i = 0; i < m; ++i) {
      const double current =
          state.s_hat[static_cast<std::size_t>(i)] ? state.x_hat[i] : 0.0;
      decisions[static_cast<std::size_t>(i)] =
          decide(c[i], current, r2, shrink, eps, support_penalty(params, i));
    }
  }
  return decisions;
}

double bsp_gain(const AtomDecision& decision) {
  return decision.s_tilde ? decision.rho_s1 - decision.rho_s0
                          : decision.rho_s0 - decision.rho_s1;
}

}  // namespace bgp
