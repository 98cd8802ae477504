#pragma once

#include "bgp/linalg.hpp"
#include "bgp/model.hpp"

#include <vector>

namespace bgp {

/// Current estimate of a pursuit run. Invariants: r = y - D(s_hat .* x_hat)
/// within 1e-9, and x_hat_i = 0 wherever s_hat_i = 0.
struct PursuitState {
  Vec x_hat;
  SupportMask s_hat;
  Vec r;
  int n = 0;
  double objective = 0.0;

  static PursuitState zero(const Dictionary& dict, const Vec& y);
  void refresh_residual(const Dictionary& dict, const Vec& y);
};

/// Locally-optimal decision for one atom: the coefficient/support pair
/// maximizing the single-coordinate metric, plus both branch values.
struct AtomDecision {
  double x_tilde = 0.0;  // applied value: 0 whenever s_tilde = 0
  std::uint8_t s_tilde = 0;
  double x_s1 = 0.0;  // conditional optimum of the active branch
  double rho_at_decision = 0.0;
  double rho_s1 = 0.0;
  double rho_s0 = 0.0;
};

/// Penalty weight on an active atom inside rho: 2 sigma2_w log((1-p_i)/p_i).
/// With this constant, 2 sigma2_w * (change in log_joint) equals the change
/// in rho when only coordinate i moves, and the threshold test below is the
/// exact argmax{rho_i(1), rho_i(0)} decision.
double support_penalty(const ModelParams& params, int i);

/// Single-coordinate objective: minus the squared norm of the residual after
/// replacing coordinate i by (x_i, s_i), minus eps x_i^2, minus the support
/// penalty when s_i = 1. Up to a constant this is 2 sigma2_w log p(y,x,s).
double rho(const Dictionary& dict, const ModelParams& params,
           const PursuitState& state, int i, double x_i, std::uint8_t s_i);

/// Correlation-energy level above which activating atom i is locally optimal:
/// 2 sigma2_w (sigma2_x + sigma2_w)/sigma2_x log((1-p_i)/p_i).
double threshold(const ModelParams& params, int i);

/// Threshold with sigma2_w replaced by the current residual-energy estimate
/// ||r||^2 / N (floored at 1e-12).
double adaptive_threshold(const PursuitState& state, const ModelParams& params,
                          int i, int n_rows);

/// Locally-optimal (x_tilde_i, s_tilde_i). Tie at exact threshold equality
/// resolves to s_tilde = 0.
AtomDecision local_optimum(const Dictionary& dict, const ModelParams& params,
                           const PursuitState& state, int i);

/// All M decisions from one correlation sweep, O(MN). `parallel` switches to
/// the OpenMP kernel; both paths produce identical results.
std::vector<AtomDecision> atom_decisions(const Dictionary& dict,
                                         const ModelParams& params,
                                         const PursuitState& state,
                                         bool parallel = false);

/// rho_i(s_tilde) - rho_i(1 - s_tilde) >= 0: how much the locally-optimal
/// branch beats the other one.
double bsp_gain(const AtomDecision& decision);

}  // namespace bgp
