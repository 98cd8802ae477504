#include "bgp/pursuit.hpp"

#include "bgp/classic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bgp {

namespace {

constexpr double kNoiseVarFloor = 1e-12;

/// Index whose locally-optimal update most increases the joint objective.
/// The metric baselines differ per coordinate: an active atom currently pays
/// eps x_hat_i^2 plus its support penalty, so those terms are added back to
/// compare true improvements. Lowest index wins on ties (strict > scan).
int argmax_gain(const std::vector<AtomDecision>& decisions,
                const PursuitState& state, const ModelParams& params) {
  int best = 0;
  double best_key = 0.0;
  for (int i = 0; i < static_cast<int>(decisions.size()); ++i) {
    const auto u = static_cast<std::size_t>(i);
    double key = decisions[u].rho_at_decision;
    if (state.s_hat[u]) {
      key += params.eps() * state.x_hat[i] * state.x_hat[i] +
             support_penalty(params, i);
    }
    if (i == 0 || key > best_key) {
      best = i;
      best_key = key;
    }
  }
  return best;
}

/// Indices sorted by key descending, index ascending on ties.
std::vector<int> sorted_by_key_desc(const std::vector<int>& indices,
                                    const std::vector<double>& keys) {
  std::vector<int> order = indices;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return keys[static_cast<std::size_t>(a)] > keys[static_cast<std::size_t>(b)];
  });
  return order;
}

}  // namespace

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kMaxIter: return "max_iter";
    case StopReason::kResidualFloor: return "residual_floor";
    case StopReason::kObjectiveTol: return "objective_tol";
    case StopReason::kFixedPoint: return "fixed_point";
    case StopReason::kSupportCycle: return "support_cycle";
    case StopReason::kNoSelection: return "no_selection";
    case StopReason::kResidualGrowth: return "residual_growth";
  }
  return "unknown";
}

Vec refit_on_support(const Dictionary& dict, const SupportMask& s,
                     const Vec& y, const ModelParams& params) {
  // eps = 0 under the infinite sentinel: plain least squares with a rank
  // check, which coincides with the pseudo-inverse on full-rank supports.
  return ridge_solve_on_support(dict, s, y, params.eps());
}

PursuitState bmp_step(const PursuitState& state, const Dictionary& dict,
                      const ModelParams& params) {
  const auto decisions = atom_decisions(dict, params, state);
  const int j = argmax_gain(decisions, state, params);
  PursuitState next = state;
  next.s_hat[static_cast<std::size_t>(j)] = decisions[static_cast<std::size_t>(j)].s_tilde;
  next.x_hat[j] = decisions[static_cast<std::size_t>(j)].x_tilde;
  next.refresh_residual(dict, state.r + dict.data() * state.x_hat);
  next.n = state.n + 1;
  return next;
}

PursuitState bomp_step(const PursuitState& state, const Dictionary& dict,
                       const ModelParams& params) {
  const auto decisions = atom_decisions(dict, params, state);
  const int j = argmax_gain(decisions, state, params);
  const Vec y = state.r + dict.data() * state.x_hat;
  PursuitState next = state;
  next.s_hat[static_cast<std::size_t>(j)] = decisions[static_cast<std::size_t>(j)].s_tilde;
  next.x_hat = refit_on_support(dict, next.s_hat, y, params);
  next.refresh_residual(dict, y);
  next.n = state.n + 1;
  return next;
}

PursuitState bstomp_step(const PursuitState& state, const Dictionary& dict,
                         const ModelParams& params) {
  const auto decisions = atom_decisions(dict, params, state);
  const Vec y = state.r + dict.data() * state.x_hat;
  PursuitState next = state;
  for (std::size_t i = 0; i < next.s_hat.size(); ++i) {
    next.s_hat[i] = decisions[i].s_tilde;
  }
  next.x_hat = refit_on_support(dict, next.s_hat, y, params);
  next.refresh_residual(dict, y);
  next.n = state.n + 1;
  return next;
}

SupportMask bsp_support_update_p(const std::vector<AtomDecision>& decisions,
                                 const SupportMask& s_hat, int p_flips) {
  std::vector<int> candidates;
  std::vector<double> gains(decisions.size(), 0.0);
  for (int i = 0; i < static_cast<int>(decisions.size()); ++i) {
    const auto& d = decisions[static_cast<std::size_t>(i)];
    if (d.s_tilde != s_hat[static_cast<std::size_t>(i)]) {
      candidates.push_back(i);
      gains[static_cast<std::size_t>(i)] = bsp_gain(d);
    }
  }
  const auto order = sorted_by_key_desc(candidates, gains);
  SupportMask s = s_hat;
  const int flips = std::min<int>(p_flips, static_cast<int>(order.size()));
  for (int k = 0; k < flips; ++k) {
    const int i = order[static_cast<std::size_t>(k)];
    s[static_cast<std::size_t>(i)] = decisions[static_cast<std::size_t>(i)].s_tilde;
  }
  return s;
}

SupportMask bsp_support_update_k(const std::vector<AtomDecision>& decisions,
                                 int k_target) {
  SupportMask s(decisions.size());
  std::vector<double> advantage(decisions.size());
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    s[i] = decisions[i].s_tilde;
    advantage[i] = decisions[i].rho_s1 - decisions[i].rho_s0;
  }
  int active = support_size(s);
  if (active > k_target) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(s.size()); ++i) {
      if (s[static_cast<std::size_t>(i)]) idx.push_back(i);
    }
    // Deselect the active atoms losing the least.
    auto order = sorted_by_key_desc(idx, advantage);
    for (int k = 0; k < active - k_target; ++k) {
      s[static_cast<std::size_t>(order[order.size() - 1 - k])] = 0;
    }
  } else if (active < k_target) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(s.size()); ++i) {
      if (!s[static_cast<std::size_t>(i)]) idx.push_back(i);
    }
    auto order = sorted_by_key_desc(idx, advantage);
    for (int k = 0; k < k_target - active; ++k) {
      s[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;
    }
  }
  return s;
}

SupportMask bsp_support_update_p_forward(
    const std::vector<AtomDecision>& decisions, const SupportMask& s_hat,
    int p_flips) {
  std::vector<int> inactive;
  std::vector<double> advantage(decisions.size());
  for (int i = 0; i < static_cast<int>(decisions.size()); ++i) {
    advantage[static_cast<std::size_t>(i)] =
        decisions[static_cast<std::size_t>(i)].rho_s1 -
        decisions[static_cast<std::size_t>(i)].rho_s0;
    if (!s_hat[static_cast<std::size_t>(i)]) inactive.push_back(i);
  }
  const auto order = sorted_by_key_desc(inactive, advantage);
  SupportMask s = s_hat;
  const int adds = std::min<int>(p_flips, static_cast<int>(order.size()));
  for (int k = 0; k < adds; ++k) {
    s[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;
  }
  return s;
}

SupportMask bsp_support_update_k_forward(
    const std::vector<AtomDecision>& decisions, const SupportMask& s_half,
    int k_target) {
  std::vector<int> active;
  std::vector<double> advantage(decisions.size());
  for (int i = 0; i < static_cast<int>(decisions.size()); ++i) {
    advantage[static_cast<std::size_t>(i)] =
        decisions[static_cast<std::size_t>(i)].rho_s1 -
        decisions[static_cast<std::size_t>(i)].rho_s0;
    if (s_half[static_cast<std::size_t>(i)]) active.push_back(i);
  }
  const auto order = sorted_by_key_desc(active, advantage);
  SupportMask s(decisions.size(), 0);
  const int keeps = std::min<int>(k_target, static_cast<int>(order.size()));
  for (int k = 0; k < keeps; ++k) {
    s[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;
  }
  return s;
}

PursuitState bsp_step(const PursuitState& state, const Dictionary& dict,
                      const ModelParams& params, int p_flips, int k_target,
                      bool forward_only) {
  if (p_flips < 1) throw std::invalid_argument("bsp_step: P must be >= 1");
  const Vec y = state.r + dict.data() * state.x_hat;

  const auto decisions = atom_decisions(dict, params, state);
  PursuitState half = state;
  half.s_hat = forward_only
                   ? bsp_support_update_p_forward(decisions, state.s_hat, p_flips)
                   : bsp_support_update_p(decisions, state.s_hat, p_flips);
  half.x_hat = refit_on_support(dict, half.s_hat, y, params);
  half.refresh_residual(dict, y);

  // Decisions for the second half-step are recomputed at the refit state.
  const auto half_decisions = atom_decisions(dict, params, half);
  PursuitState next = half;
  next.s_hat = forward_only
                   ? bsp_support_update_k_forward(half_decisions, half.s_hat,
                                                  k_target)
                   : bsp_support_update_k(half_decisions, k_target);
  next.x_hat = refit_on_support(dict, next.s_hat, y, params);
  next.refresh_residual(dict, y);
  next.n = state.n + 1;
  return next;
}

bool is_bayesian_algorithm(std::string_view id) {
  return id == "bmp" || id == "bomp" || id == "bstomp" || id == "bsp";
}

bool is_known_algorithm(std::string_view id) {
  return is_bayesian_algorithm(id) || id == "mp" || id == "omp" ||
         id == "stomp" || id == "sp";
}

StopRule default_stop_rule(std::string_view algorithm_id, int n_rows,
                           int n_cols, double sigma2_w) {
  StopRule stop;
  stop.max_iter = 4 * n_cols;
  if (algorithm_id == "mp" || algorithm_id == "omp" ||
      algorithm_id == "stomp") {
    stop.residual_floor = std::sqrt(n_rows * sigma2_w);
    stop.fixed_point = false;
  } else if (algorithm_id == "sp") {
    stop.fixed_point = true;
  } else if (algorithm_id == "bmp" || algorithm_id == "bomp") {
    // Same residual floor as the classic counterparts, so that comparisons
    // run under one protocol; the fixed point covers noise-free inputs.
    stop.residual_floor = std::sqrt(n_rows * sigma2_w);
    stop.fixed_point = true;
    stop.objective_tol = 1e-10;
  } else if (algorithm_id == "bstomp") {
    stop.residual_floor = std::sqrt(n_rows * sigma2_w);
    stop.fixed_point = true;
    stop.cycle_detect = true;
  } else {  // bsp
    stop.fixed_point = true;
    stop.cycle_detect = true;
  }
  return stop;
}

AlgoReport run(std::string_view algorithm_id, const Dictionary& dict,
               const Vec& y, const ModelParams& params, const StopRule& stop,
               const PursuitOptions& options) {
  if (!is_known_algorithm(algorithm_id)) {
    throw std::invalid_argument("unknown algorithm id: " +
                                std::string(algorithm_id));
  }
  params.validate(dict.cols());
  if (y.size() != dict.rows()) {
    throw std::invalid_argument("observation length does not match dictionary");
  }
  const bool needs_k = algorithm_id == "bsp" || algorithm_id == "sp";
  if (needs_k && options.k_target < 1) {
    throw std::invalid_argument(std::string(algorithm_id) +
                                " requires a positive K");
  }
  const int p_flips =
      options.p_flips > 0 ? options.p_flips : options.k_target;

  ModelParams local = params;
  AlgoReport report;
  report.state = PursuitState::zero(dict, y);
  report.state.objective = log_joint_from_residual(
      local, report.state.r.squaredNorm(), report.state.x_hat,
      report.state.s_hat, dict.rows());

  const int max_iter = algorithm_id == "stomp"
                           ? std::min(stop.max_iter, options.stomp_stages)
                           : stop.max_iter;
  SupportMask prev_support = report.state.s_hat;
  SupportMask prev2_support;
  bool have_prev2 = false;
  report.reason = StopReason::kMaxIter;

  for (int iter = 0; iter < max_iter; ++iter) {
    if (stop.residual_floor > 0.0 &&
        report.state.r.norm() <= stop.residual_floor) {
      report.reason = StopReason::kResidualFloor;
      break;
    }
    if (options.adaptive_noise) {
      local.sigma2_w = std::max(
          report.state.r.squaredNorm() / dict.rows(), kNoiseVarFloor);
    }

    PursuitState next;
    bool selected_any = true;
    if (algorithm_id == "bmp") {
      next = bmp_step(report.state, dict, local);
    } else if (algorithm_id == "bomp") {
      next = bomp_step(report.state, dict, local);
    } else if (algorithm_id == "bstomp") {
      next = bstomp_step(report.state, dict, local);
    } else if (algorithm_id == "bsp") {
      next = bsp_step(report.state, dict, local, p_flips, options.k_target,
                      options.forward_only_bsp);
    } else if (algorithm_id == "mp") {
      next = mp_step(report.state, dict);
    } else if (algorithm_id == "omp") {
      next = omp_step(report.state, dict);
    } else if (algorithm_id == "stomp") {
      next = stomp_step(report.state, dict, options.t_cfar, &selected_any);
    } else {  // sp
      next = sp_step(report.state, dict, options.k_target);
    }

    if (algorithm_id == "stomp" && !selected_any) {
      report.reason = StopReason::kNoSelection;
      break;
    }
    if (algorithm_id == "sp" && report.iterations > 0 &&
        next.r.norm() >= report.state.r.norm()) {
      // Keep the previous (better) state, as the standard subspace rule does.
      report.reason = StopReason::kResidualGrowth;
      break;
    }

    next.objective = log_joint_from_residual(local, next.r.squaredNorm(),
                                             next.x_hat, next.s_hat,
                                             dict.rows());
    const double previous_objective = report.state.objective;
    const bool unchanged = next.s_hat == report.state.s_hat &&
                           next.x_hat == report.state.x_hat;
    report.state = next;
    ++report.iterations;
    report.objective_trace.push_back(next.objective);

    if (stop.fixed_point && unchanged) {
      report.reason = StopReason::kFixedPoint;
      break;
    }
    if (stop.objective_tol >= 0.0 && report.iterations > 1 &&
        next.objective - previous_objective < stop.objective_tol) {
      report.reason = StopReason::kObjectiveTol;
      break;
    }
    if (stop.cycle_detect && have_prev2 && next.s_hat == prev2_support) {
      report.reason = StopReason::kSupportCycle;
      break;
    }
    prev2_support = prev_support;
    have_prev2 = true;
    prev_support = next.s_hat;
  }
  return report;
}

}  // namespace bgp
