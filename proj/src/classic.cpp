#include "bgp/classic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bgp {

namespace {

int argmax_correlation(const Vec& c) {
  int best = 0;
  for (int i = 1; i < c.size(); ++i) {
    if (c[i] * c[i] > c[best] * c[best]) best = i;
  }
  return best;
}

Vec rank_checked_lsq(const Dictionary& dict, const SupportMask& s,
                     const Vec& y) {
  return ridge_solve_on_support(dict, s, y, 0.0);
}

}  // namespace

PursuitState mp_step(const PursuitState& state, const Dictionary& dict) {
  const Vec c = correlate_all(dict, state.r);
  const int j = argmax_correlation(c);
  PursuitState next = state;
  next.x_hat[j] += c[j];
  next.s_hat[static_cast<std::size_t>(j)] = next.x_hat[j] != 0.0 ? 1 : 0;
  next.r = state.r - c[j] * dict.data().col(j);
  next.n = state.n + 1;
  return next;
}

PursuitState omp_step(const PursuitState& state, const Dictionary& dict) {
  const Vec c = correlate_all(dict, state.r);
  const int j = argmax_correlation(c);
  const Vec y = state.r + dict.data() * state.x_hat;
  PursuitState next = state;
  next.s_hat[static_cast<std::size_t>(j)] = 1;
  next.x_hat = rank_checked_lsq(dict, next.s_hat, y);
  next.refresh_residual(dict, y);
  next.n = state.n + 1;
  return next;
}

PursuitState stomp_step(const PursuitState& state, const Dictionary& dict,
                        double t_cfar, bool* selected_any) {
  if (!(t_cfar > 0.0)) {
    throw std::invalid_argument("stomp threshold multiplier must be positive");
  }
  const Vec c = correlate_all(dict, state.r);
  const double gate = t_cfar * state.r.norm() / std::sqrt(dict.rows());
  PursuitState next = state;
  bool added = false;
  for (int i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) > gate && !next.s_hat[static_cast<std::size_t>(i)]) {
      next.s_hat[static_cast<std::size_t>(i)] = 1;
      added = true;
    }
  }
  if (selected_any) *selected_any = added;
  if (!added) return state;
  const Vec y = state.r + dict.data() * state.x_hat;
  next.x_hat = lsq_pinv_on_support(dict, next.s_hat, y);
  next.refresh_residual(dict, y);
  next.n = state.n + 1;
  return next;
}

PursuitState sp_step(const PursuitState& state, const Dictionary& dict, int k) {
  if (k < 1 || k > dict.rows()) {
    throw std::invalid_argument("subspace size K must lie in [1, N]");
  }
  const Vec y = state.r + dict.data() * state.x_hat;
  const Vec c = correlate_all(dict, state.r);

  // Merge: current support plus the K strongest atoms by residual
  // correlation, lowest index first on ties.
  std::vector<int> order(static_cast<std::size_t>(dict.cols()));
  for (int i = 0; i < dict.cols(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return c[a] * c[a] > c[b] * c[b];
  });
  SupportMask merged = state.s_hat;
  for (int r = 0; r < k; ++r) merged[static_cast<std::size_t>(order[r])] = 1;

  const Vec merged_fit = rank_checked_lsq(dict, merged, y);

  // Prune to the K largest coefficients in magnitude.
  std::vector<int> active;
  for (int i = 0; i < dict.cols(); ++i) {
    if (merged[static_cast<std::size_t>(i)]) active.push_back(i);
  }
  std::stable_sort(active.begin(), active.end(), [&](int a, int b) {
    return std::abs(merged_fit[a]) > std::abs(merged_fit[b]);
  });
  PursuitState next = state;
  next.s_hat.assign(static_cast<std::size_t>(dict.cols()), 0);
  for (int r = 0; r < std::min<int>(k, static_cast<int>(active.size())); ++r) {
    next.s_hat[static_cast<std::size_t>(active[r])] = 1;
  }
  next.x_hat = rank_checked_lsq(dict, next.s_hat, y);
  next.refresh_residual(dict, y);
  next.n = state.n + 1;
  return next;
}

}  // namespace bgp
