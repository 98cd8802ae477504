#pragma once

#include "bgp/linalg.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace bgp {

/// Occurrence probabilities are clamped to [kProbClamp, 1 - kProbClamp] so
/// log((1-p)/p) stays finite.
inline constexpr double kProbClamp = 1e-6;

/// Bernoulli-Gaussian model parameters. sigma2_x may be +inf, meaning a
/// non-informative coefficient prior: the shrinkage factor becomes exactly 1
/// and the ridge weight exactly 0 (no huge-float arithmetic).
struct ModelParams {
  double sigma2_w = 1e-4;
  double sigma2_x = 1.0;
  std::vector<double> p;

  static constexpr double infinite_sigma2_x() {
    return std::numeric_limits<double>::infinity();
  }
  bool infinite_x() const { return std::isinf(sigma2_x); }

  /// sigma2_w / sigma2_x (ridge weight); 0 under the infinite sentinel.
  double eps() const { return infinite_x() ? 0.0 : sigma2_w / sigma2_x; }

  /// sigma2_x / (sigma2_x + sigma2_w); 1 under the infinite sentinel.
  double shrink() const {
    return infinite_x() ? 1.0 : sigma2_x / (sigma2_x + sigma2_w);
  }

  double log_odds(int i) const { return std::log((1.0 - p[i]) / p[i]); }

  /// Uniform occurrence probability, clamped.
  static ModelParams uniform(double sigma2_w, double sigma2_x, int m,
                             double prob);

  void validate(int m) const;  // throws std::invalid_argument
};

struct GroundTruth {
  SupportMask s;
  Vec x;  // x_i = 0 wherever s_i = 0
  Vec y;
};

/// Support: uniform random K-subset. Nonzeros i.i.d. N(0, sigma2_x), noise
/// i.i.d. N(0, sigma2_w). sigma2_w = 0 is permitted here (noise-free data).
GroundTruth generate_trial(const Dictionary& dict, const ModelParams& params,
                           int k, std::uint64_t seed);

/// M independent draws from Beta(alpha, beta), clamped.
std::vector<double> beta_priors(int m, double alpha, double beta,
                                std::uint64_t seed);

/// Per-coordinate draw from the posterior Beta(alpha + s_i, beta + 1 - s_i).
std::vector<double> posterior_prior_draw(const SupportMask& s, double alpha,
                                         double beta, std::uint64_t seed);

/// p_hat_i uniform on [max(0, p_i - delta_p), min(1, p_i + delta_p)], clamped.
std::vector<double> perturb_priors(const std::vector<double>& p, double delta_p,
                                   std::uint64_t seed);

/// log p(y, x, s) including the Gaussian normalization constants, so values
/// are comparable across supports (not across params). Under the infinite
/// sigma2_x sentinel the coefficient-prior term and its constant are dropped.
double log_joint(const Dictionary& dict, const ModelParams& params,
                 const Vec& x, const SupportMask& s, const Vec& y);

/// Same, but reusing a precomputed residual norm^2 (O(M) instead of O(NM)).
double log_joint_from_residual(const ModelParams& params, double resid_norm2,
                               const Vec& x, const SupportMask& s, int n_rows);

}  // namespace bgp
