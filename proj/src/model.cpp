#include "bgp/model.hpp"

#include "bgp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bgp {

namespace {

double clamp_prob(double p) {
  return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

double beta_draw(std::mt19937_64& rng, double alpha, double beta) {
  std::gamma_distribution<double> ga(alpha, 1.0);
  std::gamma_distribution<double> gb(beta, 1.0);
  const double a = ga(rng);
  const double b = gb(rng);
  return a / (a + b);
}

}  // namespace

ModelParams ModelParams::uniform(double sigma2_w, double sigma2_x, int m,
                                 double prob) {
  ModelParams params;
  params.sigma2_w = sigma2_w;
  params.sigma2_x = sigma2_x;
  params.p.assign(static_cast<std::size_t>(m), clamp_prob(prob));
  return params;
}

void ModelParams::validate(int m) const {
  if (!(sigma2_w > 0.0)) {
    throw std::invalid_argument("sigma2_w must be positive");
  }
  if (!(sigma2_x > 0.0)) {
    throw std::invalid_argument("sigma2_x must be positive");
  }
  if (static_cast<int>(p.size()) != m) {
    throw std::invalid_argument("occurrence probabilities have length " +
                                std::to_string(p.size()) + ", expected " +
                                std::to_string(m));
  }
  for (double pi : p) {
    if (!(pi > 0.0 && pi < 1.0)) {
      throw std::invalid_argument("occurrence probabilities must lie in (0,1)");
    }
  }
}

GroundTruth generate_trial(const Dictionary& dict, const ModelParams& params,
                           int k, std::uint64_t seed) {
  const int m = dict.cols();
  const int n = dict.rows();
  if (k < 0 || k > m) {
    throw std::invalid_argument("sparsity level " + std::to_string(k) +
                                " outside [0, " + std::to_string(m) + "]");
  }
  auto rng = stream_rng(seed, 1);

  // Uniform random K-subset via partial Fisher-Yates.
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, m - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }

  GroundTruth truth;
  truth.s.assign(static_cast<std::size_t>(m), 0);
  truth.x = Vec::Zero(m);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double coef_sd =
      params.infinite_x() ? 1.0 : std::sqrt(params.sigma2_x);
  for (int i = 0; i < k; ++i) {
    truth.s[perm[i]] = 1;
    truth.x[perm[i]] = coef_sd * normal(rng);
  }
  truth.y = dict.data() * truth.x;
  if (params.sigma2_w > 0.0) {
    const double noise_sd = std::sqrt(params.sigma2_w);
    for (int i = 0; i < n; ++i) truth.y[i] += noise_sd * normal(rng);
  }
  return truth;
}

std::vector<double> beta_priors(int m, double alpha, double beta,
                                std::uint64_t seed) {
  if (!(alpha > 0.0 && beta > 0.0)) {
    throw std::invalid_argument("beta parameters must be positive");
  }
  auto rng = stream_rng(seed, 2);
  std::vector<double> p(static_cast<std::size_t>(m));
  for (auto& pi : p) pi = clamp_prob(beta_draw(rng, alpha, beta));
  return p;
}

std::vector<double> posterior_prior_draw(const SupportMask& s, double alpha,
                                         double beta, std::uint64_t seed) {
  if (!(alpha > 0.0 && beta > 0.0)) {
    throw std::invalid_argument("beta parameters must be positive");
  }
  auto rng = stream_rng(seed, 3);
  std::vector<double> p(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = alpha + (s[i] ? 1.0 : 0.0);
    const double b = beta + (s[i] ? 0.0 : 1.0);
    p[i] = clamp_prob(beta_draw(rng, a, b));
  }
  return p;
}

std::vector<double> perturb_priors(const std::vector<double>& p, double delta_p,
                                   std::uint64_t seed) {
  if (delta_p < 0.0 || delta_p > 1.0) {
    throw std::invalid_argument("delta_p must lie in [0, 1]");
  }
  auto rng = stream_rng(seed, 4);
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double lo = std::max(0.0, p[i] - delta_p);
    const double hi = std::min(1.0, p[i] + delta_p);
    std::uniform_real_distribution<double> uniform(lo, hi);
    out[i] = clamp_prob(uniform(rng));
  }
  return out;
}

double log_joint_from_residual(const ModelParams& params, double resid_norm2,
                               const Vec& x, const SupportMask& s,
                               int n_rows) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double value = -resid_norm2 / (2.0 * params.sigma2_w) -
                 0.5 * n_rows * std::log(two_pi * params.sigma2_w);
  if (!params.infinite_x()) {
    value += -x.squaredNorm() / (2.0 * params.sigma2_x) -
             0.5 * static_cast<double>(x.size()) *
                 std::log(two_pi * params.sigma2_x);
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    value += s[i] ? std::log(params.p[i]) : std::log(1.0 - params.p[i]);
  }
  return value;
}

double log_joint(const Dictionary& dict, const ModelParams& params,
                 const Vec& x, const SupportMask& s, const Vec& y) {
  Vec effective = x;
  for (int i = 0; i < effective.size(); ++i) {
    if (!s[static_cast<std::size_t>(i)]) effective[i] = 0.0;
  }
  const double resid_norm2 = residual(dict, effective, y).squaredNorm();
  return log_joint_from_residual(params, resid_norm2, x, s, dict.rows());
}

}  // namespace bgp
