#include "bgp/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace bgp {

namespace {

constexpr double kObjectiveTol = 1e-9;
constexpr double kL0ZeroTol = 1e-9;

SupportMask mask_from_bits(std::uint32_t bits, int m) {
  SupportMask s(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    if (bits & (1u << i)) s[static_cast<std::size_t>(i)] = 1;
  }
  return s;
}

void check_enumerable(const Dictionary& dict) {
  if (dict.cols() > kMaxEnumerationCols) {
    throw std::invalid_argument(
        "exhaustive search limited to " +
        std::to_string(kMaxEnumerationCols) + " columns, got " +
        std::to_string(dict.cols()));
  }
}

bool coef_close(const Vec& a, const Vec& b, double tol) {
  return (a - b).lpNorm<Eigen::Infinity>() <= tol;
}

void insert_optimum(SolutionSet& set, const SupportMask& s, const Vec& x,
                    double tol) {
  for (const Vec& existing : set.coefs) {
    if (coef_close(existing, x, tol)) return;
  }
  set.supports.push_back(s);
  set.coefs.push_back(x);
}

/// Generic exhaustive sweep. `evaluate` returns (fitted x, value to
/// minimize); optima within a relative tolerance of the best are kept and
/// deduplicated by coefficient vector.
template <typename Eval>
SolutionSet enumerate_supports(const Dictionary& dict, const Vec& y,
                               Eval evaluate) {
  check_enumerable(dict);
  const int m = dict.cols();
  const std::uint32_t total = 1u << m;
  const double coef_tol = kObjectiveTol * (1.0 + y.norm());

  // Two passes keep memory flat for the larger enumerable sizes.
  double best = 0.0;
  for (std::uint32_t bits = 0; bits < total; ++bits) {
    auto [x, value] = evaluate(mask_from_bits(bits, m));
    if (bits == 0 || value < best) best = value;
  }

  SolutionSet set;
  set.objective_value = best;
  const double keep = best + kObjectiveTol * (1.0 + std::abs(best));
  for (std::uint32_t bits = 0; bits < total; ++bits) {
    const SupportMask s = mask_from_bits(bits, m);
    auto [x, value] = evaluate(s);
    if (value <= keep) insert_optimum(set, s, x, coef_tol);
  }
  return set;
}

}  // namespace

SolutionSet solve_l0(const Dictionary& dict, const Vec& y, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  SolutionSet set = enumerate_supports(dict, y, [&](const SupportMask& s) {
    Vec x = lsq_pinv_on_support(dict, s, y);
    const double scale = x.norm();
    int l0 = 0;
    for (int i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) > kL0ZeroTol * scale) {
        ++l0;
      } else {
        x[i] = 0.0;
      }
    }
    const double value = residual(dict, x, y).squaredNorm() + lambda * l0;
    return std::make_pair(std::move(x), value);
  });
  return set;
}

SolutionSet solve_bg_map(const Dictionary& dict, const Vec& y,
                         const ModelParams& params) {
  params.validate(dict.cols());
  SolutionSet set = enumerate_supports(dict, y, [&](const SupportMask& s) {
    Vec x = ridge_solve_on_support(dict, s, y, params.eps());
    const double value = log_joint(dict, params, x, s, y);
    return std::make_pair(std::move(x), -value);
  });
  set.objective_value = -set.objective_value;
  return set;
}

Theorem1Report verify_theorem1(const Dictionary& dict, const Vec& y, double p,
                               double sigma2_w, double sigma2_x_large) {
  Theorem1Report report;
  report.lambda_used = 2.0 * sigma2_w * std::log((1.0 - p) / p);
  report.l0_set = solve_l0(dict, y, report.lambda_used);
  report.map_set = solve_bg_map(
      dict, y,
      ModelParams::uniform(sigma2_w, sigma2_x_large, dict.cols(), p));

  const double tol = 1e-5 * (1.0 + y.norm());
  auto covered = [&](const std::vector<Vec>& lhs,
                     const std::vector<Vec>& rhs) {
    for (const Vec& a : lhs) {
      bool found = false;
      for (const Vec& b : rhs) {
        if ((a - b).lpNorm<Eigen::Infinity>() <= tol) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  report.match = covered(report.l0_set.coefs, report.map_set.coefs) &&
                 covered(report.map_set.coefs, report.l0_set.coefs);
  return report;
}

}  // namespace bgp
