#pragma once

#include "bgp/linalg.hpp"
#include "bgp/model.hpp"

#include <vector>

namespace bgp {

/// All optimizers of a combinatorial problem over supports. Coefficient
/// vectors are deduplicated; every member achieves the optimum within 1e-9.
struct SolutionSet {
  std::vector<SupportMask> supports;
  std::vector<Vec> coefs;
  double objective_value = 0.0;
};

inline constexpr int kMaxEnumerationCols = 20;

/// Exhaustive minimization of ||y - D x||^2 + lambda ||x||_0 over all 2^M
/// supports (x fixed to the minimum-norm least-squares fit per support).
/// The l0 count uses the fitted vector, not the mask: entries with
/// |x_i| <= 1e-9 ||x|| count as zero. Throws if M > 20.
SolutionSet solve_l0(const Dictionary& dict, const Vec& y, double lambda);

/// Exhaustive maximization of log p(y, x, s) with the per-support ridge
/// maximizer. Throws if M > 20.
SolutionSet solve_bg_map(const Dictionary& dict, const Vec& y,
                         const ModelParams& params);

struct Theorem1Report {
  bool match = false;
  SolutionSet l0_set;
  SolutionSet map_set;
  double lambda_used = 0.0;
};

/// Compares the l0 solution set at lambda = 2 sigma2_w log((1-p)/p) with the
/// BG MAP solution set at a large finite sigma2_x. Sets are equal when their
/// coefficient vectors match pairwise within 1e-5 (1 + ||y||).
Theorem1Report verify_theorem1(const Dictionary& dict, const Vec& y, double p,
                               double sigma2_w, double sigma2_x_large);

}  // namespace bgp
