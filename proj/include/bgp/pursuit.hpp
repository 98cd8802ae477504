#pragma once

#include "bgp/metrics.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bgp {

enum class StopReason {
  kMaxIter,
  kResidualFloor,
  kObjectiveTol,
  kFixedPoint,
  kSupportCycle,
  kNoSelection,     // stagewise threshold passed by no atom
  kResidualGrowth,  // subspace-style rule: ||r|| stopped decreasing
};

std::string to_string(StopReason reason);

struct StopRule {
  int max_iter = 1;
  double residual_floor = 0.0;   // stop when ||r|| <= floor
  double objective_tol = -1.0;   // <0 disables; ascent algorithms only
  bool fixed_point = true;       // stop when (x_hat, s_hat) unchanged
  bool cycle_detect = false;     // stop when a recent support repeats
};

struct AlgoReport {
  PursuitState state;
  int iterations = 0;
  StopReason reason = StopReason::kMaxIter;
  std::vector<double> objective_trace;  // one entry per iteration
};

struct PursuitOptions {
  bool adaptive_noise = false;  // sigma2_w := ||r||^2 / N each iteration
  int p_flips = 0;              // BSP P; 0 means P = K
  int k_target = 0;             // BSP/SP K
  double t_cfar = 2.5;          // StOMP stage threshold multiplier
  int stomp_stages = 10;
  bool forward_only_bsp = false;  // test-only variant matching classic SP sets
};

// One iteration of each Bayesian algorithm. All argmax ties resolve to the
// lowest index.
PursuitState bmp_step(const PursuitState& state, const Dictionary& dict,
                      const ModelParams& params);
PursuitState bomp_step(const PursuitState& state, const Dictionary& dict,
                       const ModelParams& params);
PursuitState bstomp_step(const PursuitState& state, const Dictionary& dict,
                         const ModelParams& params);
PursuitState bsp_step(const PursuitState& state, const Dictionary& dict,
                      const ModelParams& params, int p_flips, int k_target,
                      bool forward_only = false);

// Support updates behind bsp_step, exposed for direct testing. Decisions
// must have been computed against the state that defines s_hat.
SupportMask bsp_support_update_p(const std::vector<AtomDecision>& decisions,
                                 const SupportMask& s_hat, int p_flips);
SupportMask bsp_support_update_k(const std::vector<AtomDecision>& decisions,
                                 int k_target);
SupportMask bsp_support_update_p_forward(
    const std::vector<AtomDecision>& decisions, const SupportMask& s_hat,
    int p_flips);
SupportMask bsp_support_update_k_forward(
    const std::vector<AtomDecision>& decisions, const SupportMask& s_half,
    int k_target);

/// Coefficient refit on a fixed support: ridge when eps > 0, minimum-norm
/// least squares under the infinite sigma2_x sentinel.
Vec refit_on_support(const Dictionary& dict, const SupportMask& s,
                     const Vec& y, const ModelParams& params);

bool is_bayesian_algorithm(std::string_view id);
bool is_known_algorithm(std::string_view id);

/// Runs "bmp" | "bomp" | "bstomp" | "bsp" | "mp" | "omp" | "stomp" | "sp"
/// until the stop rule fires. With adaptive_noise, params.sigma2_w is
/// replaced per-iteration by ||r||^2 / N (floored at 1e-12).
AlgoReport run(std::string_view algorithm_id, const Dictionary& dict,
               const Vec& y, const ModelParams& params, const StopRule& stop,
               const PursuitOptions& options = {});

/// Defaults: ascent algorithms stop on fixed point or objective_tol 1e-10;
/// BStOMP/BSP add support-cycle detection; MP/OMP/StOMP stop when ||r||
/// drops below sqrt(N sigma2_w). max_iter = 4 M throughout.
StopRule default_stop_rule(std::string_view algorithm_id, int n_rows,
                           int n_cols, double sigma2_w);

}  // namespace bgp
