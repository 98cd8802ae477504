#pragma once

#include "bgp/pursuit.hpp"

namespace bgp {

// Classic pursuit baselines. They share PursuitState with the Bayesian
// algorithms and use the same lowest-index tie-breaking, which the
// limit-equivalence tests rely on.

/// j = argmax <r, d_i>^2; x_hat_j += <r, d_j>.
PursuitState mp_step(const PursuitState& state, const Dictionary& dict);

/// Correlation argmax, s_j = 1, then minimum-norm least-squares refit.
/// Throws on a rank-deficient selected subdictionary.
PursuitState omp_step(const PursuitState& state, const Dictionary& dict);

/// Adds every atom with <r, d_i>^2 > (t_cfar ||r|| / sqrt(N))^2, never
/// removes any, then refits. Sets `selected_any` false when no atom passes.
PursuitState stomp_step(const PursuitState& state, const Dictionary& dict,
                        double t_cfar, bool* selected_any);

/// Subspace step: add the K best new atoms by correlation energy, refit,
/// keep the K largest |coefficient|, refit.
PursuitState sp_step(const PursuitState& state, const Dictionary& dict, int k);

}  // namespace bgp
