// Compares the serial and OpenMP paths of the per-atom decision sweep and a
// small Monte-Carlo batch, and checks that both produce identical results.

#include "bgp/experiments.hpp"
#include "bgp/metrics.hpp"
#include "bgp/rng.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void bench_decisions(int n, int m, int reps) {
  const auto dict = bgp::Dictionary::gaussian(n, m, 7);
  const auto params = bgp::ModelParams::uniform(1e-4, 1.0, m, 0.1);
  const auto truth = bgp::generate_trial(dict, params, n / 4, 11);
  const auto state = bgp::PursuitState::zero(dict, truth.y);

  auto start = std::chrono::steady_clock::now();
  std::vector<bgp::AtomDecision> serial;
  for (int r = 0; r < reps; ++r) {
    serial = bgp::atom_decisions(dict, params, state, false);
  }
  const double t_serial = seconds_since(start);

  start = std::chrono::steady_clock::now();
  std::vector<bgp::AtomDecision> parallel;
  for (int r = 0; r < reps; ++r) {
    parallel = bgp::atom_decisions(dict, params, state, true);
  }
  const double t_parallel = seconds_since(start);

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i) {
    identical = serial[i].x_tilde == parallel[i].x_tilde &&
                serial[i].s_tilde == parallel[i].s_tilde &&
                serial[i].rho_at_decision == parallel[i].rho_at_decision;
  }
  std::printf("atom_decisions %dx%d x%d: serial %.3fs, parallel %.3fs "
              "(speedup %.2fx, identical=%s)\n",
              n, m, reps, t_serial, t_parallel, t_serial / t_parallel,
              identical ? "yes" : "NO");
}

void bench_sweep(int workers) {
  bgp::ExperimentConfig config;
  config.n_rows = 64;
  config.n_cols = 128;
  config.k_grid = {12};
  config.trials = 40;
  config.algorithms = {bgp::AlgoSpec::parse("bomp"),
                       bgp::AlgoSpec::parse("bstomp")};
  config.workers = workers;
  config.deterministic_output = true;

  const auto start = std::chrono::steady_clock::now();
  const auto rows = bgp::run_sweep(config);
  const double elapsed = seconds_since(start);
  std::printf("sweep (%d workers): %.3fs", workers, elapsed);
  for (const auto& row : rows) {
    std::printf("  [%s pe=%.4f]", row.algorithm.c_str(), row.pe);
  }
  std::printf("\n");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; parallel path runs serially\n");
#endif
  bench_decisions(256, 4096, 2000);
  bench_decisions(512, 16384, 200);
  bench_sweep(1);
#ifdef _OPENMP
  bench_sweep(omp_get_max_threads());
#endif
  return 0;
}
