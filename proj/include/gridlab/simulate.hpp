// Environment sampling and strategy execution over n independent trials,
// with empirical-measure convergence checks.
//
// Reproducibility contract: every trial draws from its own deterministic
// substream derived from (seed, trial index), so results are identical
// regardless of worker count or execution order. The choice randomness of
// a run is domain-separated from the environment labels, so reusing one
// seed for both cannot correlate them.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gridlab/measures.hpp"
#include "gridlab/rng.hpp"
#include "gridlab/strategies.hpp"

namespace gridlab {

enum class Model { continuous, discrete };

// n trials of D iid labels: Unif[0,1] (continuous) or Unif{1..K} (discrete,
// stored as integer-valued doubles). Rows are generated on demand from
// per-trial substreams rather than materialized.
struct Environment {
  std::int64_t n = 0;
  int D = 1;
  Model model = Model::continuous;
  std::int64_t K = 0;  // discrete only
  std::uint64_t seed = 0;

  std::vector<double> row(std::int64_t trial) const;
};

Environment sample_environment(std::int64_t n, int D, Model model, std::int64_t K,
                               std::uint64_t seed);

struct RunResult {
  std::vector<int> choices;   // kept index per trial, 1..D
  std::vector<double> values; // kept label per trial (raw value or integer label)
  // Mass 1/n per kept value; discrete labels embedded at (k - 1/2)/K.
  AtomicMeasure empirical;
};

// Applies the strategy to every environment row. choice_seed drives the
// strategy's own randomness (tables, mixtures); workers > 1 splits trials
// across threads with identical results.
RunResult run(const Environment& env, const Strategy& strategy, std::uint64_t choice_seed,
              int workers = 1);

// Independent non-identical strategies: per_trial[i] handles trial i.
RunResult run(const Environment& env, const std::vector<Strategy>& per_trial,
              std::uint64_t choice_seed, int workers = 1);

// The strategy's exact target law, embedded as atoms: exact pmf for discrete
// strategies, the y^D closed form for the keep-the-max score, a high-N Monte
// Carlo reference for other scored strategies.
AtomicMeasure target_atoms(const Strategy& strategy, int m, std::uint64_t ref_seed);

// Empirical-vs-target distances rho(bin(empirical, m), target) for each n.
std::vector<std::pair<std::int64_t, double>> glivenko_check(const Strategy& strategy,
                                                            const std::vector<std::int64_t>& n_list,
                                                            int m, std::uint64_t seed,
                                                            int workers = 1);

// Runs per-trial strategies, then compares the empirical measure against the
// exact average (1/n) sum of per-trial laws. Discrete strategies only.
double averaged_strategy_check(const std::vector<Strategy>& per_trial, int m,
                               std::uint64_t seed);

}  // namespace gridlab
