// Environment sampling and multi-trial strategy execution.

#include "gridlab/simulate.hpp"

#include <cmath>
#include <cstddef>
#include <thread>

namespace gridlab {

namespace {

// Domain-separation salts: the same user seed must yield unrelated streams
// for environment labels, choice randomness, and MC reference runs.
constexpr std::uint64_t kChoiceDomain = 0x8F1BBCDCA53A9E3BULL;
constexpr std::uint64_t kReferenceDomain = 0x243F6A8885A308D3ULL;

constexpr std::int64_t kMaxLabels = 1'000'000'000;  // n * D bound

struct StrategyShape {
  bool any_table = false;
  bool any_scored = false;
  std::int64_t K = 0;
  int D = 0;
};

void walk_shape(const Strategy& s, StrategyShape& shape) {
  if (const auto* t = std::get_if<StrategyTable>(&s.v)) {
    if (shape.any_table && (shape.K != t->K || shape.D != t->D))
      throw ContractError("strategies disagree on K or D");
    shape.any_table = true;
    shape.K = t->K;
    shape.D = t->D;
  } else if (const auto* sc = std::get_if<ScoredStrategy>(&s.v)) {
    if (shape.any_scored && shape.D != sc->D)
      throw ContractError("strategies disagree on D");
    if (shape.any_table && shape.D != sc->D)
      throw ContractError("strategies disagree on D");
    shape.any_scored = true;
    shape.D = sc->D;
  } else {
    for (const Strategy& c : std::get<MixtureStrategy>(s.v).components) walk_shape(c, shape);
  }
}

StrategyShape shape_of(const Strategy& s) {
  StrategyShape shape;
  walk_shape(s, shape);
  if (shape.any_table && shape.any_scored)
    throw ContractError("strategy mixes discrete tables with scored components");
  if (!shape.any_table && !shape.any_scored)
    throw ContractError("strategy has no components");
  return shape;
}

void check_domain(const Environment& env, const StrategyShape& shape) {
  if (shape.D != env.D) throw ContractError("strategy D does not match environment");
  if (env.model == Model::discrete) {
    if (!shape.any_table) throw ContractError("discrete environment needs a table strategy");
    if (shape.K != env.K) throw ContractError("strategy K does not match environment");
  } else if (shape.any_table) {
    throw ContractError("continuous environment needs a scored strategy");
  }
}

// Shared worker loop: fills choices/values for trials [lo, hi).
template <typename StrategyAt>
void run_block(const Environment& env, const StrategyAt& strategy_at, std::uint64_t choice_seed,
               std::int64_t lo, std::int64_t hi, std::vector<int>& choices,
               std::vector<double>& values) {
  for (std::int64_t i = lo; i < hi; ++i) {
    const std::vector<double> row = env.row(i);
    SplitMix64 rng(choice_seed ^ kChoiceDomain, static_cast<std::uint64_t>(i));
    const int idx = choose(strategy_at(i), row, rng);
    choices[static_cast<std::size_t>(i)] = idx;
    values[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(idx - 1)];
  }
}

template <typename StrategyAt>
RunResult run_impl(const Environment& env, const StrategyAt& strategy_at,
                   std::uint64_t choice_seed, int workers) {
  RunResult out;
  out.choices.resize(static_cast<std::size_t>(env.n));
  out.values.resize(static_cast<std::size_t>(env.n));

  const std::int64_t w = std::max<std::int64_t>(1, std::min<std::int64_t>(workers, env.n));
  if (w <= 1) {
    run_block(env, strategy_at, choice_seed, 0, env.n, out.choices, out.values);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(w));
    const std::int64_t block = (env.n + w - 1) / w;
    for (std::int64_t t = 0; t < w; ++t) {
      const std::int64_t lo = t * block;
      const std::int64_t hi = std::min(env.n, lo + block);
      threads.emplace_back([&, lo, hi] {
        run_block(env, strategy_at, choice_seed, lo, hi, out.choices, out.values);
      });
    }
    for (auto& th : threads) th.join();
  }

  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(out.values.size());
  const double unit = env.n > 0 ? 1.0 / static_cast<double>(env.n) : 0.0;
  for (double v : out.values) {
    const double pos = env.model == Model::discrete
                           ? (2.0 * v - 1.0) / (2.0 * static_cast<double>(env.K))
                           : v;
    atoms.emplace_back(pos, unit);
  }
  out.empirical = AtomicMeasure::from_atoms(std::move(atoms));
  return out;
}

}  // namespace

std::vector<double> Environment::row(std::int64_t trial) const {
  if (trial < 0 || trial >= n) throw ContractError("trial index out of range");
  SplitMix64 rng(seed, static_cast<std::uint64_t>(trial));
  std::vector<double> out(static_cast<std::size_t>(D));
  for (int j = 0; j < D; ++j) {
    out[static_cast<std::size_t>(j)] = model == Model::discrete
                                           ? static_cast<double>(rng.next_label(K))
                                           : rng.next_double();
  }
  return out;
}

Environment sample_environment(std::int64_t n, int D, Model model, std::int64_t K,
                               std::uint64_t seed) {
  if (n < 0) throw ContractError("trial count must be >= 0");
  if (D < 1) throw ContractError("draw count must be >= 1");
  if (n > kMaxLabels / D) throw SizeError("environment exceeds the label budget");
  if (model == Model::discrete && K < 1) throw ContractError("label count must be >= 1");
  Environment env;
  env.n = n;
  env.D = D;
  env.model = model;
  env.K = model == Model::discrete ? K : 0;
  env.seed = seed;
  return env;
}

RunResult run(const Environment& env, const Strategy& strategy, std::uint64_t choice_seed,
              int workers) {
  check_domain(env, shape_of(strategy));
  return run_impl(env, [&](std::int64_t) -> const Strategy& { return strategy; }, choice_seed,
                  workers);
}

RunResult run(const Environment& env, const std::vector<Strategy>& per_trial,
              std::uint64_t choice_seed, int workers) {
  if (per_trial.size() != static_cast<std::size_t>(env.n))
    throw ContractError("per-trial strategy list length does not match n");
  for (const Strategy& s : per_trial) check_domain(env, shape_of(s));
  return run_impl(env,
                  [&](std::int64_t i) -> const Strategy& {
                    return per_trial[static_cast<std::size_t>(i)];
                  },
                  choice_seed, workers);
}

AtomicMeasure target_atoms(const Strategy& strategy, int m, std::uint64_t ref_seed) {
  const StrategyShape shape = shape_of(strategy);
  if (shape.any_table) {
    return sigma_discrete_of(strategy).embed_atoms();
  }
  if (const auto* sc = std::get_if<ScoredStrategy>(&strategy.v);
      sc != nullptr && sc->score == ScoredStrategy::Score::identity) {
    return center_atoms(binned_sigma_max(m, shape.D));  // closed form y^D
  }
  // General scored strategy or mixture: high-N Monte Carlo reference.
  constexpr std::int64_t kRefTrials = 2'000'000;
  const Environment env =
      sample_environment(kRefTrials, shape.D, Model::continuous, 0, ref_seed ^ kReferenceDomain);
  const RunResult ref = run(env, strategy, ref_seed ^ kReferenceDomain);
  return center_atoms(bin(ref.empirical, m));
}

std::vector<std::pair<std::int64_t, double>> glivenko_check(const Strategy& strategy,
                                                            const std::vector<std::int64_t>& n_list,
                                                            int m, std::uint64_t seed,
                                                            int workers) {
  const StrategyShape shape = shape_of(strategy);
  const Model model = shape.any_table ? Model::discrete : Model::continuous;
  const AtomicMeasure target = target_atoms(strategy, m, seed);

  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(n_list.size());
  for (std::int64_t n : n_list) {
    const Environment env = sample_environment(n, shape.D, model, shape.K, seed);
    const RunResult res = run(env, strategy, seed, workers);
    const double rho = lp_distance(center_atoms(bin(res.empirical, m)), target);
    out.emplace_back(n, rho);
  }
  return out;
}

double averaged_strategy_check(const std::vector<Strategy>& per_trial, int m,
                               std::uint64_t seed) {
  if (per_trial.empty()) throw ContractError("per-trial strategy list is empty");
  const StrategyShape shape = shape_of(per_trial.front());
  if (!shape.any_table) throw ContractError("averaged check needs discrete strategies");

  // Exact average of per-trial laws, with repeated strategies computed once.
  std::vector<std::pair<const StrategyTable*, RationalPmf>> cache;
  std::vector<BigRational> acc(static_cast<std::size_t>(shape.K), BigRational(0));
  for (const Strategy& s : per_trial) {
    const RationalPmf* pmf = nullptr;
    if (const auto* t = std::get_if<StrategyTable>(&s.v)) {
      for (auto& [table, cached] : cache) {
        if (*table == *t) {
          pmf = &cached;
          break;
        }
      }
      if (pmf == nullptr) {
        cache.emplace_back(t, sigma_discrete(*t));
        pmf = &cache.back().second;
      }
    }
    const RationalPmf local = pmf == nullptr ? sigma_discrete_of(s) : *pmf;
    for (std::int64_t k = 1; k <= shape.K; ++k) acc[static_cast<std::size_t>(k - 1)] += local.mass(k);
  }
  const auto n = static_cast<std::int64_t>(per_trial.size());
  for (BigRational& x : acc) x /= n;
  const RationalPmf averaged = pmf_from_fractions(shape.K, acc);

  const Environment env = sample_environment(n, shape.D, Model::discrete, shape.K, seed);
  const RunResult res = run(env, per_trial, seed);
  return lp_distance(center_atoms(bin(res.empirical, m)),
                     center_atoms(bin(averaged.embed_atoms(), m)));
}

}  // namespace gridlab
