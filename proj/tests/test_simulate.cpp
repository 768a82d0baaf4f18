#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "gridlab/permutohedron.hpp"
#include "gridlab/simulate.hpp"

using namespace gridlab;

TEST_CASE("environment rows") {
  const Environment cont = sample_environment(100, 3, Model::continuous, 0, 42);
  const std::vector<double> r0 = cont.row(0);
  REQUIRE(r0.size() == 3);
  for (double v : r0) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  // Rows are a pure function of (seed, trial).
  CHECK(cont.row(7) == cont.row(7));
  CHECK(cont.row(7) != cont.row(8));
  CHECK(sample_environment(100, 3, Model::continuous, 0, 43).row(7) != cont.row(7));

  const Environment disc = sample_environment(5000, 2, Model::discrete, 4, 42);
  std::vector<int> freq(5, 0);
  for (std::int64_t i = 0; i < disc.n; ++i) {
    for (double v : disc.row(i)) {
      REQUIRE(v == std::floor(v));
      const auto k = static_cast<int>(v);
      REQUIRE(k >= 1);
      REQUIRE(k <= 4);
      freq[static_cast<std::size_t>(k)]++;
    }
  }
  for (int k = 1; k <= 4; ++k) CHECK(std::abs(freq[static_cast<std::size_t>(k)] - 2500) < 250);

  CHECK_THROWS_AS(sample_environment(-1, 2, Model::continuous, 0, 1), ContractError);
  CHECK_THROWS_AS(sample_environment(10, 0, Model::continuous, 0, 1), ContractError);
  CHECK_THROWS_AS(sample_environment(10, 2, Model::discrete, 0, 1), ContractError);
}

TEST_CASE("run applies the strategy rowwise") {
  const Environment env = sample_environment(2000, 2, Model::continuous, 0, 7);
  const Strategy maxs{ScoredStrategy{ScoredStrategy::Score::identity, {}, 2}};
  const RunResult res = run(env, maxs, 11);

  REQUIRE(res.choices.size() == 2000);
  REQUIRE(res.values.size() == 2000);
  for (std::int64_t i = 0; i < env.n; ++i) {
    const std::vector<double> row = env.row(i);
    const double got = res.values[static_cast<std::size_t>(i)];
    CHECK(got == std::max(row[0], row[1]));
    CHECK(row[static_cast<std::size_t>(res.choices[static_cast<std::size_t>(i)] - 1)] == got);
  }
  CHECK(res.empirical.total() == doctest::Approx(1.0).epsilon(1e-12));

  // Worker count never changes the outcome.
  const RunResult res4 = run(env, maxs, 11, 4);
  CHECK(res4.choices == res.choices);
  CHECK(res4.values == res.values);

  // Discrete labels are embedded at (k - 1/2)/K in the empirical measure.
  const Environment denv = sample_environment(100, 2, Model::discrete, 4, 7);
  const Strategy greedy{StrategyTable::greedy_max(4, 2)};
  const RunResult dres = run(denv, greedy, 11);
  for (double v : dres.empirical.values) {
    const double k = v * 4 + 0.5;
    CHECK(k == std::floor(k));
  }

  // Choice randomness is decoupled from the environment: a uniform table
  // reuses the environment seed yet still picks both positions.
  const Environment small = sample_environment(400, 2, Model::discrete, 2, 7);
  const RunResult ures = run(small, Strategy{StrategyTable::uniform(2, 2)}, small.seed);
  const auto firsts = std::count(ures.choices.begin(), ures.choices.end(), 1);
  CHECK(firsts > 120);
  CHECK(firsts < 280);
}

TEST_CASE("per-trial strategies") {
  const Environment env = sample_environment(1000, 2, Model::discrete, 2, 3);
  // Alternate keep-the-max and keep-the-min trial by trial.
  std::vector<Strategy> per;
  per.reserve(1000);
  for (int i = 0; i < 1000; ++i) {
    per.push_back(i % 2 == 0 ? Strategy{StrategyTable::greedy_max(2, 2)}
                             : Strategy{greedy_table({2, 1}, 2)});
  }
  const RunResult res = run(env, per, 5);
  for (std::int64_t i = 0; i < env.n; ++i) {
    const std::vector<double> row = env.row(i);
    const double want = i % 2 == 0 ? std::max(row[0], row[1]) : std::min(row[0], row[1]);
    CHECK(res.values[static_cast<std::size_t>(i)] == want);
  }
  CHECK_THROWS_AS(run(env, std::vector<Strategy>(3, per[0]), 5), ContractError);  // size

  // The empirical measure tracks the average of the per-trial laws.
  CHECK(averaged_strategy_check(per, 2, 21) < 0.05);
}

TEST_CASE("target laws") {
  // Discrete tables embed their exact pmf.
  const AtomicMeasure greedy4 = target_atoms(Strategy{StrategyTable::greedy_max(4, 2)}, 100, 1);
  REQUIRE(greedy4.size() == 4);
  CHECK(greedy4.values[0] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(greedy4.masses[3] == doctest::Approx(7.0 / 16).epsilon(1e-15));

  // Keep-the-max uses the closed form: bin mass ((b+1)^D - b^D)/m^D at centers.
  const AtomicMeasure maxt = target_atoms(Strategy{ScoredStrategy{ScoredStrategy::Score::identity, {}, 2}}, 4, 1);
  REQUIRE(maxt.size() == 4);
  CHECK(maxt.masses[0] == doctest::Approx(1.0 / 16).epsilon(1e-12));
  CHECK(maxt.masses[3] == doctest::Approx(7.0 / 16).epsilon(1e-12));

  // Other scores fall back to a seeded reference run; the vee keeps extremes.
  const AtomicMeasure veet = target_atoms(Strategy{ScoredStrategy{ScoredStrategy::Score::vee, {}, 2}}, 4, 1);
  const double mid = veet.masses[1] + veet.masses[2];
  const double ends = veet.masses[0] + veet.masses[3];
  CHECK(ends > 2 * mid);
}

TEST_CASE("empirical laws converge to targets") {
  // Keep-the-max, continuous: distance shrinks with n and ends small.
  const Strategy maxs{ScoredStrategy{ScoredStrategy::Score::identity, {}, 2}};
  const auto rows = glivenko_check(maxs, {100, 10000}, 20, 17);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].first == 100);
  CHECK(rows[1].second <= rows[0].second + 0.01);
  CHECK(rows[1].second < 0.06);

  // Discrete greedy at K=4 lands within one part in fifty of the exact law.
  const Strategy greedy{StrategyTable::greedy_max(4, 2)};
  const auto drows = glivenko_check(greedy, {20000}, 100, 17);
  CHECK(drows[0].second < 0.02);
}
