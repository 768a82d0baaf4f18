#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "doctest.h"
#include "gridlab/permutohedron.hpp"

using namespace gridlab;

namespace {

std::vector<std::vector<std::int64_t>> all_orderings(std::int64_t K) {
  std::vector<std::int64_t> alpha(static_cast<std::size_t>(K));
  for (std::int64_t k = 0; k < K; ++k) alpha[static_cast<std::size_t>(k)] = k + 1;
  std::vector<std::vector<std::int64_t>> out;
  do {
    out.push_back(alpha);
  } while (std::next_permutation(alpha.begin(), alpha.end()));
  return out;
}

// Preference cycle 1 < 2 < 3 < 1: each pair keeps the "cyclically larger".
StrategyTable cyclic_table_k3() {
  std::map<std::vector<std::int64_t>, std::int64_t> choice;
  choice[{1, 2}] = 2;
  choice[{2, 3}] = 3;
  choice[{1, 3}] = 1;
  return table_from_multiset_choice(3, 2, choice);
}

}  // namespace

TEST_CASE("closed-form kept-label law of an ordering") {
  // Identity ordering: mass (k^D - (k-1)^D)/K^D at label k.
  const RationalPmf s = extreme_sigma({1, 2, 3, 4}, 2);
  CHECK(s == RationalPmf(4, {BigInt(1), BigInt(3), BigInt(5), BigInt(7)}, BigInt(16)));

  // Mass follows the ordering position, not the label value.
  const RationalPmf t = extreme_sigma({1, 3, 4, 2}, 2);
  CHECK(t.mass(1) == BigRational(1, 16));
  CHECK(t.mass(3) == BigRational(3, 16));
  CHECK(t.mass(4) == BigRational(5, 16));
  CHECK(t.mass(2) == BigRational(7, 16));

  for (const auto& alpha : all_orderings(3)) {
    for (int D : {1, 2, 3}) {
      const RationalPmf e = extreme_sigma(alpha, D);
      for (std::int64_t k = 1; k <= 3; ++k) {
        CHECK(e.mass(alpha[static_cast<std::size_t>(k - 1)]) ==
              BigRational(ipow(k, D) - ipow(k - 1, D), ipow(3, D)));
      }
    }
  }

  CHECK_THROWS_AS(extreme_sigma({1, 1, 2}, 2), ContractError);  // not a permutation
}

TEST_CASE("greedy table of an ordering") {
  CHECK(greedy_table({1, 2, 3}, 2) == StrategyTable::greedy_max(3, 2));

  // Reversed ordering prefers small labels.
  const StrategyTable min_t = greedy_table({3, 2, 1}, 2);
  CHECK(min_t.p(encode_tuple({1, 3}, 3), 0) == BigRational(1));
  CHECK(min_t.p(encode_tuple({3, 1}, 3), 1) == BigRational(1));

  // The table's exact law matches the closed form, for every ordering.
  for (const auto& alpha : all_orderings(3)) {
    for (int D : {2, 3}) {
      const StrategyTable g = greedy_table(alpha, D);
      CHECK(g.is_deterministic());
      CHECK(is_consistent(g));
      CHECK(sigma_discrete(g) == extreme_sigma(alpha, D));
    }
  }
}

TEST_CASE("canonical table from multiset choices") {
  // Choosing the smaller label of {1,2} reproduces the reversed greedy table.
  std::map<std::vector<std::int64_t>, std::int64_t> choice;
  choice[{1, 2}] = 1;
  CHECK(table_from_multiset_choice(2, 2, choice) == greedy_table({2, 1}, 2));

  // Missing non-constant multiset and out-of-multiset choices are rejected.
  CHECK_THROWS_AS(table_from_multiset_choice(3, 2, choice), ContractError);
  choice[{1, 2}] = 3;
  CHECK_THROWS_AS(table_from_multiset_choice(2, 2, choice), ContractError);
}

TEST_CASE("weight tuples") {
  const StrategyTable g = StrategyTable::greedy_max(3, 2);
  // Subtuples of {1,2,3}: {1,2} keeps 2, {1,3} keeps 3, {2,3} keeps 3.
  CHECK(weight_tuple(g, {1, 2, 3}) == std::vector<int>{0, 1, 2});

  const WeightReport wr = verify_weight_tuples(g);
  CHECK(wr.all_base_permutation);
  CHECK(wr.counterexamples.empty());

  // Weights need a deterministic table.
  CHECK_THROWS_AS(weight_tuple(StrategyTable::uniform(3, 2), {1, 2, 3}), ContractError);
  CHECK_THROWS_AS(weight_tuple(g, {1, 1, 2}), ContractError);  // labels must be distinct

  // Every ordering's greedy table passes, all K <= 5, D <= 3 here.
  for (std::int64_t K : {3, 4, 5}) {
    for (int D : {2, 3}) {
      for (const auto& alpha : all_orderings(K)) {
        CHECK(verify_weight_tuples(greedy_table(alpha, D)).all_base_permutation);
      }
    }
  }

  // The preference cycle is consistent yet fails: its only triple weighs (1,1,1).
  const StrategyTable cyc = cyclic_table_k3();
  CHECK(is_consistent(cyc));
  CHECK(weight_tuple(cyc, {1, 2, 3}) == std::vector<int>{1, 1, 1});
  const WeightReport wc = verify_weight_tuples(cyc);
  CHECK_FALSE(wc.all_base_permutation);
  REQUIRE(wc.counterexamples.size() == 1);
  CHECK(wc.counterexamples[0].second == std::vector<int>{1, 1, 1});
}

TEST_CASE("density identity from weights") {
  // f(t) = K * sigma(t) exactly, on greedy tables and on every canonical
  // deterministic consistent table at K=3.
  for (const auto& alpha : all_orderings(4)) {
    const StrategyTable g = greedy_table(alpha, 2);
    const std::vector<BigRational> f = density_from_weights(g);
    const RationalPmf s = sigma_discrete(g);
    for (std::int64_t k = 1; k <= 4; ++k) {
      CHECK(f[static_cast<std::size_t>(k - 1)] == BigRational(4) * s.mass(k));
    }
  }
  for (const StrategyTable& t : enumerate_deterministic_consistent(3, 2)) {
    const std::vector<BigRational> f = density_from_weights(t);
    const RationalPmf s = sigma_discrete(t);
    for (std::int64_t k = 1; k <= 3; ++k) {
      CHECK(f[static_cast<std::size_t>(k - 1)] == BigRational(3) * s.mass(k));
    }
  }
}

TEST_CASE("enumerating canonical deterministic consistent tables") {
  // One free choice per non-constant multiset: 2 at K=2, 2^3 at K=3 (D=2).
  const auto k2 = enumerate_deterministic_consistent(2, 2);
  CHECK(k2.size() == 2);
  const auto k3 = enumerate_deterministic_consistent(3, 2);
  CHECK(k3.size() == 8);
  for (const StrategyTable& t : k3) {
    CHECK(t.is_deterministic());
    CHECK(is_consistent(t));
  }
  // All distinct.
  for (std::size_t i = 0; i < k3.size(); ++i) {
    for (std::size_t j = i + 1; j < k3.size(); ++j) CHECK_FALSE(k3[i] == k3[j]);
  }
}

TEST_CASE("exact convex hull membership") {
  const std::vector<std::vector<BigRational>> tri = {
      {BigRational(0), BigRational(0)},
      {BigRational(1), BigRational(0)},
      {BigRational(0), BigRational(1)},
  };
  CHECK(in_convex_hull(tri, {BigRational(1, 4), BigRational(1, 4)}));
  CHECK(in_convex_hull(tri, {BigRational(1, 2), BigRational(1, 2)}));  // boundary
  CHECK(in_convex_hull(tri, {BigRational(0), BigRational(0)}));        // vertex
  CHECK_FALSE(in_convex_hull(tri, {BigRational(3, 4), BigRational(3, 4)}));
  CHECK_FALSE(in_convex_hull(tri, {BigRational(-1, 10), BigRational(0)}));
}

TEST_CASE("extreme points of the kept-label polytope") {
  // Exactly K! extreme points, one per ordering, as a set.
  for (std::int64_t K : {2, 3}) {
    const std::vector<RationalPmf> pts = extreme_points_of_sigma_polytope(K, 2);
    const auto orderings = all_orderings(K);
    REQUIRE(pts.size() == orderings.size());
    for (const auto& alpha : orderings) {
      const RationalPmf want = extreme_sigma(alpha, 2);
      CHECK(std::count(pts.begin(), pts.end(), want) == 1);
    }
  }
}
