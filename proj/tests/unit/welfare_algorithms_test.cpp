// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "cbe/bounds.hpp"
#include "cbe/equilibrium.hpp"
#include "cbe/errors.hpp"
#include "cbe/instances.hpp"
#include "cbe/lifting.hpp"
#include "cbe/oracles.hpp"
#include "cbe/welfare_algorithms.hpp"
#include "support/generators.hpp"

namespace cbe {
namespace {

void expect_valid(const Market& market, const Construction& c) {
  EXPECT_TRUE(testing::brute_is_cbe(market, c.outcome)) << c.path;
  EXPECT_EQ(c.welfare, c.outcome.welfare(market));
  EXPECT_EQ(c.revenue, c.outcome.revenue());
  EXPECT_LE(c.revenue, c.welfare);
  EXPECT_TRUE(c.bound_holds) << c.path << ": " << c.bound;
}

// Best allocation with every nonempty part of size in [k, 2k), by owner enumeration.
Rational brute_restricted(const Market& market, int k) {
  const int m = market.num_items();
  const int n = market.num_consumers();
  std::vector<int> owner(m, 0);
  Rational best;
  while (true) {
    std::vector<ItemSet> parts(n, 0);
    for (int j = 0; j < m; ++j) {
      if (owner[j] < n) parts[owner[j]] |= singleton(j);
    }
    bool ok = true;
    Rational w;
    for (int i = 0; i < n; ++i) {
      const int size = cardinality(parts[i]);
      ok = ok && (size == 0 || (size >= k && size < 2 * k));
      w += market.value(i, parts[i]);
    }
    if (ok) best = max(best, w);
    int j = 0;
    while (j < m && ++owner[j] == n + 1) owner[j++] = 0;
    if (j == m) return best;
  }
}

TEST(TwoConsumer, ComplementInstanceUsesGrandBundle) {
  Market market = prop22_market(rat(1, 10));
  Construction c = two_consumer_cbe(market);
  expect_valid(market, c);
  EXPECT_EQ(c.welfare, rat(21, 10));
  EXPECT_EQ(c.outcome.priced.bundling, Bundling::grand(2));
  EXPECT_EQ(c.outcome.allocation[0], BundleSet{1});
}

TEST(TwoConsumer, CaseOneInstanceIsEfficient) {
  Market market = Market::from_valuations(
      {Valuation::explicit_table(2, {0, 3, 0, rat(7, 2)}), Valuation::explicit_table(2, {0, 2, 3, rat(7, 2)})});
  Construction c = two_consumer_cbe(market);
  expect_valid(market, c);
  EXPECT_EQ(c.opt, Rational(6));
  EXPECT_EQ(c.welfare, Rational(6));
}

TEST(TwoConsumer, SubadditivePairIsEfficient) {
  Market market = Market::from_valuations({Valuation::budget_additive({2, 1, 1}, 2), Valuation::unit_demand({1, 2, 2})});
  Construction c = two_consumer_cbe(market);
  expect_valid(market, c);
  EXPECT_EQ(c.welfare, welfare_opt(market).value);
}

TEST(TwoConsumer, RequiresTwoConsumers) {
  EXPECT_THROW(two_consumer_cbe(Market::from_valuations({Valuation::additive({1})})), PreconditionError);
}

TEST(TwoConsumerProperty, RandomMarketsMeetTwoThirds) {
  testing::Gen gen(51);
  for (int trial = 0; trial < 80; ++trial) {
    Market market = gen.explicit_market(gen.uniform_int(1, 4), 2);
    Construction c = two_consumer_cbe(market);
    expect_valid(market, c);
    EXPECT_GE(c.welfare * Rational(3), c.opt * Rational(2));
    EXPECT_EQ(c.opt, testing::brute_welfare(market));
    if (check_subadditive(market.valuation(0)) && check_subadditive(market.valuation(1))) {
      EXPECT_EQ(c.welfare, c.opt);
    }
  }
}

TEST(SubadditiveNOverTwo, Examples) {
  Market pair = Market::from_valuations({Valuation::unit_demand({2, 1}), Valuation::unit_demand({1, 2})});
  Construction a = subadditive_n_over_2(pair);
  expect_valid(pair, a);
  EXPECT_EQ(a.welfare, a.opt);
  Market three = Market::from_valuations(
      {Valuation::additive({5, 0, 0}), Valuation::additive({0, 3, 0}), Valuation::additive({0, 0, 1})});
  Construction b = subadditive_n_over_2(three);
  expect_valid(three, b);
  EXPECT_GE(b.welfare, Rational(8));
  Market one = Market::from_valuations({Valuation::additive({1, 2})});
  Construction c = subadditive_n_over_2(one);
  expect_valid(one, c);
  EXPECT_EQ(c.welfare, Rational(3));
  EXPECT_THROW(subadditive_n_over_2(prop22_market(rat(1, 10))), PreconditionError);
}

TEST(SubadditiveNOverTwoProperty, TwoOverNBound) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    Market market = gen_random(seed % 2 ? RandomClass::kBudgetAdditive : RandomClass::kUnitDemand, 4, n, seed);
    Construction c = subadditive_n_over_2(market);
    expect_valid(market, c);
    EXPECT_GE(c.welfare * Rational(n), c.opt * Rational(2));
  }
}

Market identical_units(int m, int n, const Rational& per_unit) {
  std::vector<Valuation> vs;
  for (int i = 0; i < n; ++i) {
    std::vector<Rational> pc(m + 1);
    for (int c = 0; c <= m; ++c) pc[c] = per_unit * Rational(c);
    vs.push_back(Valuation::multi_unit(pc));
  }
  return Market::from_valuations(std::move(vs));
}

TEST(MultiUnit, TwoUnitsTwoAdditiveConsumers) {
  Market market = identical_units(2, 2, Rational(1));
  Construction c = multiunit_cbe(market);
  expect_valid(market, c);
  EXPECT_GE(c.welfare, Rational(1) - rat(1, 1024));
}

TEST(MultiUnit, LowerBoundFamily) {
  Market market = thm42_market(4, rat(1, 10));
  Construction c = multiunit_cbe(market);
  expect_valid(market, c);
  EXPECT_EQ(c.welfare, rat(11, 5));
  EXPECT_EQ(c.welfare, cbe_search(market).best_welfare);
}

TEST(MultiUnit, SingleSurvivorGrandBundle) {
  Market market = Market::from_valuations({Valuation::multi_unit({0, 10, 20}), Valuation::multi_unit({0, 1, 1})});
  Construction c = multiunit_cbe(market);
  expect_valid(market, c);
  EXPECT_EQ(c.path, "single-survivor");
  EXPECT_EQ(c.outcome.priced.prices, std::vector<Rational>{20});
}

TEST(MultiUnit, RejectsOtherKinds) {
  EXPECT_THROW(multiunit_cbe(prop22_market(rat(1, 10))), PreconditionError);
}

TEST(MultiUnitProperty, BoundAndDemandAudit) {
  DemandAudit audit;
  MultiUnitOptions options;
  options.audit = &audit;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int m = 1 + static_cast<int>(seed % 8);
    const int n = 1 + static_cast<int>(seed % 5);
    Market market = gen_random(RandomClass::kMultiUnit, m, n, seed);
    Construction c = multiunit_cbe(market, options);
    expect_valid(market, c);
    EXPECT_TRUE(within_log_factor(c.welfare, c.opt, Rational(20), Rational(market.mu())));
    Construction vq = multiunit_value_query_mode(market, options);
    expect_valid(market, vq);
  }
  EXPECT_GT(audit.queries.load(), 0u);
  EXPECT_EQ(audit.mismatches.load(), 0u);
}

TEST(PrebundleSizes, Policy) {
  EXPECT_EQ(prebundle_sizes(9, 2), (std::vector<int>{2, 2, 2, 3}));
  EXPECT_EQ(prebundle_sizes(4, 2), (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(prebundle_sizes(3, 2), (std::vector<int>{1, 1, 1}));
}

TEST(MultiUnitValueQuery, SquareCountMatchesDirectPipeline) {
  Market market = gen_random(RandomClass::kMultiUnit, 4, 2, 3);
  Construction a = multiunit_cbe(market);
  Construction b = multiunit_value_query_mode(market);
  expect_valid(market, b);
  EXPECT_EQ(a.welfare, b.welfare);
}

TEST(GeneralSqrt, Examples) {
  Market one = Market::from_valuations({Valuation::additive({1, 1})});
  Construction a = general_sqrt(one, {3}, Rational(2));
  expect_valid(one, a);
  EXPECT_GE(a.welfare, Rational(2) - rat(2, 1024));
  // Four parts of value exactly v: two bundles of two parts.
  std::vector<Valuation> vs;
  for (int i = 0; i < 4; ++i) {
    std::vector<Rational> w(4);
    w[i] = Rational(1);
    vs.push_back(Valuation::additive(w));
  }
  Market four = Market::from_valuations(std::move(vs));
  Construction b = general_sqrt(four, {1, 2, 4, 8}, Rational(1));
  expect_valid(four, b);
  EXPECT_EQ(b.path, "groups of 2");
  EXPECT_EQ(b.outcome.priced.bundling.size() >= 2, true);
  EXPECT_THROW(general_sqrt(four, {1, 2, 4, 8}, Rational(2)), PreconditionError);
}

TEST(GeneralSqrtProperty, BinnedOptimumPipeline) {
  testing::Gen gen(52);
  for (int trial = 0; trial < 40; ++trial) {
    Market market = gen.explicit_market(gen.uniform_int(1, 5), gen.uniform_int(1, 3), 8);
    WelfareResult opt = welfare_opt(market);
    if (opt.value.is_zero()) continue;
    LogBinResult lb = log_bin(market, opt.allocation);
    Construction c = general_sqrt(market, lb.filtered, lb.threshold);
    expect_valid(market, c);
    // sqrt(r) <= r, so the guarantee implies this weaker linear form.
    EXPECT_GE(c.welfare * Rational(4 * lb.r + 4), lb.output_welfare);
    EXPECT_EQ(c.opt, lb.output_welfare);
  }
}

TEST(GreedyAk, ComplementInstanceTrace) {
  Market market = prop22_market(rat(1, 10));
  AkTrace t = greedy_ak(market, 1);
  ASSERT_EQ(t.steps.size(), 2u);
  EXPECT_EQ(t.steps[0].consumer, 1);
  EXPECT_EQ(t.steps[0].value, Rational(2));
  EXPECT_EQ(t.steps[1].consumer, 0);
  EXPECT_EQ(t.steps[1].value, Rational(1));
  EXPECT_EQ(t.welfare, Rational(3));
}

TEST(GreedyAk, WholeSetStep) {
  Market market = prop22_market(rat(1, 10));
  AkTrace t = greedy_ak(market, 2);
  ASSERT_EQ(t.steps.size(), 1u);
  EXPECT_EQ(t.steps[0].bundle, ItemSet{3});
  EXPECT_EQ(t.steps[0].value, rat(21, 10));
}

TEST(GreedyAkProperty, InequalitiesAgainstBruteForce) {
  testing::Gen gen(53);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = gen.uniform_int(1, 5);
    Market market = gen.explicit_market(m, gen.uniform_int(1, 3));
    const int k = gen.uniform_int(1, m);
    AkTrace t = greedy_ak(market, k);
    EXPECT_EQ(t.w, brute_restricted(market, k));
    EXPECT_EQ(restricted_welfare(market, full_set(market.num_consumers()), market.all_items(), k), t.w);
    EXPECT_GE(t.welfare * Rational(2 * k), t.w);
    Rational w_prev = t.w;
    Rational alg;
    for (const auto& s : t.steps) {
      EXPECT_GE(cardinality(s.bundle), k);
      EXPECT_LT(cardinality(s.bundle), 2 * k);
      EXPECT_LE(w_prev - s.w_after, Rational(2 * k) * s.value);
      w_prev = s.w_after;
      alg += s.value;
    }
    EXPECT_EQ(alg, t.welfare);
    EXPECT_LE(static_cast<int>(t.steps.size()), m / k);
  }
}

TEST(GeneralM23, Examples) {
  Market one = Market::from_valuations({Valuation::explicit_table(2, {0, 1, 1, 3})});
  Construction a = general_m23(one);
  expect_valid(one, a);
  EXPECT_EQ(a.welfare, Rational(3));
  Market p = prop22_market(rat(1, 10));
  Construction b = general_m23(p);
  expect_valid(p, b);
  EXPECT_EQ(b.welfare, cbe_search(p).best_welfare);
}

TEST(GeneralM23Property, RandomMarkets) {
  testing::Gen gen(54);
  for (int trial = 0; trial < 40; ++trial) {
    Market market = gen.explicit_market(gen.uniform_int(1, 5), gen.uniform_int(1, 3));
    Construction c = general_m23(market);
    expect_valid(market, c);
    EXPECT_LE(c.welfare, cbe_search(market).best_welfare);
  }
}

TEST(BudgetAdditive, LowerBoundInstanceTrace) {
  Market market = table1_market(rat(1, 100), rat(1, 100));
  GreedySplit g = budget_greedy(market);
  EXPECT_EQ(g.allocation, (ItemAllocation{1, 6, 0}));
  EXPECT_EQ(g.exhausted, (std::vector<int>{0, 1}));
  Construction c = budget_additive_cbe(market);
  expect_valid(market, c);
  EXPECT_EQ(c.path, "case-1");
  EXPECT_GE(c.welfare, Rational(4));
}

TEST(BudgetAdditive, SingleConsumer) {
  Market market = Market::from_valuations({Valuation::budget_additive({1, 1}, 1)});
  Construction c = budget_additive_cbe(market);
  expect_valid(market, c);
  EXPECT_EQ(c.welfare, Rational(1));
}

TEST(BudgetAdditive, HugeBudgetsBehaveAdditively) {
  Market market = Market::from_valuations(
      {Valuation::budget_additive({3, 1, 2}, 100), Valuation::budget_additive({1, 2, 1}, 100)});
  GreedySplit g = budget_greedy(market);
  EXPECT_TRUE(g.exhausted.empty());
  Construction c = budget_additive_cbe(market);
  expect_valid(market, c);
  EXPECT_EQ(c.path, "case-2");
  EXPECT_EQ(c.welfare, Rational(7));
}

TEST(BudgetAdditiveProperty, ClaimsAndBound) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int m = 1 + static_cast<int>(seed % 5);
    Market market = gen_random(RandomClass::kBudgetAdditive, m, 1 + static_cast<int>(seed % 3), seed);
    GreedySplit g = budget_greedy(market);
    const Rational opt = welfare_opt(market).value;
    EXPECT_GE(allocation_welfare(market, g.allocation) * Rational(4), opt);
    for (int i : g.open) {
      for (int j : members(g.allocation[i])) {
        for (int other : g.open) EXPECT_GE(market.value(i, singleton(j)), market.value(other, singleton(j)));
      }
    }
    Construction c = budget_additive_cbe(market);
    expect_valid(market, c);
    EXPECT_TRUE(within_log_factor(c.welfare, opt, Rational(32), Rational(m)) ||
                c.welfare * Rational(8) >= opt);
  }
}

}  // namespace
}  // namespace cbe
