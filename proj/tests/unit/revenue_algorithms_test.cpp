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
#include "cbe/matroid.hpp"
#include "cbe/oracles.hpp"
#include "cbe/revenue_algorithms.hpp"
#include "support/generators.hpp"

namespace cbe {
namespace {

Rational sum_over(const std::vector<Rational>& prices, ItemSet s) {
  Rational t;
  for (int j : members(s)) t += prices[j];
  return t;
}

// The three extra-consumer properties, written out directly.
bool properties_hold(const Market& market, const ExtraConsumerState& s) {
  const int n = market.num_consumers();
  const ItemSet all = market.all_items();
  for (int i = 0; i < n; ++i) {
    const Valuation& v = market.valuation(i);
    const Rational own = v.value(s.bundles[i]) - s.bundle_prices[i];
    for (ItemSet t = 0; t <= all; ++t) {
      if (v.value(t) - sum_over(s.item_prices, t) > own) return false;
      if (is_subset(t, s.bundles[i]) && v.matroid()->is_independent(t) &&
          sum_over(s.item_prices, t) > s.bundle_prices[i]) {
        return false;
      }
    }
  }
  for (int j = 0; j < market.num_items(); ++j) {
    if (s.item_prices[j] < s.q) return false;
    if (contains(s.residual(), j) && s.item_prices[j] != s.q) return false;
  }
  return true;
}

void expect_valid(const Market& market, const Construction& c) {
  EXPECT_TRUE(testing::brute_is_cbe(market, c.outcome)) << c.path;
  EXPECT_EQ(c.revenue, c.outcome.revenue());
  EXPECT_LE(c.revenue, c.welfare);
  EXPECT_TRUE(c.bound_holds) << c.path << ": " << c.bound;
}

Market shared_matroid_market(const Matroid& matroid, const std::vector<std::vector<Rational>>& weights) {
  std::vector<Valuation> vs;
  for (const auto& w : weights) vs.push_back(Valuation::matroid_rank(matroid, w));
  return Market::from_valuations(std::move(vs));
}

TEST(MatroidView, RewritesUnitDemandAndAdditive) {
  Market market = Market::from_valuations({Valuation::unit_demand({1, 2}), Valuation::additive({1, 2})});
  Market view = matroid_view(market);
  EXPECT_EQ(view.valuation(0).matroid()->uniform_rank(), 1);
  EXPECT_EQ(view.valuation(1).matroid()->uniform_rank(), 2);
  for (int i = 0; i < 2; ++i) EXPECT_EQ(view.valuation(i).table(), market.valuation(i).table());
}

TEST(ReserveMarket, AppendsAdditiveConsumer) {
  Market market = revenue_lb_market(3);
  Market r = reserve_market(market, {0, 2}, rat(1, 5));
  ASSERT_EQ(r.num_consumers(), 3);
  EXPECT_EQ(r.value(2, market.all_items()), rat(3, 5));
  EXPECT_EQ(r.value(1, 1), rat(1, 3));
}

TEST(ReserveEquilibrium, TwoEqualUnitDemandConsumers) {
  Market market = Market::from_valuations({Valuation::unit_demand({1, 1}), Valuation::unit_demand({1, 1})});
  ReserveEquilibrium re = reserve_equilibrium(market);
  EXPECT_EQ(re.q, Rational(1));
  EXPECT_EQ(re.prices, (std::vector<Rational>{1, 1}));
  EXPECT_EQ(re.unallocated, 0);
  EXPECT_EQ(re.revenue, Rational(2));
  EXPECT_EQ(re.opt, Rational(2));
}

TEST(ReserveEquilibrium, SingleConsumer) {
  Market market = Market::from_valuations({Valuation::additive({2, 3})});
  ReserveEquilibrium re = reserve_equilibrium(market);
  for (const auto& p : re.prices) EXPECT_GE(p, re.q);
  EXPECT_GE(re.revenue, re.q * Rational(cardinality(re.allocation[0])));
  EXPECT_TRUE(re.bound_holds);
}

TEST(ReserveEquilibrium, RevenueLowerBoundFamily) {
  for (int n = 2; n <= 5; ++n) {
    ReserveEquilibrium re = reserve_equilibrium(revenue_lb_market(n));
    EXPECT_LE(re.revenue, Rational(1)) << n;
    Rational harmonic;
    for (int i = 1; i <= n; ++i) harmonic += Rational(1, i);
    EXPECT_EQ(re.opt, harmonic);
  }
}

TEST(ReserveEquilibriumProperty, ReserveCeIsVerified) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int m = 1 + static_cast<int>(seed % 5);
    const int n = 1 + static_cast<int>(seed % 3);
    Market market = gen_random(seed % 2 ? RandomClass::kMatroidUniform : RandomClass::kMatroidCommon, m, n, seed);
    ReserveEquilibrium re = reserve_equilibrium(market);
    if (re.opt.is_zero()) continue;
    // CE of the augmented market: the extra consumer takes the unsold items.
    Market aug = reserve_market(market, [&] {
      std::vector<int> all(n);
      for (int i = 0; i < n; ++i) all[i] = i;
      return all;
    }(), re.q);
    ItemAllocation alloc = re.allocation;
    ItemSet sold = 0;
    for (ItemSet s : alloc) sold |= s;
    alloc.push_back(market.all_items() & ~sold);
    EXPECT_EQ(cardinality(alloc.back()), re.unallocated);
    EXPECT_TRUE(testing::brute_is_cbe(aug, item_outcome(m, re.prices, alloc))) << "seed " << seed;
    for (int j = 0; j < m; ++j) {
      EXPECT_GE(re.prices[j], re.q);
      if (contains(alloc.back(), j)) EXPECT_EQ(re.prices[j], re.q);
    }
    EXPECT_TRUE(within_log_factor(re.revenue, re.opt, Rational(re.constant), Rational(m)));
  }
}

TEST(UniformMatroidRevenue, RankOneEqualWeights) {
  Market market = Market::from_valuations({Valuation::unit_demand({1, 1, 1}), Valuation::unit_demand({1, 1, 1})});
  Construction c = uniform_matroid_revenue_cbe(market);
  expect_valid(market, c);
  EXPECT_EQ(c.revenue, Rational(2));
}

TEST(UniformMatroidRevenue, AdditivePlusRankOne) {
  Market market = Market::from_valuations({Valuation::additive({1, 2, 1}), Valuation::unit_demand({2, 1, 3})});
  Construction c = uniform_matroid_revenue_cbe(market);
  expect_valid(market, c);
}

TEST(UniformMatroidRevenue, LowerBoundFamilyAgainstSearch) {
  Market market = revenue_lb_market(4);
  Construction c = uniform_matroid_revenue_cbe(market);
  expect_valid(market, c);
  SearchOptions o;
  o.with_revenue = true;
  CbeSearchResult r = cbe_search(market, o);
  ASSERT_TRUE(r.best_revenue.has_value());
  EXPECT_LE(c.revenue, *r.best_revenue);
  EXPECT_LE(*r.best_revenue, Rational(2));
}

TEST(UniformMatroidRevenue, RejectsSharedFamilyMatroid) {
  Matroid g = Matroid::family(2, {0, 1, 2});
  Market market = shared_matroid_market(g, {{1, 1}, {1, 2}});
  EXPECT_THROW(uniform_matroid_revenue_cbe(market), PreconditionError);
}

TEST(UniformMatroidRevenueProperty, RandomMarkets) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int m = 1 + static_cast<int>(seed % 5);
    Market market = gen_random(RandomClass::kMatroidUniform, m, 1 + static_cast<int>(seed % 3), seed);
    Construction c = uniform_matroid_revenue_cbe(market);
    expect_valid(market, c);
    EXPECT_TRUE(within_log_factor(c.revenue, c.opt, Rational(16), Rational(m)));
  }
}

TEST(ExtraConsumer, FreeMatroidStartsWithMaxWeightOwners) {
  Market market = shared_matroid_market(Matroid::uniform(3, 3), {{3, 1, 2}, {1, 4, 1}});
  ExtraConsumerState s = extra_consumer_start(market);
  EXPECT_TRUE(properties_hold(market, s));
  for (int j = 0; j < 3; ++j) {
    if (contains(s.residual(), j)) continue;
    const int owner = contains(s.bundles[0], j) ? 0 : 1;
    EXPECT_GE(market.valuation(owner).weights()[j], market.valuation(1 - owner).weights()[j]);
  }
}

TEST(ExtraConsumer, RankOneCommonMatroid) {
  Market market = shared_matroid_market(Matroid::uniform(3, 1), {{3, 1, 2}, {1, 3, 1}, {2, 2, 3}});
  ExtraConsumerState s = extra_consumer_start(market);
  EXPECT_TRUE(properties_hold(market, s));
  for (int i = 0; i < 3; ++i) EXPECT_LE(s.ranks[i], 1);
}

TEST(ExtraConsumer, AbsorbingStepKeepsPrices) {
  // Consumer 1 holds item a under a rank-1 matroid; residual b can be absorbed.
  Market market = shared_matroid_market(Matroid::uniform(2, 1), {{2, 1}});
  ExtraConsumerState s;
  s.bundles = {1, 2};
  s.item_prices = {2, 1};
  s.bundle_prices = {2};
  s.q = Rational(1);
  s.ranks = {1};
  ASSERT_TRUE(properties_hold(market, s));
  ExtraConsumerState next = extra_consumer_step(market, s);
  EXPECT_EQ(next.last_case, 1);
  EXPECT_EQ(next.bundles, (std::vector<ItemSet>{3, 0}));
  EXPECT_EQ(next.item_prices, s.item_prices);
  EXPECT_EQ(next.bundle_prices, s.bundle_prices);
  EXPECT_TRUE(properties_hold(market, next));
}

TEST(ExtraConsumer, RankRaisingStepLowersReserve) {
  Market market = shared_matroid_market(Matroid::uniform(3, 3), {{4, rat(1, 2), rat(1, 4)}});
  ExtraConsumerState s;
  s.bundles = {1, 6};
  s.item_prices = {4, 1, 1};
  s.bundle_prices = {4};
  s.q = Rational(1);
  s.ranks = {1};
  ASSERT_TRUE(properties_hold(market, s));
  ExtraConsumerState next = extra_consumer_step(market, s);
  EXPECT_EQ(next.last_case, 2);
  EXPECT_EQ(next.q, rat(1, 2));
  EXPECT_EQ(next.bundle_prices[0], rat(9, 2));
  EXPECT_EQ(next.bundles[0], ItemSet{3});
  EXPECT_EQ(next.item_prices[2], rat(1, 2));
  EXPECT_TRUE(properties_hold(market, next));
}

TEST(ExtraConsumer, BoundaryWeightKeepsReserve) {
  Market market = shared_matroid_market(Matroid::uniform(2, 2), {{2, 1}});
  ExtraConsumerState s;
  s.bundles = {1, 2};
  s.item_prices = {2, 1};
  s.bundle_prices = {2};
  s.q = Rational(1);
  s.ranks = {1};
  ExtraConsumerState next = extra_consumer_step(market, s);
  EXPECT_EQ(next.q, Rational(1));
  EXPECT_EQ(next.residual(), 0u);
  EXPECT_TRUE(properties_hold(market, next));
}

TEST(ExtraConsumer, StepPreconditions) {
  Market market = shared_matroid_market(Matroid::uniform(2, 2), {{2, 1}});
  ExtraConsumerState s;
  s.bundles = {3, 0};
  s.item_prices = {2, 1};
  s.bundle_prices = {3};
  s.q = Rational(1);
  s.ranks = {2};
  EXPECT_THROW(extra_consumer_step(market, s), PreconditionError);
  Outcome o = extra_consumer_to_cbe(market, s);
  EXPECT_TRUE(testing::brute_is_cbe(market, o));
  s.bundles = {1, 2};
  EXPECT_THROW(extra_consumer_to_cbe(market, s), PreconditionError);
}

TEST(ExtraConsumer, ZeroReserveResidualIsAbsorbed) {
  Market market = shared_matroid_market(Matroid::uniform(2, 1), {{2, 1}, {1, 0}});
  ExtraConsumerState s;
  s.bundles = {1, 0, 2};
  s.item_prices = {1, 0};
  s.bundle_prices = {1, 0};
  s.q = Rational(0);
  s.ranks = {1, 0};
  ASSERT_TRUE(properties_hold(market, s));
  Outcome o = extra_consumer_to_cbe(market, s);
  EXPECT_TRUE(testing::brute_is_cbe(market, o));
  EXPECT_EQ(o.revenue(), Rational(1));
}

TEST(ExtraConsumerProperty, IterationInvariants) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int m = 1 + static_cast<int>(seed % 5);
    Market market = gen_random(RandomClass::kMatroidCommon, m, 1 + static_cast<int>(seed % 3), seed);
    ExtraConsumerState s = extra_consumer_start(market);
    EXPECT_TRUE(properties_hold(market, s));
    const Rational start = s.revenue();
    while (!s.done()) {
      ExtraConsumerState next = extra_consumer_step(market, s);
      EXPECT_TRUE(properties_hold(market, next));
      EXPECT_TRUE(cardinality(next.residual()) < cardinality(s.residual()) || next.q < s.q);
      EXPECT_LE(next.q, s.q);
      EXPECT_GE(next.revenue(), s.revenue());
      s = next;
      ASSERT_LE(s.steps, m + 1);
    }
    Outcome o = extra_consumer_to_cbe(market, s);
    EXPECT_TRUE(testing::brute_is_cbe(market, o));
    EXPECT_GE(o.revenue(), start);
    Construction c = common_matroid_revenue_cbe(market);
    expect_valid(market, c);
    EXPECT_EQ(c.revenue, o.revenue());
  }
}

TEST(CommonMatroidRevenue, FourItemsThreeConsumers) {
  Market market = gen_random(RandomClass::kMatroidCommon, 4, 3, 5);
  Construction c = common_matroid_revenue_cbe(market);
  expect_valid(market, c);
  EXPECT_TRUE(within_log_factor(c.revenue, welfare_opt(market).value, Rational(8), Rational(4)));
}

TEST(CommonMatroidRevenue, UnitDemandSpecialCase) {
  for (int n = 2; n <= 5; ++n) {
    Market market = revenue_lb_market(n);
    Construction a = common_matroid_revenue_cbe(market);
    Construction b = uniform_matroid_revenue_cbe(market);
    expect_valid(market, a);
    expect_valid(market, b);
  }
}

}  // namespace
}  // namespace cbe
