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

#include "cbe/equilibrium.hpp"
#include "cbe/errors.hpp"
#include "cbe/instances.hpp"
#include "cbe/lp_models.hpp"
#include "cbe/oracles.hpp"
#include "support/generators.hpp"

namespace cbe {
namespace {

Outcome grand_to(int m, int n, int owner, const Rational& price) {
  Outcome o;
  o.priced.bundling = Bundling::grand(m);
  o.priced.prices = {price};
  o.allocation.assign(n, 0);
  o.allocation[owner] = 1;
  return o;
}

TEST(VerifyCbe, GrandBundleToComplementConsumer) {
  Market market = prop22_market(rat(1, 10));
  VerificationReport r = verify_cbe(market, grand_to(2, 2, 0, Rational(2)));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.welfare, rat(21, 10));
  EXPECT_EQ(r.revenue, Rational(2));
  EXPECT_EQ(r.summary(), "pass");
}

TEST(VerifyCbe, GrandBundleToUnitDemandConsumerFails) {
  Market market = prop22_market(rat(1, 10));
  for (const Rational& p : {Rational(0), Rational(1), Rational(2), rat(41, 20), rat(21, 10)}) {
    VerificationReport r = verify_cbe(market, grand_to(2, 2, 1, p));
    EXPECT_FALSE(r.pass) << p;
    EXPECT_TRUE(r.cleared);
  }
  VerificationReport r = verify_cbe(market, grand_to(2, 2, 1, Rational(1)));
  EXPECT_FALSE(r.consumers[0].maximizes);
  EXPECT_EQ(r.consumers[0].better_alternative, std::optional<BundleSet>(1));
}

TEST(VerifyCbe, SingleConsumerZeroPrice) {
  Market market = Market::from_valuations({Valuation::additive({1, 1})});
  EXPECT_TRUE(verify_cbe(market, grand_to(2, 1, 0, Rational(0))).pass);
}

TEST(VerifyCbe, UnallocatedBundleBreaksClearance) {
  Market market = Market::from_valuations({Valuation::additive({1, 1})});
  Outcome o = grand_to(2, 1, 0, Rational(3));
  o.allocation[0] = 0;
  VerificationReport r = verify_cbe(market, o);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.cleared);
  EXPECT_EQ(r.unallocated, ItemSet{3});
}

TEST(VerifyCbe, MalformedOutcomeIsPrecondition) {
  Market market = Market::from_valuations({Valuation::additive({1, 1}), Valuation::additive({1, 1})});
  Outcome o = grand_to(2, 2, 0, Rational(1));
  o.allocation[1] = 1;
  EXPECT_THROW(verify_cbe(market, o), PreconditionError);
  Outcome bad = grand_to(2, 2, 0, Rational(-1));
  EXPECT_THROW(verify_cbe(market, bad), Error);
}

TEST(VerifyCe, CaseOneInstance) {
  Market market = Market::from_valuations(
      {Valuation::explicit_table(2, {0, 3, 0, rat(7, 2)}), Valuation::explicit_table(2, {0, 2, 3, rat(7, 2)})});
  VerificationReport r = verify_ce(market, {3, 2}, {1, 2});
  EXPECT_TRUE(r.pass) << r.summary();
  EXPECT_EQ(r.welfare, Rational(6));
}

TEST(VerifyCe, UnitPricesAdditive) {
  Market market = Market::from_valuations({Valuation::additive({2, 1}), Valuation::additive({1, 3})});
  EXPECT_TRUE(verify_ce(market, {1, 1}, {1, 2}).pass);
  EXPECT_FALSE(verify_ce(market, {1, 1}, {2, 1}).pass);
  EXPECT_FALSE(verify_ce(market, {0, 0}, {1, 2}).pass);
}

TEST(VerifyCe, NoCeOnComplementInstance) {
  Market market = prop22_market(rat(1, 10));
  for (int pa = 0; pa <= 4; ++pa) {
    for (int pb = 0; pb <= 4; ++pb) {
      for (ItemSet first = 0; first < 4; ++first) {
        ItemAllocation alloc = {first, 3 & ~first};
        EXPECT_FALSE(verify_ce(market, {rat(pa, 2), rat(pb, 2)}, alloc).pass);
      }
    }
  }
}

TEST(CeExists, Examples) {
  CeResult a = ce_exists(prop22_market(rat(1, 10)));
  EXPECT_FALSE(a.exists);
  EXPECT_EQ(a.fractional, rat(61, 20));
  EXPECT_EQ(a.integral, Rational(3));
  EXPECT_FALSE(ce_exists(ex81_market()).exists);
  Market additive = Market::from_valuations({Valuation::additive({2, 1}), Valuation::additive({1, 3})});
  CeResult c = ce_exists(additive);
  ASSERT_TRUE(c.exists);
  EXPECT_TRUE(verify_ce(additive, c.prices, c.allocation).pass);
}

TEST(CeExistsProperty, FirstWelfareTheorem) {
  testing::Gen gen(31);
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Market market = gen.explicit_market(gen.uniform_int(1, 3), gen.uniform_int(1, 3));
    CeResult c = ce_exists(market);
    EXPECT_EQ(c.exists, config_lp(market).integral_flag);
    if (!c.exists) continue;
    ++found;
    Outcome o = item_outcome(market.num_items(), c.prices, c.allocation);
    EXPECT_TRUE(testing::brute_is_cbe(market, o));
    EXPECT_EQ(allocation_welfare(market, c.allocation), testing::brute_welfare(market));
    std::vector<Rational> rich = max_revenue_ce_prices(market);
    EXPECT_TRUE(verify_ce(market, rich, c.allocation).pass);
    Rational rich_sum, base_sum;
    for (const auto& p : rich) rich_sum += p;
    for (const auto& p : c.prices) base_sum += p;
    EXPECT_GE(rich_sum, base_sum);
  }
  EXPECT_GT(found, 20);
}

TEST(VerifyProperty, AgreesWithBruteForceDefinition) {
  testing::Gen gen(32);
  int passes = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int m = gen.uniform_int(1, 4);
    const int n = gen.uniform_int(1, 3);
    Market market = gen.explicit_market(m, n);
    Outcome o;
    o.priced = gen.priced_bundling(m);
    o.allocation.assign(n, 0);
    for (int b = 0; b < o.priced.bundling.size(); ++b) o.allocation[gen.uniform_int(0, n - 1)] |= BundleSet{1} << b;
    VerificationReport r = verify_cbe(market, o);
    EXPECT_EQ(r.pass, testing::brute_is_cbe(market, o));
    EXPECT_EQ(r.pass, r.cleared && std::all_of(r.consumers.begin(), r.consumers.end(),
                                                [](const ConsumerCheck& c) { return c.maximizes; }));
    for (const auto& c : r.consumers) {
      if (c.better_alternative) EXPECT_FALSE(c.maximizes);
    }
    passes += r.pass ? 1 : 0;
  }
  EXPECT_GT(passes, 0);
}

TEST(CbeSearch, ComplementInstance) {
  CbeSearchResult r = cbe_search(prop22_market(rat(1, 10)));
  EXPECT_EQ(r.best_welfare, rat(21, 10));
  EXPECT_EQ(r.table.size(), 2u);
  EXPECT_EQ(r.witness.priced.bundling, Bundling::grand(2));
  EXPECT_EQ(r.witness.allocation[0], BundleSet{1});
}

TEST(CbeSearch, BudgetAdditiveInstance) {
  Market market = table1_market(rat(1, 100), rat(1, 100));
  CbeSearchResult r = cbe_search(market);
  EXPECT_EQ(r.best_welfare, Rational(4));
  bool via_a_bc = false;
  for (std::size_t idx : r.maximizers) {
    via_a_bc = via_a_bc || r.table[idx].bundling == Bundling{{1, 6}};
  }
  EXPECT_TRUE(via_a_bc);
}

TEST(CbeSearch, MultiUnitLowerBoundFamily) {
  const Rational eps = rat(1, 10);
  for (int m = 3; m <= 4; ++m) {
    Market market = thm42_market(m, eps);
    CbeSearchResult r = cbe_search(market);
    EXPECT_EQ(r.best_welfare, Rational(2) + Rational(2) * eps);
    for (const auto& rec : r.table) {
      if (!rec.ce) continue;
      ASSERT_TRUE(rec.equilibrium.has_value());
      const Outcome& o = *rec.equilibrium;
      EXPECT_EQ(o.items_of(0), market.all_items());
    }
  }
}

TEST(CbeSearchProperty, WitnessAndTableConsistency) {
  testing::Gen gen(33);
  for (int trial = 0; trial < 40; ++trial) {
    Market market = gen.explicit_market(gen.uniform_int(1, 4), gen.uniform_int(1, 3));
    CbeSearchResult r = cbe_search(market);
    EXPECT_TRUE(testing::brute_is_cbe(market, r.witness));
    EXPECT_EQ(r.witness.welfare(market), r.best_welfare);
    Rational best;
    for (const auto& rec : r.table) {
      if (rec.ce) {
        best = max(best, rec.induced_opt);
        ASSERT_TRUE(rec.equilibrium.has_value());
        EXPECT_TRUE(verify_cbe(market, *rec.equilibrium).pass);
      }
    }
    EXPECT_EQ(best, r.best_welfare);
    for (std::size_t idx : r.maximizers) EXPECT_EQ(r.table[idx].induced_opt, r.best_welfare);
    // Grand bundling always admits a CE.
    EXPECT_GE(r.best_welfare, welfare_opt(induced_market(market, Bundling::grand(market.num_items()))).value);
    SearchOptions par;
    par.jobs = 4;
    CbeSearchResult p = cbe_search(market, par);
    EXPECT_EQ(p.best_welfare, r.best_welfare);
    EXPECT_EQ(p.witness, r.witness);
    EXPECT_EQ(p.maximizers, r.maximizers);
  }
}

TEST(CbeSearch, ScaleGuard) {
  Market big = Market::from_valuations({Valuation::additive(std::vector<Rational>(8, Rational(1)))});
  EXPECT_THROW(cbe_search(big), ScaleGuardError);
}

}  // namespace
}  // namespace cbe
