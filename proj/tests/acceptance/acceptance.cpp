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

// Acceptance runner: every criterion prints one PASS/FAIL line. With
// `--criterion N` only that criterion runs; the exit code is 0 iff all run
// criteria pass.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cbe/bounds.hpp"
#include "cbe/equilibrium.hpp"
#include "cbe/errors.hpp"
#include "cbe/instances.hpp"
#include "cbe/lifting.hpp"
#include "cbe/lp_models.hpp"
#include "cbe/oracles.hpp"
#include "cbe/parallel.hpp"
#include "cbe/revenue_algorithms.hpp"
#include "cbe/welfare_algorithms.hpp"
#include "support/generators.hpp"

namespace cbe {
namespace {

int jobs() { return static_cast<int>(std::max(1U, std::thread::hardware_concurrency())); }

// Collects failures across (possibly concurrent) checks; keeps the first few messages.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    std::lock_guard<std::mutex> lock(state_->mu);
    ++state_->checks;
    if (ok) return;
    ++state_->failures;
    if (state_->messages.size() < 3) state_->messages.push_back(what);
  }
  bool pass() const { return state_->failures == 0; }
  std::string detail() const {
    std::ostringstream os;
    os << state_->checks << " checks";
    if (state_->failures > 0) {
      os << ", " << state_->failures << " failed";
      for (const auto& m : state_->messages) os << "; " << m;
    }
    return os.str();
  }

 private:
  struct State {
    std::mutex mu;
    long checks = 0;
    long failures = 0;
    std::vector<std::string> messages;
  };
  std::shared_ptr<State> state_ = std::make_shared<State>();
};

std::string eq_msg(const std::string& what, const Rational& expected, const Rational& actual) {
  return what + " expected " + expected.to_string() + " got " + actual.to_string();
}

void check_eq(Tally& t, const std::string& what, const Rational& expected, const Rational& actual) {
  t.check(expected == actual, eq_msg(what, expected, actual));
}

// Runs f and records an exception as a failure.
template <typename F>
void guarded(Tally& t, const std::string& what, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    t.check(false, what + ": " + e.what());
  }
}

// Every welfare-optimal assignment of the induced bundles gives consumer 0 everything.
bool all_optima_to_first(const Market& induced, const Rational& induced_opt) {
  const int n = induced.num_consumers();
  const int k = induced.num_items();
  std::vector<int> owner(k, 0);
  while (true) {
    ItemAllocation alloc(n, 0);
    for (int b = 0; b < k; ++b) alloc[owner[b]] |= singleton(b);
    if (allocation_welfare(induced, alloc) == induced_opt && alloc[0] != induced.all_items()) return false;
    int b = 0;
    while (b < k && ++owner[b] == n) owner[b++] = 0;
    if (b == k) return true;
  }
}

Tally criterion_1() {
  Tally t;
  const Rational eps = rat(1, 10);
  Market market = prop22_market(eps);
  check_eq(t, "welfare_opt", 3, welfare_opt(market).value);
  check_eq(t, "brute welfare", 3, testing::brute_welfare(market));
  check_eq(t, "config_lp fractional", rat(61, 20), config_lp(market).fractional);
  t.check(!ce_exists(market).exists, "ce_exists should be false");
  CbeSearchResult s = cbe_search(market);
  check_eq(t, "cbe_search best", rat(21, 10), s.best_welfare);
  t.check(s.witness.priced.bundling == Bundling::grand(2) && s.witness.allocation[0] == 1,
          "best CBE is not the grand bundle to consumer 1");
  t.check(testing::brute_is_cbe(market, s.witness), "witness fails the definition");
  const Rational ratio = Rational(3) / s.best_welfare;
  check_eq(t, "ratio", rat(10, 7), ratio);
  t.check(ratio < rat(3, 2), "ratio not below 3/2");
  return t;
}

Tally criterion_2() {
  Tally t;
  const Rational eps = rat(1, 10);
  for (int m = 3; m <= 5; ++m) {
    const std::string tag = "m=" + std::to_string(m) + " ";
    Market market = thm42_market(m, eps);
    CbeSearchResult s = cbe_search(market);
    for (const auto& rec : s.table) {
      if (!rec.ce) continue;
      t.check(all_optima_to_first(induced_market(market, rec.bundling), rec.induced_opt),
              tag + "a CE-admitting bundling has an optimum not giving consumer 1 all units");
      t.check(rec.equilibrium && rec.equilibrium->items_of(0) == market.all_items(),
              tag + "equilibrium does not give consumer 1 all units");
    }
    check_eq(t, tag + "best welfare", Rational(2) + Rational(2) * eps, s.best_welfare);
    Rational formula = Rational(1) + eps;
    for (int i = 2; i <= m; ++i) formula += Rational(1, i);
    check_eq(t, tag + "welfare_opt", formula, welfare_opt(market).value);
  }
  return t;
}

Tally criterion_3() {
  Tally t;
  const Rational eps = rat(1, 100), delta = rat(1, 100);
  Market market = table1_market(eps, delta);
  const Rational opt = welfare_opt(market).value;
  check_eq(t, "welfare_opt", Rational(5) - eps / Rational(2) - delta, opt);
  check_eq(t, "config_lp fractional", Rational(5) - eps / Rational(2), config_lp(market).fractional);
  CbeSearchResult s = cbe_search(market);
  check_eq(t, "cbe_search best", 4, s.best_welfare);
  // Ratio at shrinking parameters moves toward 5/4.
  Rational prev_gap;
  for (int k = 0; k < 6; ++k) {
    const Rational e = eps / Rational(1L << k), d = delta / Rational(1L << k);
    Market mk = table1_market(e, d);
    const Rational ratio = welfare_opt(mk).value / cbe_search(mk).best_welfare;
    const Rational gap = (ratio - rat(5, 4)).abs();
    t.check(gap <= e + d, "ratio gap above eps + delta at step " + std::to_string(k));
    if (k > 0) t.check(gap < prev_gap, "ratio gap not shrinking at step " + std::to_string(k));
    prev_gap = gap;
  }
  return t;
}

Tally criterion_4() {
  Tally t;
  Cap2Result a = cap2_lp(ex81_market());
  check_eq(t, "ex81 fractional", 11, a.fractional);
  check_eq(t, "ex81 integral", 8, a.integral);
  Cap2Result b = cap2_lp(ex82_market());
  check_eq(t, "ex82 fractional", 4, b.fractional);
  check_eq(t, "ex82 integral", rat(7, 2), b.integral);
  std::atomic<int> integral{0};
  parallel_for(60, jobs(), [&](std::size_t k) {
    const std::uint64_t seed = 1000 + k;
    const int m = 1 + static_cast<int>(k % 4);
    const int n = 2 + static_cast<int>(k % 2);
    guarded(t, "superadditive seed " + std::to_string(seed), [&] {
      Market market = gen_random(RandomClass::kSuperadditive, m, n, seed);
      Cap2Result r = cap2_lp(market);
      if (!r.integral_flag) return;
      ++integral;
      Outcome o = nlpe_to_cbe(market, r);
      t.check(verify_cbe(market, o).pass && testing::brute_is_cbe(market, o), "nlpe_to_cbe output not a CBE");
      check_eq(t, "nlpe welfare", welfare_opt(market).value, o.welfare(market));
    });
  });
  t.check(integral.load() >= 50, "fewer than 50 cap2-integral superadditive instances: " + std::to_string(integral.load()));
  return t;
}

Tally criterion_5() {
  Tally t;
  std::vector<Valuation> grid;
  for (int a = 0; a <= 8; ++a) {
    for (int b = 0; b <= 8; ++b) {
      for (int ab = std::max(a, b); ab <= 8; ++ab) {
        grid.push_back(Valuation::explicit_table(2, {0, rat(a, 2), rat(b, 2), rat(ab, 2)}));
      }
    }
  }
  std::vector<bool> sub(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) sub[k] = check_subadditive(grid[k]);
  parallel_for(grid.size() * grid.size(), jobs(), [&](std::size_t idx) {
    const std::size_t x = idx / grid.size(), y = idx % grid.size();
    guarded(t, "grid " + std::to_string(x) + "," + std::to_string(y), [&] {
      Market market = Market::from_valuations({grid[x], grid[y]});
      Construction c = two_consumer_cbe(market);
      const Rational opt = testing::brute_welfare(market);
      t.check(verify_cbe(market, c.outcome).pass, "grid output not a CBE");
      t.check(c.welfare * Rational(3) >= opt * Rational(2), "grid welfare below 2/3 OPT");
      if (sub[x] && sub[y]) t.check(c.welfare == opt, "subadditive grid pair not efficient");
    });
  });
  parallel_for(200, jobs(), [&](std::size_t k) {
    guarded(t, "random two-consumer " + std::to_string(k), [&] {
      testing::Gen gen(5000 + k);
      Market market = gen.explicit_market(gen.uniform_int(1, 5), 2);
      Construction c = two_consumer_cbe(market);
      const Rational opt = welfare_opt(market).value;
      t.check(verify_cbe(market, c.outcome).pass, "random output not a CBE");
      t.check(c.welfare * Rational(3) >= opt * Rational(2), "random welfare below 2/3 OPT");
      if (check_subadditive(market.valuation(0)) && check_subadditive(market.valuation(1))) {
        t.check(c.welfare == opt, "subadditive random pair not efficient");
      }
    });
  });
  return t;
}

Tally criterion_6() {
  Tally t;
  DemandAudit audit;
  parallel_for(200, jobs(), [&](std::size_t k) {
    guarded(t, "multi-unit " + std::to_string(k), [&] {
      const int m = 1 + static_cast<int>(k % 12);
      const int n = 1 + static_cast<int>((k / 12) % 6);
      Market market = gen_random(RandomClass::kMultiUnit, m, n, 6000 + k);
      MultiUnitOptions options;
      options.audit = &audit;
      Construction c = multiunit_cbe(market, options);
      const Rational opt = welfare_opt(market).value;
      t.check(verify_cbe(market, c.outcome).pass, "multi-unit output not a CBE");
      t.check(within_log_factor(c.welfare, opt, Rational(20), Rational(market.mu())),
              "multi-unit welfare below OPT/(20(log2 mu + 2))");
    });
  });
  t.check(audit.queries.load() > 0, "no demand queries audited");
  t.check(audit.mismatches.load() == 0, std::to_string(audit.mismatches.load()) + " demand mismatches");
  return t;
}

// Best allocation with every nonempty part of size in [k, 2k).
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

Tally criterion_7() {
  Tally t;
  parallel_for(60, jobs(), [&](std::size_t idx) {
    guarded(t, "general " + std::to_string(idx), [&] {
      testing::Gen gen(7000 + idx);
      const int m = 1 + static_cast<int>(idx % 6);
      const int n = 1 + static_cast<int>(idx % 4);
      Market market = gen.explicit_market(m, n, 6);
      for (int k = 1; k <= m; ++k) {
        AkTrace trace = greedy_ak(market, k);
        const Rational w = brute_restricted(market, k);
        check_eq(t, "restricted W", w, trace.w);
        t.check(trace.welfare * Rational(2 * k) >= w, "greedy below W/2k");
      }
      WelfareResult opt = welfare_opt(market);
      if (!opt.value.is_zero()) {
        LogBinResult lb = log_bin(market, opt.allocation);
        Construction s = general_sqrt(market, lb.filtered, lb.threshold);
        t.check(verify_cbe(market, s.outcome).pass, "general_sqrt output not a CBE");
        const Rational total = lb.output_welfare;
        // revenue >= total / (4 sqrt(r) + 4)  <=>  sqrt(r) >= (total / revenue - 4) / 4.
        t.check(s.revenue.sign() > 0 && sqrt_at_least(Rational(lb.r), (total / s.revenue - Rational(4)) / Rational(4)),
                "general_sqrt aggregate price below the bound");
      }
      Construction g = general_m23(market);
      t.check(verify_cbe(market, g.outcome).pass && testing::brute_is_cbe(market, g.outcome),
              "general_m23 output not a CBE");
      t.check(g.bound_holds, "general_m23 bound: " + g.bound);
    });
  });
  return t;
}

Tally criterion_8() {
  Tally t;
  parallel_for(200, jobs(), [&](std::size_t k) {
    guarded(t, "budget-additive " + std::to_string(k), [&] {
      const int m = 1 + static_cast<int>(k % 6);
      const int n = 1 + static_cast<int>((k / 6) % 4);
      Market market = gen_random(RandomClass::kBudgetAdditive, m, n, 8000 + k);
      const Rational opt = welfare_opt(market).value;
      GreedySplit g = budget_greedy(market);
      t.check(allocation_welfare(market, g.allocation) * Rational(4) >= opt, "greedy below OPT/4");
      for (int i : g.open) {
        for (int j : members(g.allocation[i])) {
          for (int other : g.open) {
            t.check(market.value(i, singleton(j)) >= market.value(other, singleton(j)), "claim part 2 fails");
          }
        }
      }
      Construction c = budget_additive_cbe(market);
      t.check(verify_cbe(market, c.outcome).pass, "budget-additive output not a CBE");
      t.check(within_log_factor(c.welfare, opt, Rational(32), Rational(m)),
              "welfare below OPT/(32(log2 m + 2))");
    });
  });
  return t;
}

Rational sum_over(const std::vector<Rational>& prices, ItemSet s) {
  Rational total;
  for (int j : members(s)) total += prices[j];
  return total;
}

bool extra_properties(const Market& market, const ExtraConsumerState& s) {
  const Market view = matroid_view(market);
  for (int i = 0; i < view.num_consumers(); ++i) {
    const Valuation& v = view.valuation(i);
    const Rational own = v.value(s.bundles[i]) - s.bundle_prices[i];
    for (ItemSet u = 0; u <= view.all_items(); ++u) {
      if (v.value(u) - sum_over(s.item_prices, u) > own) return false;
      if (is_subset(u, s.bundles[i]) && v.matroid()->is_independent(u) && sum_over(s.item_prices, u) > s.bundle_prices[i]) {
        return false;
      }
    }
  }
  for (int j = 0; j < view.num_items(); ++j) {
    if (s.item_prices[j] < s.q) return false;
    if (contains(s.residual(), j) && s.item_prices[j] != s.q) return false;
  }
  return true;
}

Tally criterion_9() {
  Tally t;
  parallel_for(100, jobs(), [&](std::size_t k) {
    guarded(t, "uniform " + std::to_string(k), [&] {
      const int m = 1 + static_cast<int>(k % 5);
      Market market = gen_random(RandomClass::kMatroidUniform, m, 1 + static_cast<int>(k % 4), 9000 + k);
      Construction c = uniform_matroid_revenue_cbe(market);
      t.check(verify_cbe(market, c.outcome).pass, "uniform revenue output not a CBE");
      t.check(within_log_factor(c.revenue, welfare_opt(market).value, Rational(16), Rational(m)),
              "uniform revenue below OPT/(16(log2 m + 2))");
    });
  });
  parallel_for(100, jobs(), [&](std::size_t k) {
    guarded(t, "common " + std::to_string(k), [&] {
      const int m = 1 + static_cast<int>(k % 5);
      Market market = gen_random(RandomClass::kMatroidCommon, m, 1 + static_cast<int>(k % 4), 9500 + k);
      ExtraConsumerState s = extra_consumer_start(market);
      t.check(extra_properties(market, s), "extra-consumer properties fail at start");
      while (!s.done()) {
        s = extra_consumer_step(market, s);
        t.check(extra_properties(market, s), "extra-consumer properties fail after a step");
        if (s.steps > m + 1) break;
      }
      t.check(s.steps <= m + 1, "iteration exceeds m + 1 steps");
      Construction c = common_matroid_revenue_cbe(market);
      t.check(verify_cbe(market, c.outcome).pass, "common revenue output not a CBE");
      t.check(within_log_factor(c.revenue, welfare_opt(market).value, Rational(8), Rational(m)),
              "common revenue below OPT/(8(log2 m + 2))");
    });
  });
  return t;
}

Tally criterion_10() {
  Tally t;
  for (int n = 1; n <= 5; ++n) {
    Market market = revenue_lb_market(n);
    SearchOptions o;
    o.with_revenue = true;
    CbeSearchResult s = cbe_search(market, o);
    Rational harmonic;
    for (int i = 1; i <= n; ++i) harmonic += Rational(1, i);
    check_eq(t, "n=" + std::to_string(n) + " OPT", harmonic, welfare_opt(market).value);
    t.check(s.best_revenue.has_value() && *s.best_revenue <= Rational(2),
            "n=" + std::to_string(n) + " max CBE revenue above 1 + max v");
  }
  return t;
}

Tally criterion_11() {
  Tally t;
  for (int n = 2; n <= 8; ++n) {
    std::vector<Rational> values = myerson_values(n);
    for (const Rational& cap : {Rational(0), rat(1, 4), rat(1, 2), rat(3, 4), Rational(1)}) {
      MenuMechanism menu = menu_lp(values, cap);
      const std::string tag = "n=" + std::to_string(n) + " cap=" + cap.to_string();
      t.check(menu_is_valid(menu), tag + " menu invalid");
      t.check(menu.revenue <= cap / Rational(n - 1), tag + " revenue above cap/(n-1)");
      if (cap == Rational(1)) {
        check_eq(t, tag + " revenue", Rational(1, n), menu.revenue);
        Rational oracle;
        for (std::size_t k = 0; k < values.size(); ++k) {
          oracle = max(oracle, values[k] * Rational(static_cast<long>(k + 1)) / Rational(static_cast<long>(values.size())));
        }
        check_eq(t, tag + " reserve oracle", oracle, menu.revenue);
      }
    }
  }
  return t;
}

Tally criterion_12() {
  Tally t;
  parallel_for(500, jobs(), [&](std::size_t k) {
    guarded(t, "lift " + std::to_string(k), [&] {
      testing::Gen gen(12000 + k);
      const int m = gen.uniform_int(1, 4);
      const int n = gen.uniform_int(1, 3);
      Market market = gen.explicit_market(m, n);
      PricedBundling pb = gen.priced_bundling(m, 3);
      LiftResult r = fgl_lift(market, pb);
      LiftCheck c = check_lift(market, pb, r);
      t.check(c.ok(), "fgl_lift properties fail");
      for (int i = 0; i < n; ++i) {
        const Rational payoff = market.value(i, r.priced.bundling.items_of(r.allocation[i])) - r.priced.price_of(r.allocation[i]);
        t.check(payoff == testing::brute_best_payoff(market.valuation(i), r.priced), "lifted allocation not a demand set");
      }
      PricedBundling low = pb;
      for (auto& p : low.prices) p = p / Rational(4);
      if (n >= 2 && is_high_demand(market, low)) {
        Outcome o = lift_high_demand(market, low);
        t.check(testing::brute_is_cbe(market, o), "high-demand lift not a CBE");
        t.check(o.welfare(market) >= low.total_price(), "high-demand lift welfare below aggregate price");
      }
      const int i = gen.uniform_int(0, n - 1);
      PartialCbe partial{pb, BundleAllocation(n, 0), {i}};
      partial.allocation[i] = demand_query(market.valuation(i), pb).maximizers.back();
      if (is_partial_cbe(market, partial)) {
        Outcome o = lift_partial(market, partial);
        t.check(testing::brute_is_cbe(market, o), "partial lift not a CBE");
        t.check(o.welfare(market) >= pb.price_of(partial.allocation[i]), "partial lift welfare below revenue");
      }
    });
  });
  return t;
}

Tally criterion_13() {
  Tally t;
  DemandAudit audit;
  parallel_for(300, jobs(), [&](std::size_t k) {
    guarded(t, "cross-oracle " + std::to_string(k), [&] {
      testing::Gen gen(13000 + k);
      const int m = gen.uniform_int(1, 6);
      PricedBundling pb = gen.priced_bundling(m, 3);
      std::vector<Rational> per_count(m + 1);
      for (int c = 1; c <= m; ++c) per_count[c] = per_count[c - 1] + gen.grid(2);
      for (const Valuation& v : {Valuation::additive(gen.weights(m)), Valuation::unit_demand(gen.weights(m)),
                                 Valuation::budget_additive(gen.weights(m), gen.grid(5)), Valuation::multi_unit(per_count)}) {
        FastDemand fast = demand_checked(v, pb, &audit);
        t.check(fast.payoff == testing::brute_best_payoff(v, pb), "fast demand payoff differs from brute force");
      }
      Market market = gen.explicit_market(gen.uniform_int(1, 4), gen.uniform_int(1, 3));
      ConfigLpResult config = config_lp(market);
      t.check(config.certificate.ok(), "config LP certificate: " + config.certificate.detail);
      const LinearProgram lp = config_lp_program(market);
      t.check(lp_solve(dual_program(lp)).value == config.fractional, "dual program value differs");
      Cap2Result cap = cap2_lp(market);
      t.check(cap.certificate.ok() && cap.slackness_holds, "cap2 certificate or slackness fails");
    });
  });
  t.check(audit.mismatches.load() == 0, "audited demand mismatches");
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; b <= 4; ++b) {
      for (int ab = std::max(a, b); ab <= 8; ++ab) {
        Valuation v = Valuation::explicit_table(2, {0, a, b, ab});
        t.check(check_subadditive(v) == check_gross_substitutes(v), "2-item subadditive and GS disagree");
      }
    }
  }
  return t;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Tally()> run;
};

}  // namespace
}  // namespace cbe

int main(int argc, char** argv) {
  using namespace cbe;
  const std::vector<Criterion> criteria = {
      {1, "two-item complement instance", criterion_1},
      {2, "multi-unit lower-bound family", criterion_2},
      {3, "budget-additive lower-bound table", criterion_3},
      {4, "CAP2 goldens and efficient CBE extraction", criterion_4},
      {5, "two-consumer sweep", criterion_5},
      {6, "multi-unit bound", criterion_6},
      {7, "general-market bounds", criterion_7},
      {8, "budget-additive bound", criterion_8},
      {9, "matroid revenue", criterion_9},
      {10, "revenue upper-bound family", criterion_10},
      {11, "single-bidder menu bound", criterion_11},
      {12, "lifting properties", criterion_12},
      {13, "cross-oracle identities", criterion_13},
  };
  int only = 0;
  for (int a = 1; a + 1 < argc; ++a) {
    if (std::string(argv[a]) == "--criterion") only = std::atoi(argv[a + 1]);
  }
  bool all_pass = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Tally t;
    try {
      t = c.run();
    } catch (const std::exception& e) {
      t.check(false, std::string("uncaught: ") + e.what());
    }
    all_pass = all_pass && t.pass();
    std::cout << (t.pass() ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << t.detail() << ")"
              << std::endl;
  }
  return all_pass ? 0 : 1;
}
