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

#include "cbe/revenue_algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <map>
#include <string>
#include <utility>

#include "cbe/bounds.hpp"
#include "cbe/equilibrium.hpp"
#include "cbe/errors.hpp"
#include "cbe/lifting.hpp"
#include "cbe/linear_program.hpp"
#include "cbe/oracles.hpp"

namespace cbe {

namespace {

bool all_matroid(const Market& market) { return market.all_of_kind(ValuationKind::kMatroidRank); }

Rational price_sum(const std::vector<Rational>& prices, ItemSet s) {
  Rational total;
  for (int j : members(s)) total += prices[j];
  return total;
}

// Maximum-weight independent subset by the matroid greedy rule.
ItemSet heaviest_basis(const Valuation& v, ItemSet s) {
  const Matroid& matroid = *v.matroid();
  std::vector<int> order = members(s);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v.weights()[a] > v.weights()[b]; });
  ItemSet basis = 0;
  for (int j : order) {
    if (v.weights()[j].sign() > 0 && matroid.is_independent(basis | singleton(j))) basis |= singleton(j);
  }
  return basis;
}

struct Score {
  Rational welfare;
  int sold = 0;
};

bool better(const Score& a, const Score& b) {
  return a.welfare > b.welfare || (a.welfare == b.welfare && a.sold > b.sold);
}

// Lexicographically best allocation of the reserve market: maximum welfare,
// then the most items held by real consumers. The extra consumer is last.
ItemAllocation lexicographic_allocation(const Market& aug) {
  const int n = aug.num_consumers();
  const int m = aug.num_items();
  const std::size_t count = std::size_t{1} << m;
  Budget{}.require(static_cast<double>(n) * std::pow(3.0, m), "reserve allocation");
  std::vector<std::vector<Score>> best(n, std::vector<Score>(count));
  for (std::size_t t = 0; t < count; ++t) best[n - 1][t] = Score{aug.value(n - 1, static_cast<ItemSet>(t)), 0};
  for (int i = n - 2; i >= 0; --i) {
    for (std::size_t t = 0; t < count; ++t) {
      const ItemSet items = static_cast<ItemSet>(t);
      Score b = best[i + 1][t];
      for_each_subset(items, [&](ItemSet sub) {
        const Score& rest = best[i + 1][items & ~sub];
        Score cand{aug.value(i, sub) + rest.welfare, rest.sold + cardinality(sub)};
        if (better(cand, b)) b = std::move(cand);
      });
      best[i][t] = std::move(b);
    }
  }
  ItemAllocation alloc(n, 0);
  ItemSet left = aug.all_items();
  for (int i = 0; i < n - 1; ++i) {
    const Score target = best[i][left];
    ItemSet chosen = 0;
    bool found = false;
    for_each_subset(left, [&](ItemSet sub) {
      if (found) return;
      const Score& rest = best[i + 1][left & ~sub];
      if (aug.value(i, sub) + rest.welfare == target.welfare && rest.sold + cardinality(sub) == target.sold) {
        chosen = sub;
        found = true;
      }
    });
    check_invariant(found, "lexicographic reconstruction failed");
    alloc[i] = chosen;
    left &= ~chosen;
  }
  alloc[n - 1] = left;
  return alloc;
}

struct ReserveCe {
  std::vector<Rational> prices;
  // Real consumers (in the order given) followed by the extra consumer.
  ItemAllocation allocation;
};

ReserveCe reserve_ce(const Market& market, const std::vector<int>& consumers, const Rational& q) {
  Market aug = reserve_market(market, consumers, q);
  CeResult ce = ce_exists(aug);
  check_invariant(ce.exists, "reserve market has no CE");
  ReserveCe out{ce.prices, lexicographic_allocation(aug)};
  const int extra = aug.num_consumers() - 1;
  for (int j : members(out.allocation[extra])) out.prices[j] = q;
  VerificationReport report = verify_ce(aug, out.prices, out.allocation);
  check_invariant(report.pass, "reserve CE fails verification: " + report.summary());
  for (const Rational& p : out.prices) check_invariant(p >= q, "item priced below the reserve");
  return out;
}

Construction finish(const Market& market, Outcome outcome, const Rational& opt, std::string path) {
  VerificationReport report = verify_cbe(market, outcome);
  check_invariant(report.pass, path + " output is not a CBE: " + report.summary());
  check_invariant(report.revenue <= report.welfare, "revenue exceeds welfare");
  Construction c;
  c.outcome = std::move(outcome);
  c.welfare = report.welfare;
  c.revenue = report.revenue;
  c.opt = opt;
  c.path = std::move(path);
  return c;
}

// Highest-revenue bundle prices making `allocation` a partial CBE for
// `consumers`, if any exist.
std::optional<PartialCbe> max_revenue_partial(const Market& market, const std::vector<int>& consumers,
                                              const Bundling& bundling, const BundleAllocation& allocation) {
  const int k = bundling.size();
  std::map<std::vector<int>, Rational> rows;
  for (int c : consumers) {
    const BundleSet own = allocation[c];
    const Rational& held = market.value(c, bundling.items_of(own));
    for (BundleSet t = 0; t < (BundleSet{1} << k); ++t) {
      std::vector<int> coeff(k, 0);
      for (int b : members(t)) coeff[b] += 1;
      for (int b : members(own)) coeff[b] -= 1;
      Rational rhs = market.value(c, bundling.items_of(t)) - held;
      if (std::all_of(coeff.begin(), coeff.end(), [](int x) { return x == 0; })) {
        if (rhs.sign() > 0) return std::nullopt;
        continue;
      }
      auto [it, inserted] = rows.emplace(std::move(coeff), rhs);
      if (!inserted && rhs > it->second) it->second = rhs;
    }
  }
  LinearProgram lp;
  lp.sense = Sense::kMaximize;
  for (int b = 0; b < k; ++b) lp.add_variable(Rational(1));
  for (const auto& [coeff, rhs] : rows) {
    std::vector<Rational> row(coeff.begin(), coeff.end());
    lp.add_constraint(std::move(row), Relation::kGreaterEqual, rhs);
  }
  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::kOptimal) return std::nullopt;
  check_invariant(verify_certificates(lp, sol).ok(), "partial pricing LP certificate failed");
  PartialCbe out;
  out.priced = PricedBundling{bundling, sol.primal};
  out.allocation = allocation;
  out.consumers = consumers;
  check_invariant(is_partial_cbe(market, out), "LP prices do not form a partial CBE");
  return out;
}

void add_bundle(PartialCbe& partial, int consumer, ItemSet bundle, const Rational& price) {
  if (bundle == 0) return;
  partial.allocation[consumer] = singleton(partial.priced.bundling.size());
  partial.priced.bundling.bundles.push_back(bundle);
  partial.priced.prices.push_back(price);
}

}  // namespace

Market matroid_view(const Market& market) {
  const int m = market.num_items();
  std::vector<Consumer> list = market.consumers();
  for (auto& c : list) {
    if (c.valuation.kind() == ValuationKind::kUnitDemand) {
      c.valuation = Valuation::matroid_rank(Matroid::uniform(m, 1), c.valuation.weights());
    } else if (c.valuation.kind() == ValuationKind::kAdditive) {
      c.valuation = Valuation::matroid_rank(Matroid::uniform(m, m), c.valuation.weights());
    }
  }
  return Market(market.labels(), std::move(list));
}

Market reserve_market(const Market& market, const std::vector<int>& consumers, const Rational& q) {
  std::vector<Consumer> list;
  for (int i : consumers) list.push_back(market.consumers()[i]);
  list.push_back(Consumer{"reserve", Valuation::additive(std::vector<Rational>(market.num_items(), q))});
  return Market(market.labels(), std::move(list));
}

ReserveEquilibrium reserve_equilibrium(const Market& input) {
  const Market market = matroid_view(input);
  check_precondition(all_matroid(market), "reserve_equilibrium needs weighted matroid rank valuations");
  const int n = market.num_consumers();
  const int m = market.num_items();
  WelfareResult opt = welfare_opt(market);
  ReserveEquilibrium re;
  re.opt = opt.value;
  if (opt.value.is_zero()) {
    CeResult ce = ce_exists(market);
    check_invariant(ce.exists, "matroid market without a CE");
    re.prices = ce.prices;
    re.allocation = ce.allocation;
    ItemSet sold = 0;
    for (ItemSet s : re.allocation) sold |= s;
    re.unallocated = cardinality(market.all_items() & ~sold);
    re.bound_holds = true;
    return re;
  }
  // Per-item contributions of the optimum, binned from OPT / 2m upward.
  const Rational floor = opt.value / Rational(2 * m);
  std::map<int, Rational> totals;
  std::vector<std::pair<int, Rational>> pieces;  // (bin, weight) per kept item
  std::vector<std::vector<int>> bin_items(n, std::vector<int>(m, -1));
  Rational sum;
  for (int i = 0; i < n; ++i) {
    const Valuation& v = market.valuation(i);
    ItemSet basis = heaviest_basis(v, opt.allocation[i]);
    Rational part;
    for (int j : members(basis)) part += v.weights()[j];
    check_invariant(part == v.value(opt.allocation[i]), "greedy basis misses the set value");
    for (int j : members(basis)) {
      const Rational& w = v.weights()[j];
      if (w < floor) continue;
      int b = 0;
      Rational upper = floor * Rational(2);
      while (w >= upper) {
        upper *= Rational(2);
        ++b;
      }
      bin_items[i][j] = b;
      totals[b] += w;
      sum += w;
    }
  }
  check_invariant(sum * Rational(2) >= opt.value, "per-item filtering lost more than half of OPT");
  int chosen = -1;
  Rational chosen_total;
  for (const auto& [b, total] : totals) {
    if (chosen < 0 || total > chosen_total) {
      chosen = b;
      chosen_total = total;
    }
  }
  std::optional<Rational> q;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (bin_items[i][j] != chosen) continue;
      ++re.kept_items;
      const Rational& w = market.valuation(i).weights()[j];
      if (!q || w < *q) q = w;
    }
  }
  re.q = *q;
  check_invariant(Rational(2) * re.q * Rational(re.kept_items) >= chosen_total, "bin value chain fails");
  check_invariant(within_log_factor(chosen_total, opt.value, Rational(2), Rational(m)),
                  "heaviest bin below OPT / (2 (log2 m + 2))");

  std::vector<int> everyone(n);
  for (int i = 0; i < n; ++i) everyone[i] = i;
  ReserveCe ce = reserve_ce(market, everyone, re.q);
  re.prices = ce.prices;
  re.allocation.assign(ce.allocation.begin(), ce.allocation.begin() + n);
  re.unallocated = cardinality(ce.allocation[n]);
  int sold = 0;
  for (int i = 0; i < n; ++i) {
    sold += cardinality(re.allocation[i]);
    re.revenue += price_sum(re.prices, re.allocation[i]);
  }
  check_invariant(2 * sold >= re.kept_items, "reserve CE sells fewer than half the kept items");
  re.bound_holds = within_log_factor(re.revenue, opt.value, Rational(re.constant), Rational(m));
  check_invariant(re.bound_holds, "reserve CE revenue below its guarantee");
  return re;
}

Construction uniform_matroid_revenue_cbe(const Market& input, const LiftOptions& lift) {
  const Market market = matroid_view(input);
  check_precondition(all_matroid(market), "uniform_matroid_revenue_cbe needs weighted matroid rank valuations");
  for (const auto& c : market.consumers()) {
    check_precondition(c.valuation.matroid()->kind() == MatroidKind::kUniform,
                       "consumer " + c.name + " does not have a uniform matroid");
  }
  const int n = market.num_consumers();
  const int m = market.num_items();
  const ItemSet all = market.all_items();
  ReserveEquilibrium re = reserve_equilibrium(market);
  auto bound = [&](Construction c) {
    c.bound = "revenue >= OPT / (16 (log2 m + 2))";
    c.bound_holds = within_log_factor(c.revenue, re.opt, Rational(16), Rational(m));
    return c;
  };
  if (re.opt.is_zero()) return bound(finish(market, grand_bundle_outcome(market), re.opt, "zero-welfare"));
  auto rank_of = [&](int i) { return market.valuation(i).matroid()->uniform_rank(); };
  std::vector<int> exhausted, open;
  for (int i = 0; i < n; ++i) {
    (cardinality(re.allocation[i]) == rank_of(i) ? exhausted : open).push_back(i);
  }
  std::optional<Construction> best;
  auto keep = [&](Construction c) {
    if (!best || c.revenue > best->revenue) best = std::move(c);
  };

  if (!exhausted.empty()) {
    ReserveCe ce = reserve_ce(market, exhausted, re.q);
    PartialCbe partial;
    partial.allocation.assign(n, 0);
    partial.consumers = exhausted;
    ItemSet used = 0;
    int top = exhausted.front();
    for (std::size_t t = 0; t < exhausted.size(); ++t) {
      const int i = exhausted[t];
      check_invariant(cardinality(ce.allocation[t]) == rank_of(i), "extended reserve CE leaves a rank unexhausted");
      used |= ce.allocation[t];
      if (rank_of(i) > rank_of(top)) top = i;
    }
    const ItemSet rest = all & ~used;
    for (std::size_t t = 0; t < exhausted.size(); ++t) {
      const int i = exhausted[t];
      add_bundle(partial, i, ce.allocation[t] | (i == top ? rest : 0), price_sum(ce.prices, ce.allocation[t]));
    }
    std::string path = "exhausted-ranks";
    if (!is_partial_cbe(market, partial)) {
      partial = max_revenue_partial(market, exhausted, partial.priced.bundling, partial.allocation).value();
      path += " lp-prices";
    }
    keep(finish(market, lift_partial(market, partial, lift), re.opt, path));
  }
  if (!open.empty()) {
    ItemSet used = 0;
    for (int i : open) used |= re.allocation[i];
    const ItemSet rest = all & ~used;
    // Candidates for the merged bundle: the largest v_i(W_i ∪ T) first.
    std::vector<int> order = open;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return market.value(a, re.allocation[a] | rest) > market.value(b, re.allocation[b] | rest);
    });
    for (int top : order) {
      PartialCbe partial;
      partial.allocation.assign(n, 0);
      partial.consumers = open;
      for (int i : open) {
        if (i == top) {
          const ItemSet merged = re.allocation[i] | rest;
          add_bundle(partial, i, merged, market.value(i, merged));
        } else {
          add_bundle(partial, i, re.allocation[i], price_sum(re.prices, re.allocation[i]));
        }
      }
      std::string path = "open-ranks";
      if (!is_partial_cbe(market, partial)) {
        auto repriced = max_revenue_partial(market, open, partial.priced.bundling, partial.allocation);
        if (!repriced) continue;
        partial = std::move(*repriced);
        path += " lp-prices";
      }
      if (top != order.front()) path += " merged-into-" + market.consumers()[top].name;
      keep(finish(market, lift_partial(market, partial, lift), re.opt, path));
      break;
    }
  }
  check_invariant(best.has_value(), "no consumers in either rank class");
  return bound(std::move(*best));
}

Rational ExtraConsumerState::revenue() const {
  Rational total;
  for (const Rational& p : bundle_prices) total += p;
  return total;
}

ExtraConsumerCheck check_extra_consumer(const Market& input, const ExtraConsumerState& state) {
  const Market market = matroid_view(input);
  const int n = market.num_consumers();
  ExtraConsumerCheck check;
  const ItemSet all = market.all_items();
  for (int i = 0; i < n; ++i) {
    const Valuation& v = market.valuation(i);
    const Rational own = v.value(state.bundles[i]) - state.bundle_prices[i];
    for_each_subset(all, [&](ItemSet u) {
      if (v.value(u) - price_sum(state.item_prices, u) > own) check.profit = false;
      if (is_subset(u, state.bundles[i]) && v.matroid()->is_independent(u) &&
          price_sum(state.item_prices, u) > state.bundle_prices[i]) {
        check.bundle_prices = false;
      }
    });
  }
  for (int j = 0; j < market.num_items(); ++j) {
    if (state.item_prices[j] < state.q) check.reserve = false;
    if (contains(state.residual(), j) && state.item_prices[j] != state.q) check.reserve = false;
  }
  return check;
}

ExtraConsumerState extra_consumer_start(const Market& input) {
  const Market market = matroid_view(input);
  check_precondition(all_matroid(market), "extra_consumer_start needs weighted matroid rank valuations");
  const int n = market.num_consumers();
  for (int i = 1; i < n; ++i) {
    check_precondition(*market.valuation(i).matroid() == *market.valuation(0).matroid(),
                       "consumers do not share one matroid");
  }
  ReserveEquilibrium re = reserve_equilibrium(market);
  ExtraConsumerState state;
  state.item_prices = re.prices;
  state.q = re.q;
  ItemSet used = 0;
  for (int i = 0; i < n; ++i) {
    state.bundles.push_back(re.allocation[i]);
    state.bundle_prices.push_back(price_sum(re.prices, re.allocation[i]));
    state.ranks.push_back(market.valuation(i).matroid()->rank(re.allocation[i]));
    used |= re.allocation[i];
  }
  state.bundles.push_back(market.all_items() & ~used);
  if (re.opt.is_zero()) {
    state.q = Rational(0);
    for (int j : members(state.residual())) state.item_prices[j] = Rational(0);
  }
  check_invariant(check_extra_consumer(market, state).ok(), "starting state violates the extra-consumer properties");
  return state;
}

ExtraConsumerState extra_consumer_step(const Market& input, const ExtraConsumerState& state) {
  const Market market = matroid_view(input);
  check_precondition(state.residual() != 0 && state.q.sign() > 0, "step needs a nonempty residual and positive reserve");
  const int n = market.num_consumers();
  ExtraConsumerState next = state;
  ++next.steps;
  const Matroid& matroid = *market.valuation(0).matroid();
  for (int j : members(state.residual())) {
    for (int i = 0; i < n; ++i) {
      if (matroid.rank(state.bundles[i] | singleton(j)) != state.ranks[i]) continue;
      next.bundles[i] |= singleton(j);
      next.bundles[n] &= ~singleton(j);
      next.last_case = 1;
      check_invariant(check_extra_consumer(market, next).ok(), "absorbing step broke the extra-consumer properties");
      return next;
    }
  }
  int best_i = -1, best_j = -1;
  Rational best_w;
  for (int i = 0; i < n; ++i) {
    for (int j : members(state.residual())) {
      const Rational& w = market.valuation(i).weights()[j];
      if (best_i < 0 || w > best_w) {
        best_i = i;
        best_j = j;
        best_w = w;
      }
    }
  }
  check_invariant(best_w <= state.q, "residual weight exceeds the reserve");
  const ItemSet grown = state.bundles[best_i] | singleton(best_j);
  check_invariant(market.value(best_i, grown) == market.value(best_i, state.bundles[best_i]) + best_w,
                  "rank-raising item does not add its weight");
  next.bundles[best_i] = grown;
  next.bundles[n] &= ~singleton(best_j);
  next.bundle_prices[best_i] += best_w;
  next.ranks[best_i] += 1;
  next.item_prices[best_j] = best_w;
  next.q = best_w;
  for (int j : members(next.residual())) next.item_prices[j] = best_w;
  next.last_case = 2;
  check_invariant(check_extra_consumer(market, next).ok(), "rank-raising step broke the extra-consumer properties");
  return next;
}

Outcome extra_consumer_to_cbe(const Market& market, const ExtraConsumerState& state) {
  check_precondition(state.done(), "conversion needs an empty residual or zero reserve");
  const int n = market.num_consumers();
  Outcome out;
  out.allocation.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    if (state.bundles[i] == 0) continue;
    out.allocation[i] = singleton(out.priced.bundling.size());
    out.priced.bundling.bundles.push_back(state.bundles[i]);
    out.priced.prices.push_back(state.bundle_prices[i]);
  }
  const ItemSet residual = state.residual();
  if (residual != 0) {
    int sink = 0;
    Rational best_gain;
    for (int i = 0; i < n; ++i) {
      Rational gain = market.value(i, state.bundles[i] | residual) - market.value(i, state.bundles[i]);
      if (i == 0 || gain > best_gain) {
        sink = i;
        best_gain = std::move(gain);
      }
    }
    out.allocation[sink] |= singleton(out.priced.bundling.size());
    out.priced.bundling.bundles.push_back(residual);
    out.priced.prices.push_back(Rational(0));
  }
  VerificationReport report = verify_cbe(market, out);
  check_invariant(report.pass, "extra-consumer conversion is not a CBE: " + report.summary());
  return out;
}

Construction common_matroid_revenue_cbe(const Market& market) {
  const int m = market.num_items();
  ExtraConsumerState state = extra_consumer_start(market);
  const Rational start_revenue = state.revenue();
  const Rational opt = welfare_opt(market).value;
  while (!state.done()) {
    const Rational before = state.revenue();
    state = extra_consumer_step(market, state);
    check_invariant(state.revenue() >= before, "extra-consumer step lowered revenue");
    check_invariant(state.steps <= m + 1, "extra-consumer iteration exceeds m + 1 steps");
  }
  Construction c = finish(market, extra_consumer_to_cbe(market, state), opt, "steps=" + std::to_string(state.steps));
  check_invariant(c.revenue == state.revenue() && c.revenue >= start_revenue, "conversion changed the revenue");
  c.bound = "revenue >= OPT / (8 (log2 m + 2))";
  c.bound_holds = within_log_factor(c.revenue, opt, Rational(8), Rational(m));
  return c;
}

}  // namespace cbe
