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

#include "cbe/welfare_algorithms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "cbe/bounds.hpp"
#include "cbe/equilibrium.hpp"
#include "cbe/errors.hpp"
#include "cbe/lp_models.hpp"

namespace cbe {

namespace {

Construction finish(const Market& market, Outcome outcome, const Rational& opt, std::string path) {
  VerificationReport report = verify_cbe(market, outcome);
  check_invariant(report.pass, path + " output is not a CBE: " + report.summary());
  Construction c;
  c.outcome = std::move(outcome);
  c.welfare = report.welfare;
  c.revenue = report.revenue;
  c.opt = opt;
  c.path = std::move(path);
  return c;
}

// Rewrites an outcome of the market induced by `base` in terms of items.
Outcome expand_outcome(const Bundling& base, const Outcome& induced) {
  Outcome out;
  for (ItemSet b : induced.priced.bundling.bundles) out.priced.bundling.bundles.push_back(base.items_of(b));
  out.priced.prices = induced.priced.prices;
  out.allocation = induced.allocation;
  return out;
}

// Grand bundle to the highest-value consumer at `price`.
Outcome grand_at(const Market& market, int winner, const Rational& price) {
  Outcome out;
  out.priced.bundling = Bundling::grand(market.num_items());
  out.priced.prices = {price};
  out.allocation.assign(market.num_consumers(), 0);
  out.allocation[winner] = 1;
  return out;
}

int best_grand_consumer(const Market& market) {
  int best = 0;
  for (int i = 1; i < market.num_consumers(); ++i) {
    if (market.value(i, market.all_items()) > market.value(best, market.all_items())) best = i;
  }
  return best;
}

bool lex_less(ItemSet a, ItemSet b) { return members(a) < members(b); }

// Consecutive unit ranges [start, start + size) as item masks.
ItemSet unit_range(int start, int size) { return full_set(start + size) & ~full_set(start); }

}  // namespace

Outcome grand_bundle_outcome(const Market& market) {
  int winner = best_grand_consumer(market);
  return grand_at(market, winner, market.value(winner, market.all_items()));
}

Construction two_consumer_cbe(const Market& market) {
  check_precondition(market.num_consumers() == 2, "two_consumer_cbe needs exactly two consumers");
  WelfareResult opt = welfare_opt(market);
  auto bound = [&](Construction c) {
    c.bound = "welfare >= (2/3) OPT";
    c.bound_holds = c.welfare * Rational(3) >= opt.value * Rational(2);
    return c;
  };
  const ItemSet all = market.all_items();
  if (opt.allocation[0] == 0 || opt.allocation[1] == 0) {
    int winner = best_grand_consumer(market);
    Outcome o = grand_at(market, winner, market.value(1 - winner, all));
    return bound(finish(market, o, opt.value, "grand-bundle-optimal"));
  }
  Bundling base{{opt.allocation[0], opt.allocation[1]}};
  Market induced = induced_market(market, base);
  const Valuation& x = induced.valuation(0);
  const Valuation& y = induced.valuation(1);
  const bool sub0 = check_subadditive(x), sub1 = check_subadditive(y);
  const bool super0 = check_superadditive(x), super1 = check_superadditive(y);

  if (sub0 && sub1) {
    CeResult ce = ce_exists(induced);
    check_invariant(ce.exists, "two-item subadditive market without a CE");
    Outcome o = expand_outcome(base, item_outcome(2, ce.prices, ce.allocation));
    Construction c = bound(finish(market, o, opt.value, "subadditive-ce"));
    check_invariant(c.welfare == opt.value, "subadditive two-consumer CBE is not efficient");
    return c;
  }
  if (super0 && super1) {
    Cap2Result cap = cap2_lp(induced);
    if (cap.integral_flag) {
      Outcome o = expand_outcome(base, nlpe_to_cbe(induced, cap));
      return bound(finish(market, o, opt.value, "superadditive-cap2"));
    }
    CbeSearchResult search = cbe_search(induced);
    return bound(finish(market, expand_outcome(base, search.witness), opt.value, "superadditive-search"));
  }

  std::optional<Construction> best;
  for (int first = 0; first < 2; ++first) {
    const int second = 1 - first;
    // Consumer `first` holds induced item `first` in the optimum.
    const Rational xa = induced.value(first, singleton(first));
    const Rational yb = induced.value(second, singleton(second));
    if (xa < yb) continue;
    const Rational total = xa + yb;
    const Rational xab = induced.value(first, 3);
    const Rational yab = induced.value(second, 3);
    Construction c;
    if (max(xab, yab) * Rational(3) >= total * Rational(2)) {
      int winner = best_grand_consumer(market);
      c = finish(market, grand_at(market, winner, market.value(1 - winner, all)), opt.value, "grand-bundle");
    } else {
      const bool first_super = first == 0 ? super0 : super1;
      const Rational third = total / Rational(3);
      std::vector<Rational> prices(2);
      std::string path;
      if (first_super) {
        prices[first] = xa;
        prices[second] = third;
        path = "case-1";
      } else {
        prices[first] = third;
        prices[second] = yb;
        path = "case-2";
      }
      ItemAllocation alloc(2);
      alloc[first] = singleton(first);
      alloc[second] = singleton(second);
      Outcome o = expand_outcome(base, item_outcome(2, prices, alloc));
      c = finish(market, o, opt.value, path);
    }
    if (!best || c.welfare > best->welfare) best = std::move(c);
  }
  check_invariant(best.has_value(), "no labeling with x_a >= y_b");
  return bound(std::move(*best));
}

Construction subadditive_n_over_2(const Market& market) {
  const int n = market.num_consumers();
  for (const auto& c : market.consumers()) {
    check_precondition(check_subadditive(c.valuation), "consumer " + c.name + " is not subadditive");
  }
  WelfareResult opt = welfare_opt(market);
  if (n == 1) {
    Construction c = finish(market, grand_bundle_outcome(market), opt.value, "single-consumer");
    c.bound = "welfare = OPT";
    c.bound_holds = c.welfare == opt.value;
    return c;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return market.value(a, opt.allocation[a]) > market.value(b, opt.allocation[b]);
  });
  const ItemSet first = opt.allocation[order[0]];
  const ItemSet rest = market.all_items() & ~first;
  Bundling base = (first == 0 || rest == 0) ? Bundling::grand(market.num_items()) : Bundling{{first, rest}};
  Market induced = induced_market(market, base);
  CeResult ce = ce_exists(induced);
  check_invariant(ce.exists, "two-bundle subadditive market without a CE");
  Outcome o = expand_outcome(base, item_outcome(base.size(), ce.prices, ce.allocation));
  Construction c = finish(market, o, opt.value, base.size() == 1 ? "grand-bundle" : "two-bundles");
  Rational top_two = market.value(order[0], opt.allocation[order[0]]) + market.value(order[1], opt.allocation[order[1]]);
  c.bound = "welfare >= v_1(O_1) + v_2(O_2) >= (2/n) OPT";
  c.bound_holds = c.welfare >= top_two && c.welfare * Rational(n) >= opt.value * Rational(2);
  return c;
}

namespace {

void audit_demands(const Market& market, const PricedBundling& pb, DemandAudit* audit) {
  if (audit == nullptr) return;
  for (const auto& c : market.consumers()) demand_checked(c.valuation, pb, audit);
}

// Splits `groups` consecutive groups into k bundles of groups/k groups, the
// last bundle taking the remainder; returns the group-index ranges.
std::vector<std::pair<int, int>> split_groups(int groups, int k) {
  std::vector<std::pair<int, int>> out;
  const int each = groups / k;
  for (int t = 0; t < k; ++t) out.emplace_back(t * each, t == k - 1 ? groups : (t + 1) * each);
  return out;
}

Rational default_epsilon(const Rational& v, const Rational& requested) {
  return requested.sign() > 0 ? requested : v / Rational(1024);
}

}  // namespace

Construction multiunit_cbe(const Market& market, const MultiUnitOptions& options) {
  check_precondition(market.all_of_kind(ValuationKind::kMultiUnit), "multiunit_cbe needs multi-unit valuations");
  const int m = market.num_items();
  WelfareResult opt = welfare_opt(market);
  auto bound = [&](Construction c) {
    c.bound = "welfare >= OPT / (20 (log2 mu + 2))";
    c.bound_holds = within_log_factor(c.welfare, opt.value, Rational(20), Rational(market.mu()));
    return c;
  };
  if (opt.value.is_zero()) return bound(finish(market, grand_bundle_outcome(market), opt.value, "zero-welfare"));
  LogBinResult lb = log_bin(market, opt.allocation, BinMode::kByValue);
  check_invariant(lb.guarantee_holds, "log binning guarantee failed");
  std::vector<int> survivors = lb.survivors;
  std::stable_sort(survivors.begin(), survivors.end(), [&](int a, int b) {
    return cardinality(lb.filtered[a]) > cardinality(lb.filtered[b]);
  });
  const int n_prime = lb.r;
  const Rational v = lb.threshold;
  if (n_prime == 1) return bound(finish(market, grand_bundle_outcome(market), opt.value, "single-survivor"));

  const int k = n_prime / 2;
  const Rational eps = default_epsilon(v, options.epsilon);
  check_precondition(eps < v, "epsilon must be below the bin value");
  check_precondition(Rational(k) * (v - eps) * Rational(10) >= Rational(2) * v * Rational(2 * k + 1),
                     "epsilon too large for the aggregate-price chain");
  PricedBundling pb;
  for (auto [lo, hi] : split_groups(m, k)) {
    pb.bundling.bundles.push_back(unit_range(lo, hi - lo));
    pb.prices.push_back(v - eps);
  }
  const int next_size = cardinality(lb.filtered[survivors[k]]);
  for (ItemSet b : pb.bundling.bundles) {
    check_invariant(cardinality(b) >= next_size, "bundle smaller than the (k+1)-th surviving part");
  }
  check_invariant(is_high_demand(market, pb), "equal-size bundling is not high-demand");
  audit_demands(market, pb, options.audit);
  Outcome out = lift_high_demand(market, pb, options.lift);
  audit_demands(market, out.priced, options.audit);
  Construction c = bound(finish(market, out, opt.value, "k=" + std::to_string(k)));
  check_invariant(c.welfare >= pb.total_price(), "multi-unit welfare below the aggregate price");
  return c;
}

std::vector<int> prebundle_sizes(int m, int n) {
  const int q = n * n;
  if (m < q) return std::vector<int>(m, 1);
  std::vector<int> sizes(q, m / q);
  sizes.back() += m % q;
  return sizes;
}

Construction multiunit_value_query_mode(const Market& market, const MultiUnitOptions& options) {
  check_precondition(market.all_of_kind(ValuationKind::kMultiUnit),
                     "multiunit_value_query_mode needs multi-unit valuations");
  const int n = market.num_consumers();
  const int m = market.num_items();
  WelfareResult opt = welfare_opt(market);
  auto bound = [&](Construction c) {
    c.bound = "welfare >= OPT / (40 (log2 mu + 2))";
    c.bound_holds = within_log_factor(c.welfare, opt.value, Rational(40), Rational(market.mu()));
    return c;
  };
  if (opt.value.is_zero()) return bound(finish(market, grand_bundle_outcome(market), opt.value, "zero-welfare"));

  const std::vector<int> sizes = prebundle_sizes(m, n);
  const int q = static_cast<int>(sizes.size());
  const int regular = q - 1;
  const int s = sizes.front();
  const int last = sizes.back();
  // best[i][r][l]: welfare of consumers i.. with r regular groups and the last
  // group (l = 1) still available; values only read at group granularity.
  auto units = [&](int r, int l) { return r * s + l * last; };
  std::vector<std::vector<std::array<Rational, 2>>> best(n + 1, std::vector<std::array<Rational, 2>>(regular + 1));
  for (int i = n - 1; i >= 0; --i) {
    const auto& f = market.valuation(i).per_count();
    for (int r = 0; r <= regular; ++r) {
      for (int l = 0; l < 2; ++l) {
        Rational b;
        for (int c = 0; c <= r; ++c) {
          for (int t = 0; t <= l; ++t) b = max(b, f[units(c, t)] + best[i + 1][r - c][l - t]);
        }
        best[i][r][l] = b;
      }
    }
  }
  ItemAllocation grouped(n, 0);
  {
    int r = regular, l = 1, next = 0;
    for (int i = 0; i < n; ++i) {
      const auto& f = market.valuation(i).per_count();
      bool done = false;
      for (int c = 0; c <= r && !done; ++c) {
        for (int t = 0; t <= l && !done; ++t) {
          if (f[units(c, t)] + best[i + 1][r - c][l - t] != best[i][r][l]) continue;
          grouped[i] = unit_range(next, units(c, t));
          next += units(c, t);
          r -= c;
          l -= t;
          done = true;
        }
      }
    }
  }
  LogBinResult lb = log_bin(market, grouped, BinMode::kByValue);
  std::vector<int> survivors = lb.survivors;
  std::stable_sort(survivors.begin(), survivors.end(), [&](int a, int b) {
    return cardinality(lb.filtered[a]) > cardinality(lb.filtered[b]);
  });
  const Rational v = lb.threshold;
  if (lb.r <= 1) return bound(finish(market, grand_bundle_outcome(market), opt.value, "single-survivor"));
  const Rational eps = default_epsilon(v, options.epsilon);
  check_precondition(eps < v, "epsilon must be below the bin value");
  std::vector<int> offsets(q + 1, 0);
  for (int g = 0; g < q; ++g) offsets[g + 1] = offsets[g] + sizes[g];
  PricedBundling pb;
  int k = lb.r / 2;
  for (; k >= 1; --k) {
    pb = PricedBundling{};
    for (auto [lo, hi] : split_groups(q, k)) {
      pb.bundling.bundles.push_back(unit_range(offsets[lo], offsets[hi] - offsets[lo]));
      pb.prices.push_back(v - eps);
    }
    if (is_high_demand(market, pb)) break;
  }
  check_invariant(k >= 1, "no high-demand bundling over the pre-bundles");
  audit_demands(market, pb, options.audit);
  Outcome out = lift_high_demand(market, pb, options.lift);
  audit_demands(market, out.priced, options.audit);
  return bound(finish(market, out, opt.value, "prebundled k=" + std::to_string(k)));
}

Construction general_sqrt(const Market& market, const ItemAllocation& parts, const Rational& v,
                          const LiftOptions& lift) {
  const int n = market.num_consumers();
  check_precondition(static_cast<int>(parts.size()) == n, "allocation size differs from consumer count");
  check_precondition(v.sign() > 0, "bin value must be positive");
  std::vector<int> holders;
  ItemSet used = 0;
  Rational total;
  for (int i = 0; i < n; ++i) {
    if (parts[i] == 0) continue;
    check_precondition((used & parts[i]) == 0, "parts overlap");
    const Rational& value = market.value(i, parts[i]);
    check_precondition(value >= v && value < v * Rational(2), "part value outside [v, 2v)");
    used |= parts[i];
    total += value;
    holders.push_back(i);
  }
  const int r = static_cast<int>(holders.size());
  check_precondition(r >= 1, "general_sqrt needs at least one part");
  const int g = static_cast<int>(isqrt_ceil(mpz_class(r)).get_si());
  const int count = r / g;
  PricedBundling pb;
  for (auto [lo, hi] : split_groups(r, count)) {
    ItemSet bundle = 0;
    for (int t = lo; t < hi; ++t) bundle |= parts[holders[t]];
    pb.bundling.bundles.push_back(bundle);
  }
  pb.bundling.bundles.back() |= market.all_items() & ~used;
  // Aggregate price must reach Σ / (4√r + 4): √r >= (Σ / aggregate - 4) / 4.
  auto meets = [&](const Rational& aggregate) {
    return aggregate.sign() > 0 && sqrt_at_least(Rational(r), (total / aggregate - Rational(4)) / Rational(4));
  };
  Rational eps = v / Rational(1024);
  int tries = 0;
  while (!meets(Rational(count) * (v - eps))) {
    eps /= Rational(2);
    check_invariant(++tries < 256, "no discount meets the aggregate-price bound");
  }
  pb.prices.assign(count, v - eps);
  check_invariant(is_high_demand(market, pb), "grouped bundling is not high-demand");
  Outcome out = lift_high_demand(market, pb, lift);
  Construction c = finish(market, out, total, "groups of " + std::to_string(g));
  c.bound = "welfare >= sum v_i(S_i) / (4 sqrt(r) + 4)";
  c.bound_holds = meets(c.welfare);
  return c;
}

Rational restricted_welfare(const Market& market, std::uint32_t consumers, ItemSet items, int k,
                            const Budget& budget) {
  const int n = market.num_consumers();
  budget.require(static_cast<double>(n) * std::pow(3.0, cardinality(items)), "restricted_welfare");
  const std::size_t count = std::size_t{1} << market.num_items();
  std::vector<Rational> prev(count), cur(count);
  for (int i = 0; i < n; ++i) {
    if (!contains(consumers, i)) continue;
    for_each_subset(items, [&](ItemSet t) {
      Rational b = prev[t];
      for_each_subset(t, [&](ItemSet sub) {
        const int size = cardinality(sub);
        if (size < k || size >= 2 * k) return;
        Rational cand = market.value(i, sub) + prev[t & ~sub];
        if (cand > b) b = std::move(cand);
      });
      cur[t] = std::move(b);
    });
    for_each_subset(items, [&](ItemSet t) { prev[t] = cur[t]; });
  }
  return prev[items];
}

AkTrace greedy_ak(const Market& market, int k, const Budget& budget) {
  const int n = market.num_consumers();
  const int m = market.num_items();
  check_precondition(k >= 1 && k <= m, "bundle size parameter outside [1, m]");
  AkTrace trace;
  trace.k = k;
  trace.allocation.assign(n, 0);
  std::uint32_t open = full_set(n);
  ItemSet left = market.all_items();
  trace.w = restricted_welfare(market, open, left, k, budget);
  Rational previous_w = trace.w;
  while (cardinality(left) >= k && open != 0) {
    trace.remaining.push_back(left);
    int best_i = -1;
    ItemSet best_a = 0;
    Rational best_v;
    for (int i = 0; i < n; ++i) {
      if (!contains(open, i)) continue;
      for_each_subset(left, [&](ItemSet a) {
        const int size = cardinality(a);
        if (size < k || size >= 2 * k) return;
        const Rational& value = market.value(i, a);
        if (best_i < 0 || value > best_v || (value == best_v && i == best_i && lex_less(a, best_a))) {
          best_i = i;
          best_a = a;
          best_v = value;
        }
      });
    }
    open &= ~singleton(best_i);
    left &= ~best_a;
    trace.allocation[best_i] = best_a;
    trace.welfare += best_v;
    AkStep step{best_i, best_a, best_v, restricted_welfare(market, open, left, k, budget)};
    check_invariant(previous_w - step.w_after <= Rational(2 * k) * best_v, "greedy step loses more than 2k times its gain");
    previous_w = step.w_after;
    trace.steps.push_back(std::move(step));
  }
  trace.remaining.push_back(left);
  check_invariant(trace.w <= Rational(2 * k) * trace.welfare, "greedy welfare below W / 2k");
  return trace;
}

Construction general_m23(const Market& market, const LiftOptions& lift) {
  const int m = market.num_items();
  WelfareResult opt = welfare_opt(market);
  std::optional<Construction> best;
  const long kmax = icbrt_ceil(m);
  for (int k = 1; k <= kmax && k <= m; ++k) {
    AkTrace trace = greedy_ak(market, k);
    LogBinResult lb = log_bin(market, trace.allocation, BinMode::kByValue);
    if (lb.r == 0) continue;
    Construction c = general_sqrt(market, lb.filtered, lb.threshold, lift);
    c.path = "k=" + std::to_string(k) + " " + c.path;
    if (!best || c.welfare > best->welfare) best = std::move(c);
  }
  Construction grand = finish(market, grand_bundle_outcome(market), opt.value, "grand-bundle");
  if (!best || grand.welfare > best->welfare) best = std::move(grand);
  best->opt = opt.value;
  best->bound = "welfare >= OPT / (40 m^(2/3) (log2 m + 2))";
  best->bound_holds =
      within_log_factor(best->welfare, opt.value, Rational(40) * pow_two_thirds_lower(m), Rational(m));
  return *best;
}

GreedySplit budget_greedy(const Market& market) {
  const int n = market.num_consumers();
  const int m = market.num_items();
  GreedySplit split;
  split.allocation.assign(n, 0);
  std::vector<Rational> spent(n);
  for (int j = 0; j < m; ++j) {
    int best = 0;
    Rational best_gain;
    for (int i = 0; i < n; ++i) {
      const Valuation& v = market.valuation(i);
      const Rational cap = *v.budget() * Rational(2);
      Rational gain = min(spent[i] + v.weights()[j], cap) - min(spent[i], cap);
      if (i == 0 || gain > best_gain) {
        best = i;
        best_gain = gain;
      }
    }
    split.allocation[best] |= singleton(j);
    spent[best] += market.valuation(best).weights()[j];
  }
  for (int i = 0; i < n; ++i) {
    if (market.value(i, split.allocation[i]) == *market.valuation(i).budget()) {
      split.exhausted.push_back(i);
    } else {
      split.open.push_back(i);
    }
  }
  for (int i : split.open) {
    for (int j : members(split.allocation[i])) {
      for (int other : split.open) {
        check_invariant(market.value(i, singleton(j)) >= market.value(other, singleton(j)),
                        "greedy item goes to a consumer with a lower open weight");
      }
    }
  }
  return split;
}

Construction budget_additive_cbe(const Market& market, const LiftOptions& lift) {
  check_precondition(market.all_of_kind(ValuationKind::kBudgetAdditive),
                     "budget_additive_cbe needs budget-additive valuations");
  const int n = market.num_consumers();
  const int m = market.num_items();
  WelfareResult opt = welfare_opt(market);
  if (opt.value.is_zero()) {
    Construction c = finish(market, grand_bundle_outcome(market), opt.value, "zero-welfare");
    c.bound = "welfare >= OPT";
    c.bound_holds = true;
    return c;
  }
  GreedySplit split = budget_greedy(market);
  Rational greedy_total, exhausted_total;
  for (int i = 0; i < n; ++i) greedy_total += market.value(i, split.allocation[i]);
  for (int i : split.exhausted) exhausted_total += market.value(i, split.allocation[i]);
  check_invariant(greedy_total * Rational(4) >= opt.value, "greedy welfare below OPT / 4");
  split.chosen_case = exhausted_total * Rational(2) >= greedy_total ? 1 : 2;

  PartialCbe partial;
  partial.allocation.assign(n, 0);
  const ItemSet all = market.all_items();
  if (split.chosen_case == 1) {
    const Rational floor = exhausted_total / Rational(2 * m);
    std::map<int, Rational> totals;
    std::map<int, int> bin_of;
    for (int i : split.exhausted) {
      const Rational b = *market.valuation(i).budget();
      if (b.sign() <= 0 || b < floor) continue;
      int t = 0;
      Rational upper = floor * Rational(2);
      while (b >= upper) {
        upper *= Rational(2);
        ++t;
      }
      bin_of[i] = t;
      totals[t] += b;
    }
    int chosen = -1;
    Rational chosen_total;
    for (const auto& [t, total] : totals) {
      if (chosen < 0 || total > chosen_total) {
        chosen = t;
        chosen_total = total;
      }
    }
    std::vector<int> members_of_bin;
    for (const auto& [i, t] : bin_of) {
      if (t == chosen) members_of_bin.push_back(i);
    }
    std::sort(members_of_bin.begin(), members_of_bin.end());
    split.bin_value = *market.valuation(members_of_bin.front()).budget();
    for (int i : members_of_bin) split.bin_value = min(split.bin_value, *market.valuation(i).budget());
    ItemSet used = 0;
    for (int i : members_of_bin) {
      partial.allocation[i] = singleton(partial.priced.bundling.size());
      partial.priced.bundling.bundles.push_back(split.allocation[i]);
      partial.priced.prices.push_back(split.bin_value);
      partial.consumers.push_back(i);
      used |= split.allocation[i];
    }
    partial.priced.bundling.bundles.front() |= all & ~used;
  } else {
    ItemSet used = 0;
    for (int i : split.open) used |= split.allocation[i];
    const ItemSet rest = all & ~used;
    int sink = split.open.front();
    for (int i : split.open) {
      if (market.value(i, split.allocation[i] | rest) > market.value(sink, split.allocation[sink] | rest)) sink = i;
    }
    split.sink = sink;
    for (int i : split.open) {
      const ItemSet bundle = split.allocation[i] | (i == sink ? rest : 0);
      if (bundle == 0) continue;
      partial.allocation[i] = singleton(partial.priced.bundling.size());
      partial.priced.bundling.bundles.push_back(bundle);
      partial.priced.prices.push_back(market.value(i, bundle));
      partial.consumers.push_back(i);
    }
  }
  const Rational partial_revenue = partial.priced.total_price();
  Outcome out = lift_partial(market, partial, lift);
  Construction c = finish(market, out, opt.value, "case-" + std::to_string(split.chosen_case));
  check_invariant(c.welfare >= partial_revenue, "lifted welfare below the partial revenue");
  if (split.chosen_case == 1) {
    c.bound = "welfare >= OPT / (32 (log2 m + 2))";
    c.bound_holds = within_log_factor(c.welfare, opt.value, Rational(32), Rational(m));
  } else {
    c.bound = "welfare >= OPT / 8";
    c.bound_holds = c.welfare * Rational(8) >= opt.value;
  }
  return c;
}

}  // namespace cbe
