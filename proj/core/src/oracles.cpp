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

#include "cbe/oracles.hpp"

#include <bit>
#include <cmath>
#include <optional>
#include <string>

#include "cbe/errors.hpp"

namespace cbe {

namespace {

// Union and price of every subset of bundles, indexed by bundle mask.
struct SubsetTables {
  std::vector<ItemSet> items;
  std::vector<Rational> price;
};

SubsetTables subset_tables(const PricedBundling& pb) {
  const int k = pb.bundling.size();
  if (k > 24) throw ScaleGuardError("demand query over more than 24 bundles");
  SubsetTables t;
  const std::size_t count = std::size_t{1} << k;
  t.items.resize(count, 0);
  t.price.resize(count);
  for (std::size_t s = 1; s < count; ++s) {
    int j = std::countr_zero(static_cast<BundleSet>(s));
    std::size_t rest = s & (s - 1);
    t.items[s] = t.items[rest] | pb.bundling.bundles[j];
    t.price[s] = t.price[rest] + pb.prices[j];
  }
  return t;
}

}  // namespace

DemandResult demand_query(const Valuation& v, const PricedBundling& pb) {
  SubsetTables t = subset_tables(pb);
  DemandResult out;
  out.maximizers.push_back(0);
  for (std::size_t s = 1; s < t.items.size(); ++s) {
    Rational payoff = v.value(t.items[s]) - t.price[s];
    if (payoff > out.payoff) {
      out.payoff = payoff;
      out.maximizers.assign(1, static_cast<BundleSet>(s));
    } else if (payoff == out.payoff) {
      out.maximizers.push_back(static_cast<BundleSet>(s));
    }
  }
  return out;
}

namespace {

FastDemand multi_unit_demand(const Valuation& v, const PricedBundling& pb) {
  const auto& f = v.per_count();
  const int k = pb.bundling.size();
  const int m = v.num_items();
  // best[b][u]: cheapest price for exactly u units using bundles 0..b-1.
  std::vector<std::vector<std::optional<Rational>>> best(k + 1, std::vector<std::optional<Rational>>(m + 1));
  best[0][0] = Rational(0);
  for (int b = 0; b < k; ++b) {
    const int size = cardinality(pb.bundling.bundles[b]);
    for (int u = 0; u <= m; ++u) {
      best[b + 1][u] = best[b][u];
      if (u >= size && best[b][u - size]) {
        Rational with = *best[b][u - size] + pb.prices[b];
        if (!best[b + 1][u] || with < *best[b + 1][u]) best[b + 1][u] = with;
      }
    }
  }
  FastDemand out;
  int best_u = 0;
  for (int u = 1; u <= m; ++u) {
    if (!best[k][u]) continue;
    Rational payoff = f[u] - *best[k][u];
    if (payoff > out.payoff) {
      out.payoff = payoff;
      best_u = u;
    }
  }
  int u = best_u;
  for (int b = k; b > 0; --b) {
    if (best[b][u] == best[b - 1][u]) continue;
    out.witness |= singleton(b - 1);
    u -= cardinality(pb.bundling.bundles[b - 1]);
  }
  return out;
}

}  // namespace

FastDemand demand_fast(const Valuation& v, const PricedBundling& pb) {
  FastDemand out;
  const int k = pb.bundling.size();
  switch (v.kind()) {
    case ValuationKind::kAdditive:
      for (int b = 0; b < k; ++b) {
        Rational net = v.value(pb.bundling.bundles[b]) - pb.prices[b];
        if (net.sign() > 0) {
          out.payoff += net;
          out.witness |= singleton(b);
        }
      }
      return out;
    case ValuationKind::kUnitDemand:
      for (int b = 0; b < k; ++b) {
        Rational net = v.value(pb.bundling.bundles[b]) - pb.prices[b];
        if (net > out.payoff) {
          out.payoff = net;
          out.witness = singleton(b);
        }
      }
      return out;
    case ValuationKind::kMultiUnit:
      return multi_unit_demand(v, pb);
    default: {
      DemandResult d = demand_query(v, pb);
      out.payoff = d.payoff;
      out.witness = d.maximizers.front();
      return out;
    }
  }
}

FastDemand demand_checked(const Valuation& v, const PricedBundling& pb, DemandAudit* audit) {
  FastDemand fast = demand_fast(v, pb);
  if (audit != nullptr) {
    audit->queries.fetch_add(1);
    DemandResult brute = demand_query(v, pb);
    bool member = false;
    for (BundleSet s : brute.maximizers) member = member || s == fast.witness;
    if (brute.payoff != fast.payoff || !member) {
      audit->mismatches.fetch_add(1);
      throw InvariantViolation("specialized demand disagrees with brute force: " + fast.payoff.to_string() +
                               " vs " + brute.payoff.to_string());
    }
  }
  return fast;
}

bool check_subadditive(const Valuation& v) {
  const ItemSet all = full_set(v.num_items());
  if (v.monotone()) {
    // With monotone v, overlapping pairs reduce to disjoint ones.
    for (ItemSet t = 0; t <= all; ++t) {
      bool ok = true;
      for_each_subset(all & ~t, [&](ItemSet u) {
        if (ok && v.value(t) + v.value(u) < v.value(t | u)) ok = false;
      });
      if (!ok) return false;
    }
    return true;
  }
  for (ItemSet t = 0; t <= all; ++t) {
    for (ItemSet u = 0; u <= all; ++u) {
      if (v.value(t) + v.value(u) < v.value(t | u)) return false;
    }
  }
  return true;
}

bool check_superadditive(const Valuation& v) {
  const ItemSet all = full_set(v.num_items());
  for (ItemSet t = 0; t <= all; ++t) {
    bool ok = true;
    for_each_subset(all & ~t, [&](ItemSet u) {
      if (ok && v.value(t) + v.value(u) > v.value(t | u)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

bool check_gross_substitutes(const Valuation& v) {
  const int m = v.num_items();
  const ItemSet all = full_set(m);
  for (ItemSet s = 0; s <= all; ++s) {
    std::vector<int> out = members(all & ~s);
    for (std::size_t a = 0; a < out.size(); ++a) {
      for (std::size_t b = a + 1; b < out.size(); ++b) {
        ItemSet si = s | singleton(out[a]);
        ItemSet sj = s | singleton(out[b]);
        ItemSet sij = si | sj;
        if (v.value(sij) + v.value(s) > v.value(si) + v.value(sj)) return false;
      }
    }
    for (int i : out) {
      for (int j : out) {
        if (j <= i) continue;
        for (int k : out) {
          if (k == i || k == j) continue;
          ItemSet si = s | singleton(i), sj = s | singleton(j), sk = s | singleton(k);
          Rational lhs = v.value(si | sj) + v.value(sk);
          Rational r1 = v.value(si | sk) + v.value(sj);
          Rational r2 = v.value(sj | sk) + v.value(si);
          if (lhs > max(r1, r2)) return false;
        }
      }
    }
  }
  return true;
}

namespace {

WelfareResult multi_unit_welfare(const Market& market) {
  const int n = market.num_consumers();
  const int m = market.num_items();
  // best[i][u]: welfare of consumers i..n-1 sharing exactly u units, the last taking the rest.
  std::vector<std::vector<Rational>> best(n, std::vector<Rational>(m + 1));
  for (int u = 0; u <= m; ++u) best[n - 1][u] = market.valuation(n - 1).per_count()[u];
  for (int i = n - 2; i >= 0; --i) {
    const auto& f = market.valuation(i).per_count();
    for (int u = 0; u <= m; ++u) {
      Rational b = f[0] + best[i + 1][u];
      for (int c = 1; c <= u; ++c) b = max(b, f[c] + best[i + 1][u - c]);
      best[i][u] = b;
    }
  }
  WelfareResult out;
  out.value = best[0][m];
  out.allocation.assign(n, 0);
  int remaining = m;
  int next_unit = 0;
  for (int i = 0; i < n; ++i) {
    int take = remaining;
    if (i < n - 1) {
      const auto& f = market.valuation(i).per_count();
      for (int c = 0; c <= remaining; ++c) {
        if (f[c] + best[i + 1][remaining - c] == best[i][remaining]) {
          take = c;
          break;
        }
      }
    }
    for (int c = 0; c < take; ++c) out.allocation[i] |= singleton(next_unit++);
    remaining -= take;
  }
  return out;
}

}  // namespace

WelfareResult welfare_opt(const Market& market, const Budget& budget) {
  const int n = market.num_consumers();
  const int m = market.num_items();
  if (market.all_of_kind(ValuationKind::kMultiUnit)) return multi_unit_welfare(market);
  budget.require(static_cast<double>(n) * std::pow(3.0, m), "welfare_opt");
  const ItemSet all = full_set(m);
  const std::size_t count = std::size_t{1} << m;
  std::vector<std::vector<Rational>> best(n, std::vector<Rational>(count));
  for (std::size_t s = 0; s < count; ++s) best[n - 1][s] = market.value(n - 1, static_cast<ItemSet>(s));
  for (int i = n - 2; i >= 0; --i) {
    const Valuation& v = market.valuation(i);
    for (std::size_t s = 0; s < count; ++s) {
      const ItemSet mask = static_cast<ItemSet>(s);
      Rational b = best[i + 1][mask];
      for_each_subset(mask, [&](ItemSet sub) {
        if (sub == 0) return;
        const Rational& val = v.value(sub);
        if (val.is_zero() && best[i + 1][mask & ~sub] <= b) return;
        Rational cand = val + best[i + 1][mask & ~sub];
        if (cand > b) b = std::move(cand);
      });
      best[i][mask] = std::move(b);
    }
  }
  WelfareResult out;
  out.value = best[0][all];
  out.allocation.assign(n, 0);
  ItemSet remaining = all;
  for (int i = 0; i < n - 1; ++i) {
    ItemSet sub = 0;
    while (true) {
      if (market.value(i, sub) + best[i + 1][remaining & ~sub] == best[i][remaining]) break;
      sub = (sub - remaining) & remaining;
      check_invariant(sub != 0, "welfare_opt witness reconstruction failed");
    }
    out.allocation[i] = sub;
    remaining &= ~sub;
  }
  out.allocation[n - 1] = remaining;
  return out;
}

Market induced_market(const Market& market, const Bundling& bundling) {
  bundling.validate(market.num_items());
  const int k = bundling.size();
  const std::size_t count = std::size_t{1} << k;
  std::vector<Consumer> consumers;
  for (const auto& c : market.consumers()) {
    std::vector<Rational> table(count);
    for (std::size_t t = 0; t < count; ++t) table[t] = c.valuation.value(bundling.items_of(static_cast<BundleSet>(t)));
    Valuation v = c.valuation.monotone() ? Valuation::explicit_table(k, std::move(table))
                                         : Valuation::unchecked_table(k, std::move(table));
    consumers.push_back(Consumer{c.name, std::move(v)});
  }
  return Market(Market::default_labels(k), std::move(consumers));
}

}  // namespace cbe
