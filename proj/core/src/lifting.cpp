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

#include "cbe/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cbe/bounds.hpp"
#include "cbe/equilibrium.hpp"
#include "cbe/errors.hpp"
#include "cbe/linear_program.hpp"
#include "cbe/oracles.hpp"

namespace cbe {

namespace {

// owner[j] in [0, n) is the consumer holding input bundle j inside its merged
// bundle; owner[j] == n marks j as unallocated.
using Owners = std::vector<int>;

struct Shape {
  // Per consumer: input bundles of the merged bundle (0 if none).
  std::vector<BundleSet> groups;
  BundleSet unallocated = 0;
};

Shape shape_of(const Owners& owner, int n) {
  Shape s;
  s.groups.assign(n, 0);
  for (std::size_t j = 0; j < owner.size(); ++j) {
    if (owner[j] == n) {
      s.unallocated |= singleton(static_cast<int>(j));
    } else {
      s.groups[owner[j]] |= singleton(static_cast<int>(j));
    }
  }
  return s;
}

Rational input_price(const PricedBundling& pb, BundleSet set) { return pb.price_of(set); }

// Exact merged-bundle prices for a fixed structure: minimize Σ P_i subject
// to P_i >= Σ input prices of group i and every consumer holding a demand set.
std::optional<std::vector<Rational>> structure_prices(const Market& market, const PricedBundling& pb,
                                                      const Owners& owner) {
  const int n = market.num_consumers();
  Shape shape = shape_of(owner, n);
  std::vector<int> var_of(n, -1);
  std::vector<int> owners;
  for (int i = 0; i < n; ++i) {
    if (shape.groups[i] != 0) {
      var_of[i] = static_cast<int>(owners.size());
      owners.push_back(i);
    }
  }
  const std::vector<int> free_bundles = members(shape.unallocated);
  const int g = static_cast<int>(owners.size());
  const int width = g + static_cast<int>(free_bundles.size());
  std::vector<ItemSet> out_items(width);
  for (int v = 0; v < g; ++v) out_items[v] = pb.bundling.items_of(shape.groups[owners[v]]);
  for (std::size_t u = 0; u < free_bundles.size(); ++u) out_items[g + u] = pb.bundling.bundles[free_bundles[u]];

  std::map<std::vector<int>, Rational> rows;
  for (int c = 0; c < n; ++c) {
    const int own = var_of[c];
    const ItemSet held = own >= 0 ? out_items[own] : 0;
    const Rational& held_value = market.value(c, held);
    for (BundleSet t = 0; t < (BundleSet{1} << width); ++t) {
      std::vector<int> coeff(g, 0);
      ItemSet items = 0;
      Rational fixed;
      for (int b : members(t)) {
        items |= out_items[b];
        if (b < g) {
          coeff[b] += 1;
        } else {
          fixed += pb.prices[free_bundles[b - g]];
        }
      }
      if (own >= 0) coeff[own] -= 1;
      Rational rhs = market.value(c, items) - held_value - fixed;
      bool zero = std::all_of(coeff.begin(), coeff.end(), [](int x) { return x == 0; });
      if (zero) {
        if (rhs.sign() > 0) return std::nullopt;
        continue;
      }
      auto [it, inserted] = rows.emplace(std::move(coeff), rhs);
      if (!inserted && rhs > it->second) it->second = rhs;
    }
  }
  if (g == 0) return std::vector<Rational>(n);
  LinearProgram lp;
  lp.sense = Sense::kMinimize;
  for (int v = 0; v < g; ++v) lp.add_variable(Rational(1), input_price(pb, shape.groups[owners[v]]));
  for (const auto& [coeff, rhs] : rows) {
    std::vector<Rational> row(g);
    for (int v = 0; v < g; ++v) row[v] = Rational(coeff[v]);
    lp.add_constraint(std::move(row), Relation::kGreaterEqual, rhs);
  }
  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::kOptimal) return std::nullopt;
  CertificateCheck cert = verify_certificates(lp, sol);
  check_invariant(cert.ok(), "lift price LP certificate failed: " + cert.detail);
  std::vector<Rational> prices(n);
  for (int v = 0; v < g; ++v) prices[owners[v]] = sol.primal[v];
  return prices;
}

LiftResult build_result(const PricedBundling& pb, const Owners& owner, const std::vector<Rational>& group_price,
                        int n) {
  Shape shape = shape_of(owner, n);
  struct Piece {
    BundleSet inputs;
    Rational price;
    int holder;
  };
  std::vector<Piece> pieces;
  for (int i = 0; i < n; ++i) {
    if (shape.groups[i] != 0) pieces.push_back({shape.groups[i], group_price[i], i});
  }
  for (int j : members(shape.unallocated)) pieces.push_back({singleton(j), pb.prices[j], -1});
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return std::countr_zero(a.inputs) < std::countr_zero(b.inputs); });
  LiftResult out;
  out.allocation.assign(n, 0);
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    out.priced.bundling.bundles.push_back(pb.bundling.items_of(pieces[k].inputs));
    out.priced.prices.push_back(pieces[k].price);
    out.composition.push_back(pieces[k].inputs);
    if (pieces[k].holder >= 0) out.allocation[pieces[k].holder] = singleton(static_cast<int>(k));
  }
  return out;
}

// Cheap necessary conditions that only involve fixed prices.
bool passes_prefilter(const Market& market, const PricedBundling& pb, const Owners& owner) {
  const int n = market.num_consumers();
  Shape shape = shape_of(owner, n);
  const std::vector<int> free_bundles = members(shape.unallocated);
  const std::size_t count = std::size_t{1} << free_bundles.size();
  std::vector<ItemSet> items(count, 0);
  std::vector<Rational> price(count);
  for (std::size_t t = 1; t < count; ++t) {
    int b = std::countr_zero(static_cast<BundleSet>(t));
    std::size_t rest = t & (t - 1);
    items[t] = items[rest] | pb.bundling.bundles[free_bundles[b]];
    price[t] = price[rest] + pb.prices[free_bundles[b]];
  }
  for (int c = 0; c < n; ++c) {
    const BundleSet group = shape.groups[c];
    if (group == 0) {
      for (std::size_t t = 1; t < count; ++t) {
        if (market.value(c, items[t]) > price[t]) return false;
      }
      continue;
    }
    const ItemSet held = pb.bundling.items_of(group);
    const Rational& held_value = market.value(c, held);
    Rational base = held_value - input_price(pb, group);
    if (base.sign() < 0) return false;
    for (std::size_t t = 1; t < count; ++t) {
      if (market.value(c, items[t]) - price[t] > base) return false;
      if (market.value(c, held | items[t]) - price[t] > held_value) return false;
    }
  }
  return true;
}

std::optional<LiftResult> exhaustive_lift(const Market& market, const PricedBundling& pb, const Budget& budget,
                                          bool require_all_allocated) {
  const int n = market.num_consumers();
  const int k = pb.bundling.size();
  const double total = std::pow(static_cast<double>(n + 1), k);
  budget.require(total * n * std::pow(2.0, k), "exhaustive lift");
  std::vector<std::pair<int, std::uint64_t>> candidates;
  Owners owner(k);
  const std::uint64_t limit = static_cast<std::uint64_t>(total);
  for (std::uint64_t code = 0; code < limit; ++code) {
    std::uint64_t rest = code;
    for (int j = k - 1; j >= 0; --j) {
      owner[j] = static_cast<int>(rest % (n + 1));
      rest /= (n + 1);
    }
    int unallocated = static_cast<int>(std::count(owner.begin(), owner.end(), n));
    if (require_all_allocated && unallocated > 0) continue;
    if (!passes_prefilter(market, pb, owner)) continue;
    candidates.emplace_back(unallocated, code);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [unallocated, code] : candidates) {
    std::uint64_t rest = code;
    for (int j = k - 1; j >= 0; --j) {
      owner[j] = static_cast<int>(rest % (n + 1));
      rest /= (n + 1);
    }
    auto prices = structure_prices(market, pb, owner);
    if (!prices) continue;
    LiftResult out = build_result(pb, owner, *prices, n);
    out.strategy = "exhaustive";
    return out;
  }
  return std::nullopt;
}

std::optional<LiftResult> auction_lift(const Market& market, const PricedBundling& pb, const Rational& delta,
                                       int max_rounds) {
  const int n = market.num_consumers();
  const int k = pb.bundling.size();
  Owners owner(k, n);
  std::vector<Rational> group_price(n);
  for (int round = 0; round < max_rounds; ++round) {
    LiftResult current = build_result(pb, owner, group_price, n);
    int unhappy = -1;
    DemandResult demand;
    for (int c = 0; c < n && unhappy < 0; ++c) {
      demand = demand_query(market.valuation(c), current.priced);
      const BundleSet held = current.allocation[c];
      Rational payoff = market.value(c, current.priced.bundling.items_of(held)) - current.priced.price_of(held);
      if (payoff < demand.payoff) unhappy = c;
    }
    if (unhappy < 0) {
      auto prices = structure_prices(market, pb, owner);
      if (!prices) return std::nullopt;
      LiftResult out = build_result(pb, owner, *prices, n);
      out.strategy = "auction";
      return out;
    }
    const BundleSet wanted = demand.maximizers.front();
    BundleSet inputs = 0;
    bool outbid = false;
    for (int b : members(wanted)) {
      inputs |= current.composition[b];
      for (int c = 0; c < n; ++c) {
        if (c != unhappy && current.allocation[c] == singleton(b)) {
          outbid = true;
          group_price[c] = Rational(0);
        }
      }
    }
    Rational price = current.priced.price_of(wanted);
    if (outbid) price += delta;
    for (int j = 0; j < k; ++j) {
      if (owner[j] == unhappy && !contains(inputs, j)) owner[j] = n;
      if (contains(inputs, j)) owner[j] = unhappy;
    }
    for (int c = 0; c < n; ++c) {
      if (c != unhappy && std::find(owner.begin(), owner.end(), c) == owner.end()) group_price[c] = Rational(0);
    }
    group_price[unhappy] = inputs == 0 ? Rational(0) : price;
  }
  return std::nullopt;
}

Market restricted_market(const Market& market, const std::vector<int>& consumers) {
  std::vector<Consumer> out;
  const std::size_t count = std::size_t{1} << market.num_items();
  for (int i = 0; i < market.num_consumers(); ++i) {
    if (std::find(consumers.begin(), consumers.end(), i) != consumers.end()) {
      out.push_back(market.consumers()[i]);
    } else {
      out.push_back(Consumer{market.consumers()[i].name,
                             Valuation::explicit_table(market.num_items(), std::vector<Rational>(count))});
    }
  }
  return Market(market.labels(), std::move(out));
}

}  // namespace

bool LiftResult::all_allocated() const {
  BundleSet held = 0;
  for (BundleSet s : allocation) held |= s;
  return held == full_set(priced.bundling.size());
}

LiftCheck check_lift(const Market& market, const PricedBundling& input, const LiftResult& result) {
  LiftCheck check;
  const int outputs = result.priced.bundling.size();
  BundleSet covered_inputs = 0;
  bool shape_ok = static_cast<int>(result.composition.size()) == outputs;
  for (int b = 0; shape_ok && b < outputs; ++b) {
    shape_ok = (covered_inputs & result.composition[b]) == 0 &&
               input.bundling.items_of(result.composition[b]) == result.priced.bundling.bundles[b];
    covered_inputs |= result.composition[b];
  }
  shape_ok = shape_ok && covered_inputs == full_set(input.bundling.size());
  BundleSet allocated = 0;
  for (BundleSet s : result.allocation) allocated |= s;
  check.prices_up = shape_ok;
  check.unallocated_unchanged = shape_ok;
  for (int b = 0; shape_ok && b < outputs; ++b) {
    const BundleSet from = result.composition[b];
    if (contains(allocated, b)) {
      check.prices_up = check.prices_up && result.priced.prices[b] >= input.price_of(from);
    } else {
      check.unallocated_unchanged = check.unallocated_unchanged && cardinality(from) == 1 &&
                                    result.priced.prices[b] == input.price_of(from);
    }
  }
  check.demand_sets = shape_ok;
  for (int i = 0; check.demand_sets && i < market.num_consumers(); ++i) {
    const BundleSet held = result.allocation[i];
    Rational payoff = market.value(i, result.priced.bundling.items_of(held)) - result.priced.price_of(held);
    check.demand_sets = payoff == demand_query(market.valuation(i), result.priced).payoff;
  }
  return check;
}

Rational min_value_gap(const Market& market) {
  std::set<Rational> values;
  for (const auto& c : market.consumers()) values.insert(c.valuation.table().begin(), c.valuation.table().end());
  std::optional<Rational> gap;
  const Rational* prev = nullptr;
  for (const auto& v : values) {
    if (prev != nullptr) {
      Rational d = v - *prev;
      if (!gap || d < *gap) gap = d;
    }
    prev = &v;
  }
  if (!gap) {
    Rational only = values.empty() ? Rational(0) : *values.begin();
    return only.sign() > 0 ? only : Rational(1);
  }
  return *gap;
}

LiftResult fgl_lift(const Market& market, const PricedBundling& pb, const LiftOptions& options) {
  pb.validate(market.num_items());
  const int k = pb.bundling.size();
  std::optional<LiftResult> result;
  bool exhaustive_first = options.strategy == LiftStrategy::kExhaustive ||
                          (options.strategy == LiftStrategy::kAuto && k <= options.exhaustive_max_bundles);
  if (!exhaustive_first) {
    Rational delta = options.delta.sign() > 0 ? options.delta : min_value_gap(market) / Rational(1L << 20);
    result = auction_lift(market, pb, delta, options.max_rounds);
  }
  if (!result) result = exhaustive_lift(market, pb, options.budget, false);
  if (!result) throw ExhaustionError("no lift found for the priced bundling");
  LiftCheck check = check_lift(market, pb, *result);
  check_invariant(check.ok(), std::string("lift violates its guarantees (") + (check.prices_up ? "" : "prices ") +
                                  (check.unallocated_unchanged ? "" : "unallocated ") +
                                  (check.demand_sets ? "" : "demand ") + "; " + result->strategy + ")");
  return *result;
}

bool is_partial_cbe(const Market& market, const PartialCbe& partial) {
  for (int i : partial.consumers) {
    if (i < 0 || i >= market.num_consumers()) return false;
  }
  Market restricted = restricted_market(market, partial.consumers);
  for (int i = 0; i < market.num_consumers(); ++i) {
    bool inside = std::find(partial.consumers.begin(), partial.consumers.end(), i) != partial.consumers.end();
    if (!inside && partial.allocation.at(i) != 0) return false;
  }
  return verify_cbe(restricted, Outcome{partial.priced, partial.allocation}).pass;
}

Outcome lift_partial(const Market& market, const PartialCbe& partial, const LiftOptions& options) {
  check_precondition(is_partial_cbe(market, partial), "input is not a partial CBE");
  const int n = market.num_consumers();
  const int m = market.num_items();
  const PricedBundling& pb = partial.priced;
  const Rational revenue = pb.total_price();

  auto shifted = [&](const Rational& eps) {
    std::vector<Consumer> consumers = market.consumers();
    for (int i : partial.consumers) {
      const ItemSet held = pb.bundling.items_of(partial.allocation[i]);
      if (held == 0) continue;
      std::vector<Rational> table = consumers[i].valuation.table();
      table[held] += eps;
      consumers[i].valuation = Valuation::unchecked_table(m, std::move(table));
    }
    return Market(market.labels(), std::move(consumers));
  };

  auto owners_of = [&](const LiftResult& r) {
    Owners owner(pb.bundling.size(), n);
    for (int i = 0; i < n; ++i) {
      for (int b : members(r.allocation[i])) {
        for (int j : members(r.composition[b])) owner[j] = i;
      }
    }
    return owner;
  };

  std::optional<LiftResult> lifted;
  Rational eps = min_value_gap(market) / Rational(16);
  std::optional<Owners> previous;
  for (int t = 0; t < 40; ++t, eps /= Rational(2)) {
    LiftResult r = fgl_lift(shifted(eps), pb, options);
    Owners owner = owners_of(r);
    if (previous && *previous == owner) {
      if (std::count(owner.begin(), owner.end(), n) == 0) {
        if (auto prices = structure_prices(market, pb, owner)) {
          lifted = build_result(pb, owner, *prices, n);
          lifted->strategy = r.strategy;
        }
      }
      break;
    }
    previous = owner;
  }
  if (!lifted) lifted = exhaustive_lift(market, pb, options.budget, true);
  if (!lifted) throw ExhaustionError("no clearing lift of the partial CBE found");
  check_invariant(check_lift(market, pb, *lifted).ok(), "partial lift violates its guarantees");
  Outcome out = lifted->outcome();
  VerificationReport report = verify_cbe(market, out);
  check_invariant(report.pass, "partial lift is not a CBE: " + report.summary());
  check_invariant(report.welfare >= revenue, "partial lift welfare below the partial revenue");
  return out;
}

bool is_high_demand(const Market& market, const PricedBundling& pb) {
  const int k = pb.bundling.size();
  for (int b = 0; b < k; ++b) {
    int profitable = 0;
    for (int i = 0; i < market.num_consumers(); ++i) {
      if (market.value(i, pb.bundling.bundles[b]) > pb.prices[b]) ++profitable;
    }
    if (profitable < k) return false;
  }
  return true;
}

Outcome lift_high_demand(const Market& market, const PricedBundling& pb, const LiftOptions& options) {
  pb.validate(market.num_items());
  check_precondition(is_high_demand(market, pb), "priced bundling is not high-demand");
  LiftResult lifted = fgl_lift(market, pb, options);
  check_invariant(lifted.all_allocated(), "high-demand lift left a bundle unallocated");
  Outcome out = lifted.outcome();
  VerificationReport report = verify_cbe(market, out);
  check_invariant(report.pass, "high-demand lift is not a CBE: " + report.summary());
  check_invariant(report.welfare >= pb.total_price(), "high-demand lift welfare below the aggregate price");
  return out;
}

LogBinResult log_bin(const Market& market, const ItemAllocation& allocation, BinMode mode) {
  const int n = market.num_consumers();
  check_precondition(static_cast<int>(allocation.size()) == n, "allocation size differs from consumer count");
  LogBinResult out;
  out.filtered.assign(n, 0);
  out.log_base = mode == BinMode::kByValue ? market.mu() : market.num_items();
  std::vector<Rational> value(n);
  for (int i = 0; i < n; ++i) {
    value[i] = market.value(i, allocation[i]);
    out.input_welfare += value[i];
  }
  if (out.input_welfare.is_zero()) {
    out.guarantee_holds = true;
    return out;
  }
  // Bin index per consumer (-1: dropped).
  std::vector<int> bin(n, -1);
  if (mode == BinMode::kByValue) {
    const Rational floor = out.input_welfare / Rational(2L * out.log_base);
    for (int i = 0; i < n; ++i) {
      if (value[i].sign() <= 0 || value[i] < floor) continue;
      int b = 0;
      Rational upper = floor * Rational(2);
      while (value[i] >= upper) {
        upper *= Rational(2);
        ++b;
      }
      bin[i] = b;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      if (allocation[i] == 0 || value[i].sign() <= 0) continue;
      bin[i] = std::bit_width(static_cast<unsigned>(cardinality(allocation[i]))) - 1;
    }
  }
  std::map<int, Rational> totals;
  for (int i = 0; i < n; ++i) {
    if (bin[i] >= 0) totals[bin[i]] += value[i];
  }
  int best = -1;
  Rational best_total;
  for (const auto& [b, total] : totals) {
    if (best < 0 || total > best_total) {
      best = b;
      best_total = total;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (best < 0 || bin[i] != best) continue;
    out.filtered[i] = allocation[i];
    out.survivors.push_back(i);
    out.output_welfare += value[i];
    if (out.survivors.size() == 1 || value[i] < out.threshold) out.threshold = value[i];
    int size = cardinality(allocation[i]);
    if (out.survivors.size() == 1 || size < out.size_floor) out.size_floor = size;
  }
  out.r = static_cast<int>(out.survivors.size());
  out.guarantee_holds = within_log_factor(out.output_welfare, out.input_welfare, Rational(2), Rational(out.log_base));
  return out;
}

}  // namespace cbe
