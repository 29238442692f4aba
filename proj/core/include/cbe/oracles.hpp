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

#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "cbe/bundling.hpp"
#include "cbe/enumeration.hpp"
#include "cbe/market.hpp"
#include "cbe/valuation.hpp"

namespace cbe {

struct DemandResult {
  Rational payoff;
  // Every payoff maximizer, in increasing mask order.
  std::vector<BundleSet> maximizers;
};

// Brute force over all 2^|bundles| sets of bundles.
DemandResult demand_query(const Valuation& v, const PricedBundling& pb);

struct FastDemand {
  Rational payoff;
  // One maximizer.
  BundleSet witness = 0;
};

// Specialized maximum-payoff computation for Additive, UnitDemand and
// MultiUnit valuations (the MultiUnit path is a knapsack over bundle sizes
// that only reads per-count values). Other kinds fall back to brute force.
FastDemand demand_fast(const Valuation& v, const PricedBundling& pb);

// Counters for cross-checking the specialized demand paths.
struct DemandAudit {
  std::atomic<std::uint64_t> queries{0};
  std::atomic<std::uint64_t> mismatches{0};
};

// demand_fast, optionally compared against demand_query: payoffs must be
// equal and the witness must be a brute-force maximizer.
FastDemand demand_checked(const Valuation& v, const PricedBundling& pb, DemandAudit* audit);

// v(T) + v(U) >= v(T ∪ U) for all T, U.
bool check_subadditive(const Valuation& v);
// v(T) + v(U) <= v(T ∪ U) for all disjoint T, U.
bool check_superadditive(const Valuation& v);
// Local characterization: for all S and distinct i, j, k outside S,
//   v(S+i+j) + v(S) <= v(S+i) + v(S+j)  and
//   v(S+i+j) + v(S+k) <= max(v(S+i+k) + v(S+j), v(S+j+k) + v(S+i)).
bool check_gross_substitutes(const Valuation& v);

struct WelfareResult {
  Rational value;
  // Covers all items: the last consumer receives whatever is left.
  ItemAllocation allocation;
};

// Exact welfare optimum. Generic path is a subset dynamic program with
// n * 3^m steps; markets of MultiUnit valuations use a per-count program.
// Ties resolve to the first optimum in consumer order, each consumer taking
// the smallest-mask part that still admits an optimal completion.
WelfareResult welfare_opt(const Market& market, const Budget& budget = {});

// Market over the bundles of `bundling`, where v'_i(T) = v_i(∪T).
Market induced_market(const Market& market, const Bundling& bundling);

}  // namespace cbe
