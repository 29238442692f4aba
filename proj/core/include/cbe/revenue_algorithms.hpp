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

#include <vector>

#include "cbe/bundling.hpp"
#include "cbe/market.hpp"
#include "cbe/rational.hpp"
#include "cbe/welfare_algorithms.hpp"

namespace cbe {

// CE in which unsold items carry price q instead of zero.
struct ReserveEquilibrium {
  Rational q;
  std::vector<Rational> prices;
  ItemAllocation allocation;
  int unallocated = 0;
  Rational opt;
  // Items kept by the binned optimum (all of value in [q, 2q)).
  int kept_items = 0;
  // Σ of prices of items held by real consumers.
  Rational revenue;
  // revenue >= OPT / (constant (log2 m + 2)).
  int constant = 8;
  bool bound_holds = false;
};

// Rewrites unit-demand consumers as rank-1 uniform matroids and additive ones
// as free (rank m) uniform matroids; other valuations are kept.
Market matroid_view(const Market& market);

// Market with an extra additive consumer valuing every item at `q`, appended
// last, restricted to the listed consumers.
Market reserve_market(const Market& market, const std::vector<int>& consumers, const Rational& q);

// Reserve-price CE for weighted matroid rank valuations: bins the per-item
// contributions of an optimum, adds an extra additive consumer at the bin
// value and keeps, among welfare-optimal allocations, one selling the most
// items to real consumers.
ReserveEquilibrium reserve_equilibrium(const Market& market);

// Uniform-matroid consumers: the better of the exhausted-rank and
// non-exhausted-rank partial CBEs, lifted; revenue >= OPT / (16 (log2 m + 2)).
Construction uniform_matroid_revenue_cbe(const Market& market, const LiftOptions& lift = {});

struct ExtraConsumerState {
  // n real bundles followed by the residual bundle S_{n+1}.
  std::vector<ItemSet> bundles;
  std::vector<Rational> item_prices;
  std::vector<Rational> bundle_prices;
  Rational q;
  std::vector<int> ranks;
  // 0 at the start, then 1 or 2 for the case taken by the latest step.
  int last_case = 0;
  int steps = 0;

  ItemSet residual() const { return bundles.back(); }
  bool done() const { return residual() == 0 || q.is_zero(); }
  Rational revenue() const;
};

// The three defining properties, checked by brute force.
struct ExtraConsumerCheck {
  bool profit = true;
  bool bundle_prices = true;
  bool reserve = true;
  bool ok() const { return profit && bundle_prices && reserve; }
};
ExtraConsumerCheck check_extra_consumer(const Market& market, const ExtraConsumerState& state);

// Starting point from the reserve equilibrium with additive bundle prices.
ExtraConsumerState extra_consumer_start(const Market& market);

// One step: absorbs a residual item without raising a rank when possible,
// otherwise moves the highest-weight residual item and lowers the reserve.
ExtraConsumerState extra_consumer_step(const Market& market, const ExtraConsumerState& state);

// Converts a finished state into a CBE: the residual bundle is priced zero
// and handed to the consumer with the largest marginal value for it.
Outcome extra_consumer_to_cbe(const Market& market, const ExtraConsumerState& state);

// Full pipeline for consumers sharing one matroid; revenue >= OPT / (8 (log2 m + 2)).
Construction common_matroid_revenue_cbe(const Market& market);

}  // namespace cbe
