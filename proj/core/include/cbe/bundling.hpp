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

#include "cbe/item_set.hpp"
#include "cbe/market.hpp"
#include "cbe/rational.hpp"

namespace cbe {

// A partition of the items into nonempty bundles.
struct Bundling {
  std::vector<ItemSet> bundles;

  static Bundling singletons(int m);
  static Bundling grand(int m);
  // Throws ConstructionError unless the bundles are nonempty, pairwise
  // disjoint and cover all m items.
  void validate(int m) const;
  int size() const { return static_cast<int>(bundles.size()); }
  // Union of the bundles whose indices are in `chosen`.
  ItemSet items_of(BundleSet chosen) const;

  friend bool operator==(const Bundling&, const Bundling&) = default;
};

struct PricedBundling {
  Bundling bundling;
  std::vector<Rational> prices;

  // Bundling validity plus one nonnegative price per bundle.
  void validate(int m) const;
  Rational price_of(BundleSet chosen) const;
  Rational total_price() const;

  friend bool operator==(const PricedBundling&, const PricedBundling&) = default;
};

// Per consumer, a set of items (used when there is no bundling context).
using ItemAllocation = std::vector<ItemSet>;
// Per consumer, a set of bundle indices.
using BundleAllocation = std::vector<BundleSet>;

// A priced bundling together with an allocation of its bundles.
struct Outcome {
  PricedBundling priced;
  BundleAllocation allocation;

  // Structural checks only: valid bundling and prices, one entry per
  // consumer, indices in range, no bundle given twice. Clearance and profit
  // maximization are the verifier's job.
  void validate(const Market& market) const;
  ItemSet items_of(int consumer) const { return priced.bundling.items_of(allocation[consumer]); }
  Rational welfare(const Market& market) const;
  // Σ of prices over allocated bundles.
  Rational revenue() const;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

Rational allocation_welfare(const Market& market, const ItemAllocation& allocation);

}  // namespace cbe
