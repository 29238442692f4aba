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

#include "cbe/bundling.hpp"

#include <string>

#include "cbe/errors.hpp"

namespace cbe {

Bundling Bundling::singletons(int m) {
  Bundling b;
  for (int j = 0; j < m; ++j) b.bundles.push_back(singleton(j));
  return b;
}

Bundling Bundling::grand(int m) { return Bundling{{full_set(m)}}; }

void Bundling::validate(int m) const {
  ItemSet seen = 0;
  for (std::size_t k = 0; k < bundles.size(); ++k) {
    ItemSet b = bundles[k];
    if (b == 0) throw ConstructionError("bundle " + std::to_string(k) + " is empty");
    if (!is_subset(b, full_set(m))) throw ConstructionError("bundle " + std::to_string(k) + " has unknown items");
    if (b & seen) throw ConstructionError("bundle " + std::to_string(k) + " overlaps an earlier bundle");
    seen |= b;
  }
  if (seen != full_set(m)) throw ConstructionError("bundles do not cover every item");
  if (bundles.size() > 31) throw ConstructionError("too many bundles");
}

ItemSet Bundling::items_of(BundleSet chosen) const {
  ItemSet out = 0;
  for (int k : members(chosen)) out |= bundles.at(k);
  return out;
}

void PricedBundling::validate(int m) const {
  bundling.validate(m);
  if (prices.size() != bundling.bundles.size()) throw ConstructionError("one price per bundle is required");
  for (std::size_t k = 0; k < prices.size(); ++k) {
    if (prices[k].sign() < 0) throw ConstructionError("price of bundle " + std::to_string(k) + " is negative");
  }
}

Rational PricedBundling::price_of(BundleSet chosen) const {
  Rational total;
  for (int k : members(chosen)) total += prices.at(k);
  return total;
}

Rational PricedBundling::total_price() const {
  Rational total;
  for (const auto& p : prices) total += p;
  return total;
}

void Outcome::validate(const Market& market) const {
  priced.validate(market.num_items());
  if (static_cast<int>(allocation.size()) != market.num_consumers()) {
    throw ConstructionError("allocation must list every consumer");
  }
  BundleSet seen = 0;
  const BundleSet valid = full_set(priced.bundling.size());
  for (std::size_t i = 0; i < allocation.size(); ++i) {
    if (!is_subset(allocation[i], valid)) {
      throw ConstructionError("consumer " + std::to_string(i) + " holds an unknown bundle");
    }
    if (allocation[i] & seen) throw ConstructionError("a bundle is allocated twice");
    seen |= allocation[i];
  }
}

Rational Outcome::welfare(const Market& market) const {
  Rational total;
  for (std::size_t i = 0; i < allocation.size(); ++i) total += market.value(static_cast<int>(i), items_of(i));
  return total;
}

Rational Outcome::revenue() const {
  Rational total;
  for (BundleSet s : allocation) total += priced.price_of(s);
  return total;
}

Rational allocation_welfare(const Market& market, const ItemAllocation& allocation) {
  Rational total;
  for (std::size_t i = 0; i < allocation.size(); ++i) total += market.value(static_cast<int>(i), allocation[i]);
  return total;
}

}  // namespace cbe
