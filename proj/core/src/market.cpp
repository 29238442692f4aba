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

#include "cbe/market.hpp"

#include <set>

#include "cbe/errors.hpp"

namespace cbe {

Market::Market(std::vector<std::string> item_labels, std::vector<Consumer> consumers)
    : labels_(std::move(item_labels)), consumers_(std::move(consumers)) {
  if (labels_.empty()) throw ConstructionError("a market needs at least one item");
  if (consumers_.empty()) throw ConstructionError("a market needs at least one consumer");
  if (static_cast<int>(labels_.size()) > kMaxItems) throw ConstructionError("too many items");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw ConstructionError("item labels must be nonempty");
    if (!seen.insert(l).second) throw ConstructionError("duplicate item label '" + l + "'");
  }
  for (const auto& c : consumers_) {
    if (c.valuation.num_items() != num_items()) {
      throw ConstructionError("consumer '" + c.name + "' has a valuation over " +
                              std::to_string(c.valuation.num_items()) + " items, market has " +
                              std::to_string(num_items()));
    }
  }
}

std::vector<std::string> Market::default_labels(int m) {
  if (m < 0 || m > 26) throw ConstructionError("default labels cover at most 26 items");
  std::vector<std::string> out;
  for (int j = 0; j < m; ++j) out.emplace_back(1, static_cast<char>('a' + j));
  return out;
}

Market Market::from_valuations(std::vector<Valuation> valuations) {
  if (valuations.empty()) throw ConstructionError("a market needs at least one consumer");
  std::vector<Consumer> consumers;
  for (std::size_t i = 0; i < valuations.size(); ++i) {
    consumers.push_back(Consumer{std::to_string(i + 1), std::move(valuations[i])});
  }
  int m = consumers.front().valuation.num_items();
  return Market(default_labels(m), std::move(consumers));
}

bool Market::all_of_kind(ValuationKind kind) const {
  for (const auto& c : consumers_) {
    if (c.valuation.kind() != kind) return false;
  }
  return true;
}

bool Market::all_monotone() const {
  for (const auto& c : consumers_) {
    if (!c.valuation.monotone()) return false;
  }
  return true;
}

Market Market::with_valuation(int i, Valuation v) const {
  std::vector<Consumer> cs = consumers_;
  cs.at(i).valuation = std::move(v);
  return Market(labels_, std::move(cs));
}

}  // namespace cbe
