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

#include <algorithm>
#include <string>
#include <vector>

#include "cbe/item_set.hpp"
#include "cbe/valuation.hpp"

namespace cbe {

struct Consumer {
  std::string name;
  Valuation valuation;
};

// Items {0..m-1} with labels and an ordered list of consumers.
class Market {
 public:
  // Throws ConstructionError on m < 1, n < 1, duplicate labels, or a
  // valuation defined over a different number of items.
  Market(std::vector<std::string> item_labels, std::vector<Consumer> consumers);

  // Labels "a", "b", ... for m <= 26.
  static std::vector<std::string> default_labels(int m);
  // Consumers named "1".."n" with default item labels.
  static Market from_valuations(std::vector<Valuation> valuations);

  int num_items() const { return static_cast<int>(labels_.size()); }
  int num_consumers() const { return static_cast<int>(consumers_.size()); }
  int mu() const { return std::min(num_items(), num_consumers()); }
  ItemSet all_items() const { return full_set(num_items()); }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Consumer>& consumers() const { return consumers_; }
  const Valuation& valuation(int i) const { return consumers_.at(i).valuation; }
  const Rational& value(int i, ItemSet s) const { return consumers_[i].valuation.value(s); }

  bool all_of_kind(ValuationKind kind) const;
  bool all_monotone() const;

  // Same market with consumer i's valuation replaced.
  Market with_valuation(int i, Valuation v) const;

 private:
  std::vector<std::string> labels_;
  std::vector<Consumer> consumers_;
};

}  // namespace cbe
