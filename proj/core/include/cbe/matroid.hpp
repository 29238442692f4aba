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

#include <memory>
#include <vector>

#include "cbe/item_set.hpp"

namespace cbe {

enum class MatroidKind { kUniform, kFamily };

// A matroid on items {0..m-1}. Immutable; copies share state.
class Matroid {
 public:
  // All sets of size at most `rank`.
  static Matroid uniform(int ground_size, int rank);
  // Explicit independent family. Validates ∅ ∈ I, downward closure and the
  // exchange property exhaustively; violations are ConstructionErrors.
  static Matroid family(int ground_size, std::vector<ItemSet> independent);

  MatroidKind kind() const { return kind_; }
  int ground_size() const { return ground_; }
  // Rank k of a uniform matroid.
  int uniform_rank() const { return rank_k_; }
  // Maximal and non-maximal independent sets in increasing mask order.
  std::vector<ItemSet> independent_sets() const;

  bool is_independent(ItemSet s) const;
  int rank(ItemSet s) const;

  friend bool operator==(const Matroid& a, const Matroid& b);

 private:
  Matroid() = default;
  MatroidKind kind_ = MatroidKind::kUniform;
  int ground_ = 0;
  int rank_k_ = 0;
  std::shared_ptr<const std::vector<int>> rank_table_;  // family only
  std::shared_ptr<const std::vector<bool>> independent_;
};

int matroid_rank(const Matroid& matroid, ItemSet s);

}  // namespace cbe
