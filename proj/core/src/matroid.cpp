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

#include "cbe/matroid.hpp"

#include <algorithm>
#include <string>

#include "cbe/errors.hpp"

namespace cbe {

Matroid Matroid::uniform(int ground_size, int rank) {
  if (ground_size < 0 || ground_size > kMaxItems) throw ConstructionError("matroid ground set too large");
  if (rank < 0) throw ConstructionError("uniform matroid rank must be nonnegative");
  Matroid mat;
  mat.kind_ = MatroidKind::kUniform;
  mat.ground_ = ground_size;
  mat.rank_k_ = std::min(rank, ground_size);
  return mat;
}

Matroid Matroid::family(int ground_size, std::vector<ItemSet> independent) {
  if (ground_size < 0 || ground_size > kMaxItems) throw ConstructionError("matroid ground set too large");
  const std::size_t count = std::size_t{1} << ground_size;
  auto indep = std::make_shared<std::vector<bool>>(count, false);
  for (ItemSet s : independent) {
    if (s >= count) throw ConstructionError("independent set outside the ground set");
    (*indep)[s] = true;
  }
  if (!(*indep)[0]) throw ConstructionError("the empty set must be independent");
  for (ItemSet s = 1; s < count; ++s) {
    if (!(*indep)[s]) continue;
    for (int j : members(s)) {
      if (!(*indep)[s & ~singleton(j)]) {
        throw ConstructionError("independent family is not downward closed at set " + std::to_string(s));
      }
    }
  }
  for (ItemSet big = 0; big < count; ++big) {
    if (!(*indep)[big]) continue;
    for (ItemSet small = 0; small < count; ++small) {
      if (!(*indep)[small] || cardinality(small) >= cardinality(big)) continue;
      bool extended = false;
      for (int j : members(big & ~small)) {
        if ((*indep)[small | singleton(j)]) {
          extended = true;
          break;
        }
      }
      if (!extended) throw ConstructionError("independent family violates the exchange property");
    }
  }
  auto ranks = std::make_shared<std::vector<int>>(count, 0);
  for (ItemSet s = 1; s < count; ++s) {
    if ((*indep)[s]) {
      (*ranks)[s] = cardinality(s);
    } else {
      int best = 0;
      for (int j : members(s)) best = std::max(best, (*ranks)[s & ~singleton(j)]);
      (*ranks)[s] = best;
    }
  }
  Matroid mat;
  mat.kind_ = MatroidKind::kFamily;
  mat.ground_ = ground_size;
  mat.rank_k_ = (*ranks)[count - 1];
  mat.independent_ = std::move(indep);
  mat.rank_table_ = std::move(ranks);
  return mat;
}

std::vector<ItemSet> Matroid::independent_sets() const {
  std::vector<ItemSet> out;
  const ItemSet count = ItemSet{1} << ground_;
  for (ItemSet s = 0; s < count; ++s) {
    if (is_independent(s)) out.push_back(s);
  }
  return out;
}

bool Matroid::is_independent(ItemSet s) const {
  if (kind_ == MatroidKind::kUniform) return cardinality(s) <= rank_k_;
  return (*independent_)[s];
}

int Matroid::rank(ItemSet s) const {
  if (kind_ == MatroidKind::kUniform) return std::min(cardinality(s), rank_k_);
  return (*rank_table_)[s];
}

bool operator==(const Matroid& a, const Matroid& b) {
  if (a.kind_ != b.kind_ || a.ground_ != b.ground_ || a.rank_k_ != b.rank_k_) return false;
  if (a.kind_ == MatroidKind::kUniform) return true;
  return *a.independent_ == *b.independent_;
}

int matroid_rank(const Matroid& matroid, ItemSet s) { return matroid.rank(s); }

}  // namespace cbe
