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

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace cbe {

// A subset of items (or of bundles) encoded as a bitmask; bit j is item j.
using ItemSet = std::uint32_t;
// A subset of bundle indices, same encoding as ItemSet.
using BundleSet = std::uint32_t;

// Exhaustive tables are materialized over all 2^m subsets, so m is capped.
inline constexpr int kMaxItems = 16;

inline constexpr ItemSet full_set(int m) { return m >= 32 ? ~ItemSet{0} : (ItemSet{1} << m) - 1; }
inline constexpr ItemSet singleton(int j) { return ItemSet{1} << j; }
inline constexpr bool contains(ItemSet s, int j) { return (s >> j) & 1U; }
inline constexpr bool is_subset(ItemSet a, ItemSet b) { return (a & ~b) == 0; }
inline int cardinality(ItemSet s) { return std::popcount(s); }

inline std::vector<int> members(ItemSet s) {
  std::vector<int> out;
  while (s != 0) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

// Calls f(sub) for every sub ⊆ s, including ∅ and s, in decreasing mask order.
template <typename F>
void for_each_subset(ItemSet s, F&& f) {
  ItemSet sub = s;
  while (true) {
    f(sub);
    if (sub == 0) break;
    sub = (sub - 1) & s;
  }
}

// Renders {a,c} as "ac" given labels; the empty set renders as "".
std::string set_key(ItemSet s, const std::vector<std::string>& labels);

}  // namespace cbe
