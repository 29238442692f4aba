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
#include <cstdint>
#include <string>
#include <vector>

#include "cbe/errors.hpp"

namespace cbe {

// Upper bound on the elementary work an exhaustive operation may perform.
struct Budget {
  std::uint64_t limit = 50'000'000;

  void require(double work, const std::string& what) const {
    if (work > static_cast<double>(limit)) {
      throw ScaleGuardError(what + " needs ~" + std::to_string(static_cast<std::uint64_t>(work)) +
                            " steps, budget is " + std::to_string(limit));
    }
  }
};

// Bell numbers B(0..k) as doubles (used for scale guards only).
double bell_number(int k);

// Visits every set partition of {0..k-1} as a restricted-growth string:
// block[i] is the block index of element i, block[0] = 0 and
// block[i] <= 1 + max(block[0..i-1]). Visiting order is lexicographic.
template <typename F>
void for_each_set_partition(int k, F&& f) {
  if (k == 0) {
    std::vector<int> empty;
    f(empty, 0);
    return;
  }
  std::vector<int> block(k, 0);
  std::vector<int> prefix_max(k, 0);
  while (true) {
    f(static_cast<const std::vector<int>&>(block), prefix_max[k - 1] + 1);
    int i = k - 1;
    while (i > 0 && block[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) return;
    ++block[i];
    prefix_max[i] = std::max(prefix_max[i - 1], block[i]);
    for (int j = i + 1; j < k; ++j) {
      block[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

// Groups {0..k-1} by block label into masks, blocks ordered by label.
std::vector<std::uint32_t> blocks_to_masks(const std::vector<int>& block, int block_count);

}  // namespace cbe
