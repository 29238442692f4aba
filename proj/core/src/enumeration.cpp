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

#include "cbe/enumeration.hpp"

#include "cbe/item_set.hpp"

namespace cbe {

double bell_number(int k) {
  // Bell triangle.
  std::vector<double> row{1.0};
  for (int i = 0; i < k; ++i) {
    std::vector<double> next{row.back()};
    for (double x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

std::vector<std::uint32_t> blocks_to_masks(const std::vector<int>& block, int block_count) {
  std::vector<std::uint32_t> masks(block_count, 0);
  for (std::size_t i = 0; i < block.size(); ++i) masks[block[i]] |= singleton(static_cast<int>(i));
  return masks;
}

std::string set_key(ItemSet s, const std::vector<std::string>& labels) {
  std::string out;
  for (int j : members(s)) out += labels.at(j);
  return out;
}

}  // namespace cbe
