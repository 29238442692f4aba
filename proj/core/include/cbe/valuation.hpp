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
#include <optional>
#include <vector>

#include "cbe/item_set.hpp"
#include "cbe/matroid.hpp"
#include "cbe/rational.hpp"

namespace cbe {

enum class ValuationKind { kExplicit, kAdditive, kUnitDemand, kBudgetAdditive, kMultiUnit, kMatroidRank };

// A valuation over items {0..m-1}. Every variant materializes its full value
// table at construction, so value queries are lookups and the object is
// immutable afterwards.
class Valuation {
 public:
  // Table indexed by item mask. Validates v(∅) = 0 and monotonicity.
  static Valuation explicit_table(int m, std::vector<Rational> table);
  // Table without monotonicity validation (v(∅) = 0 is still required). Used
  // for the shifted valuations of the partial-equilibrium lift.
  static Valuation unchecked_table(int m, std::vector<Rational> table);
  static Valuation additive(std::vector<Rational> weights);
  // v(S) = max_{j in S} w_j.
  static Valuation unit_demand(std::vector<Rational> weights);
  // v(S) = min(Σ_{j in S} w_j, budget).
  static Valuation budget_additive(std::vector<Rational> weights, Rational budget);
  // Identical units: v(S) = per_count[|S|]; per_count has m + 1 entries.
  static Valuation multi_unit(std::vector<Rational> per_count);
  // v(S) = weight of a maximum-weight independent subset of S.
  static Valuation matroid_rank(Matroid matroid, std::vector<Rational> weights);

  ValuationKind kind() const { return data_->kind; }
  int num_items() const { return data_->m; }
  bool monotone() const { return data_->monotone; }

  const Rational& value(ItemSet s) const { return data_->table[s]; }
  const std::vector<Rational>& table() const { return data_->table; }

  // Variant parameters; empty/nullopt when not applicable.
  const std::vector<Rational>& weights() const { return data_->weights; }
  const std::optional<Rational>& budget() const { return data_->budget; }
  const std::vector<Rational>& per_count() const { return data_->per_count; }
  const std::optional<Matroid>& matroid() const { return data_->matroid; }

  // Same kind and parameters (tables then coincide).
  friend bool operator==(const Valuation& a, const Valuation& b);

 private:
  struct Data {
    ValuationKind kind = ValuationKind::kExplicit;
    int m = 0;
    bool monotone = true;
    std::vector<Rational> table;
    std::vector<Rational> weights;
    std::optional<Rational> budget;
    std::vector<Rational> per_count;
    std::optional<Matroid> matroid;
  };
  explicit Valuation(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  static void check_items(int m);

  std::shared_ptr<const Data> data_;
};

const Rational& value_query(const Valuation& v, ItemSet s);

// Σ over the items of S of v({j}).
Rational singleton_sum(const Valuation& v, ItemSet s);

}  // namespace cbe
