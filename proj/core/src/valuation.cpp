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

#include "cbe/valuation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cbe/errors.hpp"

namespace cbe {

void Valuation::check_items(int m) {
  if (m < 1 || m > kMaxItems) {
    throw ConstructionError("valuations support 1.." + std::to_string(kMaxItems) + " items, got " +
                            std::to_string(m));
  }
}

namespace {

void require_nonnegative(const std::vector<Rational>& xs, const char* what) {
  for (const auto& x : xs) {
    if (x.sign() < 0) throw ConstructionError(std::string(what) + " must be nonnegative");
  }
}

bool table_monotone(const std::vector<Rational>& table, int m) {
  for (ItemSet s = 1; s < table.size(); ++s) {
    for (int j = 0; j < m; ++j) {
      if (contains(s, j) && table[s & ~singleton(j)] > table[s]) return false;
    }
  }
  return true;
}

}  // namespace

Valuation Valuation::explicit_table(int m, std::vector<Rational> table) {
  check_items(m);
  if (table.size() != (std::size_t{1} << m)) throw ConstructionError("explicit table must have 2^m entries");
  if (!table[0].is_zero()) throw ConstructionError("valuation must satisfy v(empty) = 0");
  require_nonnegative(table, "values");
  if (!table_monotone(table, m)) throw ConstructionError("explicit valuation is not monotone");
  auto d = std::make_shared<Data>();
  d->kind = ValuationKind::kExplicit;
  d->m = m;
  d->table = std::move(table);
  return Valuation(std::move(d));
}

Valuation Valuation::unchecked_table(int m, std::vector<Rational> table) {
  check_items(m);
  if (table.size() != (std::size_t{1} << m)) throw ConstructionError("explicit table must have 2^m entries");
  if (!table[0].is_zero()) throw ConstructionError("valuation must satisfy v(empty) = 0");
  auto d = std::make_shared<Data>();
  d->kind = ValuationKind::kExplicit;
  d->m = m;
  d->monotone = table_monotone(table, m);
  d->table = std::move(table);
  return Valuation(std::move(d));
}

Valuation Valuation::additive(std::vector<Rational> weights) {
  const int m = static_cast<int>(weights.size());
  check_items(m);
  require_nonnegative(weights, "weights");
  auto d = std::make_shared<Data>();
  d->kind = ValuationKind::kAdditive;
  d->m = m;
  d->table.resize(std::size_t{1} << m);
  for (ItemSet s = 1; s < d->table.size(); ++s) {
    int j = std::countr_zero(s);
    d->table[s] = d->table[s & (s - 1)] + weights[j];
  }
  d->weights = std::move(weights);
  return Valuation(std::move(d));
}

Valuation Valuation::unit_demand(std::vector<Rational> weights) {
  const int m = static_cast<int>(weights.size());
  check_items(m);
  require_nonnegative(weights, "weights");
  auto d = std::make_shared<Data>();
  d->kind = ValuationKind::kUnitDemand;
  d->m = m;
  d->table.resize(std::size_t{1} << m);
  for (ItemSet s = 1; s < d->table.size(); ++s) {
    int j = std::countr_zero(s);
    d->table[s] = max(d->table[s & (s - 1)], weights[j]);
  }
  d->weights = std::move(weights);
  return Valuation(std::move(d));
}

Valuation Valuation::budget_additive(std::vector<Rational> weights, Rational budget) {
  const int m = static_cast<int>(weights.size());
  check_items(m);
  require_nonnegative(weights, "weights");
  if (budget.sign() < 0) throw ConstructionError("budget must be nonnegative");
  auto d = std::make_shared<Data>();
  d->kind = ValuationKind::kBudgetAdditive;
  d->m = m;
  std::vector<Rational> sums(std::size_t{1} << m);
  d->table.resize(sums.size());
  for (ItemSet s = 1; s < sums.size(); ++s) {
    int j = std::countr_zero(s);
    sums[s] = sums[s & (s - 1)] + weights[j];
    d->table[s] = min(sums[s], budget);
  }
  d->weights = std::move(weights);
  d->budget = std::move(budget);
  return Valuation(std::move(d));
}

Valuation Valuation::multi_unit(std::vector<Rational> per_count) {
  const int m = static_cast<int>(per_count.size()) - 1;
  check_items(m);
  if (!per_count[0].is_zero()) throw ConstructionError("multi-unit value of zero units must be 0");
  for (int u = 1; u <= m; ++u) {
    if (per_count[u] < per_count[u - 1]) throw ConstructionError("multi-unit values must be non-decreasing");
  }
  auto d = std::make_shared<Data>();
  d->kind = ValuationKind::kMultiUnit;
  d->m = m;
  d->table.resize(std::size_t{1} << m);
  for (ItemSet s = 1; s < d->table.size(); ++s) d->table[s] = per_count[cardinality(s)];
  d->per_count = std::move(per_count);
  return Valuation(std::move(d));
}

Valuation Valuation::matroid_rank(Matroid matroid, std::vector<Rational> weights) {
  const int m = static_cast<int>(weights.size());
  check_items(m);
  require_nonnegative(weights, "weights");
  if (matroid.ground_size() != m) throw ConstructionError("matroid ground set does not match the weights");
  // Matroid greedy: scan items by decreasing weight (ties by index).
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weights[a] > weights[b]; });
  auto d = std::make_shared<Data>();
  d->kind = ValuationKind::kMatroidRank;
  d->m = m;
  d->table.resize(std::size_t{1} << m);
  for (ItemSet s = 1; s < d->table.size(); ++s) {
    ItemSet chosen = 0;
    Rational total;
    for (int j : order) {
      if (contains(s, j) && matroid.is_independent(chosen | singleton(j))) {
        chosen |= singleton(j);
        total += weights[j];
      }
    }
    d->table[s] = total;
  }
  d->weights = std::move(weights);
  d->matroid = std::move(matroid);
  return Valuation(std::move(d));
}

bool operator==(const Valuation& a, const Valuation& b) {
  if (a.data_ == b.data_) return true;
  const auto& x = *a.data_;
  const auto& y = *b.data_;
  return x.kind == y.kind && x.m == y.m && x.table == y.table && x.weights == y.weights && x.budget == y.budget &&
         x.per_count == y.per_count && x.matroid == y.matroid;
}

const Rational& value_query(const Valuation& v, ItemSet s) { return v.value(s); }

Rational singleton_sum(const Valuation& v, ItemSet s) {
  Rational total;
  for (int j : members(s)) total += v.value(singleton(j));
  return total;
}

}  // namespace cbe
