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

#include "cbe/instances.hpp"

#include <optional>
#include <random>
#include <utility>

#include "cbe/errors.hpp"
#include "cbe/valuation.hpp"

namespace cbe {

namespace {

void require_positive(const Rational& r, const std::string& what) {
  if (r.sign() <= 0) throw InstanceError(what + " must be positive");
}

void require_range(int value, int lo, int hi, const std::string& what) {
  if (value < lo || value > hi) {
    throw InstanceError(what + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

Valuation table_from_pairs(int m, const std::vector<std::pair<ItemSet, Rational>>& entries) {
  std::vector<Rational> table(std::size_t{1} << m);
  for (const auto& [s, v] : entries) table[s] = v;
  return Valuation::explicit_table(m, std::move(table));
}

Valuation multi_unit_step(int m, const Rational& below, const Rational& at_m) {
  std::vector<Rational> per_count(m + 1, below);
  per_count[0] = Rational(0);
  per_count[m] = at_m;
  return Valuation::multi_unit(std::move(per_count));
}

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  // Uniform-ish integer in [lo, hi] by reduction modulo the range width.
  int integer(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  // Multiples of 1/2 in [0, hi/2].
  Rational half(int hi) { return Rational(integer(0, hi), 2); }

 private:
  std::mt19937_64 rng_;
};

std::vector<Rational> weights(Draw& draw, int m, int hi = 8) {
  std::vector<Rational> w(m);
  for (auto& x : w) x = draw.half(hi);
  return w;
}

Valuation random_monotone(Draw& draw, int m) {
  const std::size_t count = std::size_t{1} << m;
  std::vector<Rational> table(count);
  for (std::size_t s = 1; s < count; ++s) {
    Rational v = draw.half(12);
    for (int j : members(static_cast<ItemSet>(s))) v = max(v, table[s & ~singleton(j)]);
    table[s] = v;
  }
  return Valuation::explicit_table(m, std::move(table));
}

Valuation random_superadditive(Draw& draw, int m) {
  const std::size_t count = std::size_t{1} << m;
  std::vector<Rational> table(count);
  for (std::size_t s = 1; s < count; ++s) {
    const ItemSet set = static_cast<ItemSet>(s);
    if (cardinality(set) == 1) {
      table[s] = draw.half(8);
      continue;
    }
    Rational best;
    for_each_subset(set, [&](ItemSet t) {
      if (t == 0 || t == set) return;
      best = max(best, table[t] + table[set & ~t]);
    });
    table[s] = best + draw.half(4);
  }
  return Valuation::explicit_table(m, std::move(table));
}

// Partition matroid: items in random blocks, each with a random capacity.
Matroid random_matroid(Draw& draw, int m) {
  if (draw.integer(0, 3) == 0) return Matroid::uniform(m, draw.integer(1, m));
  const int blocks = draw.integer(1, m);
  std::vector<int> block_of(m);
  for (auto& b : block_of) b = draw.integer(0, blocks - 1);
  std::vector<int> capacity(blocks);
  for (auto& c : capacity) c = draw.integer(1, 2);
  std::vector<ItemSet> independent;
  for (ItemSet s = 0; s <= full_set(m); ++s) {
    std::vector<int> used(blocks, 0);
    bool ok = true;
    for (int j : members(s)) ok = ok && ++used[block_of[j]] <= capacity[block_of[j]];
    if (ok) independent.push_back(s);
  }
  return Matroid::family(m, std::move(independent));
}

}  // namespace

Market prop22_market(const Rational& eps) {
  require_positive(eps, "epsilon");
  Valuation v1 = table_from_pairs(2, {{0b01, 1}, {0b10, 1}, {0b11, Rational(2) + eps}});
  return Market::from_valuations({v1, Valuation::unit_demand({2, 2})});
}

Market table1_market(const Rational& eps, const Rational& delta) {
  require_positive(eps, "epsilon");
  require_positive(delta, "delta");
  const Rational third = Rational(1) - eps / Rational(2) - delta;
  if (eps >= Rational(2) || third.sign() < 0) throw InstanceError("epsilon and delta too large for table1");
  return Market::from_valuations({
      Valuation::budget_additive({2, 1, 1}, 2),
      Valuation::budget_additive({0, 2, 2}, 2),
      Valuation::budget_additive({Rational(2) - eps, 0, third}, Rational(2) - eps),
  });
}

Market thm42_market(int m, const Rational& eps) {
  require_positive(eps, "epsilon");
  require_range(m, 2, 12, "m");
  std::vector<Valuation> vs;
  vs.push_back(multi_unit_step(m, Rational(1) + eps, Rational(2) + Rational(2) * eps));
  for (int i = 2; i <= m; ++i) {
    std::vector<Rational> per_count(m + 1, Rational(1, i));
    per_count[0] = Rational(0);
    vs.push_back(Valuation::multi_unit(std::move(per_count)));
  }
  return Market::from_valuations(std::move(vs));
}

Market ex81_market() {
  Valuation v1 = table_from_pairs(2, {{0b11, 8}});
  return Market::from_valuations({v1, Valuation::unit_demand({7, 7})});
}

Market ex82_market() {
  // Items a=1, b=2, c=4, d=8.
  auto consumer = [](ItemSet p, ItemSet q) {
    std::vector<Rational> table(16);
    for (ItemSet s = 1; s < 16; ++s) {
      const int size = cardinality(s);
      if (size == 1) {
        table[s] = 1;
      } else if (size == 2) {
        table[s] = (s == p || s == q) ? Rational(2) : Rational(3, 2);
      } else {
        table[s] = 2;
      }
    }
    return Valuation::explicit_table(4, std::move(table));
  };
  return Market::from_valuations({consumer(0b0011, 0b1100), consumer(0b1001, 0b0110)});
}

Market revenue_lb_market(int n) {
  require_range(n, 1, 16, "n");
  std::vector<Valuation> vs;
  for (int i = 1; i <= n; ++i) vs.push_back(Valuation::unit_demand(std::vector<Rational>(n, Rational(1, i))));
  return Market::from_valuations(std::move(vs));
}

std::vector<Rational> myerson_values(int n) {
  require_range(n, 2, 1000, "n");
  std::vector<Rational> out;
  for (int k = 2; k <= n; ++k) out.emplace_back(1, k);
  return out;
}

std::vector<std::string> named_instances() { return {"prop22", "table1", "thm42", "ex81", "ex82", "revenue-lb"}; }

Market gen_named(const InstanceSpec& spec) {
  if (spec.name == "prop22") return prop22_market(spec.epsilon);
  if (spec.name == "table1") return table1_market(spec.epsilon, spec.delta);
  if (spec.name == "thm42") return thm42_market(spec.m, spec.epsilon);
  if (spec.name == "ex81") return ex81_market();
  if (spec.name == "ex82") return ex82_market();
  if (spec.name == "revenue-lb") return revenue_lb_market(spec.n);
  throw InstanceError("unknown instance '" + spec.name + "'");
}

namespace {
const std::vector<std::pair<RandomClass, std::string>>& class_names() {
  static const std::vector<std::pair<RandomClass, std::string>> names = {
      {RandomClass::kExplicitMonotone, "explicit-monotone"},
      {RandomClass::kAdditive, "additive"},
      {RandomClass::kUnitDemand, "unit-demand"},
      {RandomClass::kBudgetAdditive, "budget-additive"},
      {RandomClass::kMultiUnit, "multi-unit"},
      {RandomClass::kMatroidUniform, "matroid-rank-uniform"},
      {RandomClass::kMatroidCommon, "matroid-rank-common"},
      {RandomClass::kSuperadditive, "superadditive"},
  };
  return names;
}
}  // namespace

RandomClass parse_random_class(const std::string& name) {
  for (const auto& [c, text] : class_names()) {
    if (text == name) return c;
  }
  throw InstanceError("unknown random class '" + name + "'");
}

std::string random_class_name(RandomClass c) {
  for (const auto& [k, text] : class_names()) {
    if (k == c) return text;
  }
  return "unknown";
}

std::vector<RandomClass> random_classes() {
  std::vector<RandomClass> out;
  for (const auto& entry : class_names()) out.push_back(entry.first);
  return out;
}

Market gen_random(RandomClass c, int m, int n, std::uint64_t seed) {
  require_range(m, 1, c == RandomClass::kMultiUnit ? kMaxItems : 10, "m");
  require_range(n, 1, 16, "n");
  Draw draw(seed);
  std::vector<Valuation> vs;
  std::optional<Matroid> common;
  if (c == RandomClass::kMatroidCommon) common = random_matroid(draw, m);
  for (int i = 0; i < n; ++i) {
    switch (c) {
      case RandomClass::kExplicitMonotone:
        vs.push_back(random_monotone(draw, m));
        break;
      case RandomClass::kAdditive:
        vs.push_back(Valuation::additive(weights(draw, m)));
        break;
      case RandomClass::kUnitDemand:
        vs.push_back(Valuation::unit_demand(weights(draw, m)));
        break;
      case RandomClass::kBudgetAdditive: {
        auto w = weights(draw, m);
        vs.push_back(Valuation::budget_additive(std::move(w), Rational(draw.integer(1, 16), 2)));
        break;
      }
      case RandomClass::kMultiUnit: {
        std::vector<Rational> per_count(m + 1);
        for (int k = 1; k <= m; ++k) per_count[k] = per_count[k - 1] + draw.half(4);
        vs.push_back(Valuation::multi_unit(std::move(per_count)));
        break;
      }
      case RandomClass::kMatroidUniform: {
        const int rank = draw.integer(1, m);
        vs.push_back(Valuation::matroid_rank(Matroid::uniform(m, rank), weights(draw, m)));
        break;
      }
      case RandomClass::kMatroidCommon:
        vs.push_back(Valuation::matroid_rank(*common, weights(draw, m)));
        break;
      case RandomClass::kSuperadditive:
        vs.push_back(random_superadditive(draw, m));
        break;
    }
  }
  return Market::from_valuations(std::move(vs));
}

}  // namespace cbe
