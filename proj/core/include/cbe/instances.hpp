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

#include <cstdint>
#include <string>
#include <vector>

#include "cbe/market.hpp"
#include "cbe/rational.hpp"

namespace cbe {

// Two items; consumer 1 values each item at 1 and both at 2 + eps, consumer 2
// is unit-demand with value 2.
Market prop22_market(const Rational& eps);

// Three budget-additive consumers over items a, b, c.
Market table1_market(const Rational& eps, const Rational& delta);

// m identical units and m consumers: consumer 1 values fewer than m units at
// 1 + eps and all m at 2 + 2eps; consumer i >= 2 is unit-demand at 1/i.
Market thm42_market(int m, const Rational& eps);

// Two items; consumer 1 values only ab (at 8), consumer 2 is unit-demand at 7.
Market ex81_market();

// Four items and two submodular consumers whose favourite pairs cross.
Market ex82_market();

// n unit-demand consumers over n items; consumer i values every item at 1/i.
Market revenue_lb_market(int n);

// The n - 1 equally likely values 1/2, ..., 1/n.
std::vector<Rational> myerson_values(int n);

struct InstanceSpec {
  std::string name;
  Rational epsilon{1, 10};
  Rational delta{1, 100};
  int m = 4;
  int n = 4;
  std::uint64_t seed = 1;
};

// Named instances: prop22, table1, thm42, ex81, ex82, revenue-lb.
Market gen_named(const InstanceSpec& spec);
std::vector<std::string> named_instances();

enum class RandomClass {
  kExplicitMonotone,
  kAdditive,
  kUnitDemand,
  kBudgetAdditive,
  kMultiUnit,
  kMatroidUniform,
  kMatroidCommon,
  kSuperadditive,
};

RandomClass parse_random_class(const std::string& name);
std::string random_class_name(RandomClass c);
std::vector<RandomClass> random_classes();

// Deterministic for a fixed seed: mt19937_64 draws reduced modulo the range.
Market gen_random(RandomClass c, int m, int n, std::uint64_t seed);

}  // namespace cbe
