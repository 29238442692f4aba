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

#include <vector>

#include "cbe/bundling.hpp"
#include "cbe/enumeration.hpp"
#include "cbe/linear_program.hpp"
#include "cbe/market.hpp"
#include "cbe/rational.hpp"

namespace cbe {

// One positive primal coordinate x_{i,S}.
struct AssignmentEntry {
  int consumer = 0;
  ItemSet set = 0;
  Rational weight;

  friend bool operator==(const AssignmentEntry&, const AssignmentEntry&) = default;
};

struct ConfigLpResult {
  Rational fractional;
  std::vector<AssignmentEntry> support;
  Rational integral;
  bool integral_flag = false;
  // Lexicographically first welfare-optimal allocation.
  ItemAllocation integral_allocation;
  // Dual of the item rows (one per item) and of the consumer rows.
  std::vector<Rational> item_prices;
  std::vector<Rational> utilities;
  CertificateCheck certificate;
};

// max Σ v_i(S) x_{i,S}
//   s.t. Σ_{i, S∋j} x_{i,S} <= 1 for every item j,
//        Σ_S x_{i,S} <= 1 for every consumer i, x >= 0,
// with S ranging over nonempty subsets.
ConfigLpResult config_lp(const Market& market, const Budget& budget = {});

// The configuration LP as a LinearProgram: item rows first, then consumer
// rows; columns ordered by consumer, then by subset mask.
LinearProgram config_lp_program(const Market& market);

struct PartitionEntry {
  std::vector<ItemSet> parts;
  Rational weight;

  friend bool operator==(const PartitionEntry&, const PartitionEntry&) = default;
};

struct Cap2Result {
  Rational fractional;
  std::vector<AssignmentEntry> x_support;
  std::vector<PartitionEntry> z_support;
  // Dual: π₀, π_i per consumer, p_S indexed by subset mask (p_∅ = 0).
  Rational pi0;
  std::vector<Rational> pi;
  std::vector<Rational> subset_prices;
  Rational integral;
  bool integral_flag = false;
  CertificateCheck certificate;
  // Complementary slackness of the optimal pair in CAP2 terms:
  // p_S > 0 ⇒ subset row tight, x_{i,S} > 0 ⇒ π_i = v_i(S) − p_S.
  bool slackness_holds = false;
};

// max Σ v_i(S) x_{i,S}
//   s.t. Σ_S x_{i,S} <= 1                       (dual π_i)
//        Σ_i x_{i,S} <= Σ_{B ∋ S} z_B for S ≠ ∅ (dual p_S)
//        Σ_B z_B <= 1                           (dual π₀)
// with B ranging over all set partitions of the items.
Cap2Result cap2_lp(const Market& market, const Budget& budget = {});

// Efficient CBE from an integral CAP2 optimum: the bundling is the
// nonempty parts of the welfare-optimal allocation, bundle prices are the
// dual subset prices. Throws PreconditionError if the optimum is fractional
// and InvariantViolation if the result fails verification.
Outcome nlpe_to_cbe(const Market& market, const Cap2Result& cap2);

struct MenuMechanism {
  std::vector<Rational> values;
  Rational cap;
  // Option (x_i, p_i) assigned to type i.
  std::vector<Rational> probabilities;
  std::vector<Rational> prices;
  // Mean of p_i over the equally likely types.
  Rational revenue;
};

// Revenue-maximal single-bidder menu: types equally likely, IC between every
// pair of types, IR, and allocation probabilities in [0, cap].
MenuMechanism menu_lp(const std::vector<Rational>& values, const Rational& cap);

// Best posted price over the type values (deterministic reserve mechanism).
Rational best_reserve_revenue(const std::vector<Rational>& values);

// IC, IR and cap checks of a menu, exactly.
bool menu_is_valid(const MenuMechanism& menu);

}  // namespace cbe
