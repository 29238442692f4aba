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

#include <optional>
#include <string>
#include <vector>

#include "cbe/bundling.hpp"
#include "cbe/lifting.hpp"
#include "cbe/market.hpp"
#include "cbe/oracles.hpp"
#include "cbe/rational.hpp"

namespace cbe {

// A verified CBE together with the benchmark it is measured against.
struct Construction {
  Outcome outcome;
  Rational welfare;
  Rational revenue;
  Rational opt;
  // Which branch of the construction produced the outcome.
  std::string path;
  // Human-readable form of the guarantee and whether it holds exactly.
  std::string bound;
  bool bound_holds = false;
};

// Grand bundle to the consumer valuing M most, priced at that value.
Outcome grand_bundle_outcome(const Market& market);

// Two consumers: efficient when both are subadditive, welfare >= (2/3)·OPT
// in general.
Construction two_consumer_cbe(const Market& market);

// All subadditive: CE of the 2-bundle market (O_1 | rest), welfare >= (2/n)·OPT.
Construction subadditive_n_over_2(const Market& market);

struct MultiUnitOptions {
  // Price discount; zero selects v/2^10.
  Rational epsilon;
  LiftOptions lift{};
  // When set, demand queries on the constructed prices are cross-checked
  // against brute force.
  DemandAudit* audit = nullptr;
};

// Multi-unit markets: welfare >= OPT / (20 (log2 μ + 2)).
Construction multiunit_cbe(const Market& market, const MultiUnitOptions& options = {});

// Pre-bundles the units into n² equal groups (leftovers in the last), then
// runs the multi-unit pipeline over group counts; guarantee weakened by 2.
Construction multiunit_value_query_mode(const Market& market, const MultiUnitOptions& options = {});

// Sizes of the value-query pre-bundles for m units and n consumers.
std::vector<int> prebundle_sizes(int m, int n);

// Parts S_i with v_i(S_i) in [v, 2v) grouped ⌈√r⌉ at a time and priced just
// below v; welfare >= Σ v_i(S_i) / (4√r + 4).
Construction general_sqrt(const Market& market, const ItemAllocation& parts, const Rational& v,
                          const LiftOptions& lift = {});

struct AkStep {
  int consumer = 0;
  ItemSet bundle = 0;
  Rational value;
  // Restricted optimum over the consumers and items left after the step.
  Rational w_after;
};

struct AkTrace {
  int k = 1;
  ItemAllocation allocation;
  std::vector<AkStep> steps;
  // Items still unallocated before each step, then after the last.
  std::vector<ItemSet> remaining;
  // Restricted optimum over all consumers and items.
  Rational w;
  Rational welfare;
};

// Best allocation of `items` to `consumers` (bitmask) with every nonempty part
// of size in [k, 2k).
Rational restricted_welfare(const Market& market, std::uint32_t consumers, ItemSet items, int k,
                            const Budget& budget = {});

// Greedy A_k: repeatedly the highest-value (consumer, bundle) pair with bundle
// size in [k, 2k); ties go to the lowest consumer, then the lexicographically
// smallest bundle. Asserts W <= 2k · welfare and the per-step inequality.
AkTrace greedy_ak(const Market& market, int k, const Budget& budget = {});

// Best of: for k = 1..⌈m^{1/3}⌉, greedy_ak → log_bin → general_sqrt; and the
// grand bundle to the highest-value consumer.
Construction general_m23(const Market& market, const LiftOptions& lift = {});

struct GreedySplit {
  ItemAllocation allocation;
  std::vector<int> exhausted;
  std::vector<int> open;
  int chosen_case = 1;
  Rational bin_value;
  int sink = -1;
};

// Greedy on doubled budgets in item order.
GreedySplit budget_greedy(const Market& market);

// Budget-additive markets: welfare >= OPT / (32 (log2 m + 2)) (case 1) or
// >= OPT / 8 (case 2).
Construction budget_additive_cbe(const Market& market, const LiftOptions& lift = {});

}  // namespace cbe
