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
#include "cbe/enumeration.hpp"
#include "cbe/market.hpp"
#include "cbe/rational.hpp"

namespace cbe {

enum class LiftStrategy {
  // Exhaustive search when the input has at most `exhaustive_max_bundles`
  // bundles, otherwise the merge auction with exhaustive fallback.
  kAuto,
  kAuction,
  kExhaustive,
};

struct LiftOptions {
  LiftStrategy strategy = LiftStrategy::kAuto;
  // Auction price increment; zero selects 2^-20 times the smallest positive
  // gap between values of the market.
  Rational delta;
  Budget budget{};
  int exhaustive_max_bundles = 6;
  int max_rounds = 10000;
};

struct LiftResult {
  PricedBundling priced;
  BundleAllocation allocation;
  // Input bundles making up each output bundle.
  std::vector<BundleSet> composition;
  // "auction" or "exhaustive".
  std::string strategy;

  bool all_allocated() const;
  Outcome outcome() const { return Outcome{priced, allocation}; }
};

struct LiftCheck {
  bool prices_up = false;
  bool unallocated_unchanged = false;
  bool demand_sets = false;
  bool ok() const { return prices_up && unallocated_unchanged && demand_sets; }
};

// The three lift properties, checked exactly (demand by brute force).
LiftCheck check_lift(const Market& market, const PricedBundling& input, const LiftResult& result);

// A coarsening of `pb` with raised merged prices and an allocation in which
// every consumer holds a demand set. Each consumer receives at most one
// merged bundle; bundles left unallocated are input bundles at input prices.
// Throws ExhaustionError when the search budget runs out.
LiftResult fgl_lift(const Market& market, const PricedBundling& pb, const LiftOptions& options = {});

// A CBE restricted to `consumers` (all other valuations treated as 0).
struct PartialCbe {
  PricedBundling priced;
  BundleAllocation allocation;
  std::vector<int> consumers;
};

// Checks the partial equilibrium against the restricted market.
bool is_partial_cbe(const Market& market, const PartialCbe& partial);

// CBE with welfare at least the revenue Σ_B p_B of the partial equilibrium.
Outcome lift_partial(const Market& market, const PartialCbe& partial, const LiftOptions& options = {});

// Every bundle strictly profitable for at least |bundles| consumers.
bool is_high_demand(const Market& market, const PricedBundling& pb);

// CBE allocating every input bundle, with welfare at least Σ_B p_B.
Outcome lift_high_demand(const Market& market, const PricedBundling& pb, const LiftOptions& options = {});

enum class BinMode { kByValue, kBySize };

struct LogBinResult {
  // Smallest value in the chosen bin: every survivor lies in [threshold, 2·threshold).
  Rational threshold;
  // Smallest part size in the chosen bin (by-size mode).
  int size_floor = 0;
  ItemAllocation filtered;
  std::vector<int> survivors;
  int r = 0;
  // Σ of the input and of the survivors.
  Rational input_welfare;
  Rational output_welfare;
  // Logarithm base of the guarantee: μ by value, m by size.
  int log_base = 1;
  // output · 2(log2 base + 2) >= input, exactly.
  bool guarantee_holds = false;
};

LogBinResult log_bin(const Market& market, const ItemAllocation& allocation, BinMode mode = BinMode::kByValue);

// Smallest positive difference between two distinct values in any table of
// the market (or the smallest positive value if all values coincide).
Rational min_value_gap(const Market& market);

}  // namespace cbe
