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

struct ConsumerCheck {
  bool maximizes = false;
  // Payoff of the assigned bundles and the best payoff available.
  Rational payoff;
  Rational best_payoff;
  // A strictly better bundle set when the consumer does not maximize.
  std::optional<BundleSet> better_alternative;
};

struct VerificationReport {
  bool pass = false;
  std::vector<ConsumerCheck> consumers;
  bool cleared = false;
  ItemSet unallocated = 0;
  Rational welfare;
  Rational revenue;

  // One line naming the first failure, or "pass".
  std::string summary() const;
};

// Profit maximization against brute-force demand for every consumer, plus
// clearance: the allocated bundles cover all items. Throws PreconditionError
// if the outcome is structurally malformed.
VerificationReport verify_cbe(const Market& market, const Outcome& outcome);

// verify_cbe with the singleton bundling.
VerificationReport verify_ce(const Market& market, const std::vector<Rational>& item_prices,
                             const ItemAllocation& allocation);

// Outcome over singleton bundles from item prices and an item allocation.
Outcome item_outcome(int m, const std::vector<Rational>& item_prices, const ItemAllocation& allocation);

struct CeResult {
  bool exists = false;
  Rational fractional;
  Rational integral;
  // Present when a CE exists: configuration-LP dual prices and the first
  // welfare-optimal allocation.
  std::vector<Rational> prices;
  ItemAllocation allocation;
};

// CE existence by configuration-LP integrality. A returned CE is verified;
// InvariantViolation is raised if it fails.
CeResult ce_exists(const Market& market, const Budget& budget = {});

// Maximum Σ p_j over CE item prices: the maximum of Σ p over optimal duals
// of the configuration LP. Requires that a CE exists.
std::vector<Rational> max_revenue_ce_prices(const Market& market);

struct BundlingRecord {
  Bundling bundling;
  bool ce = false;
  // Welfare optimum of the induced market.
  Rational induced_opt;
  // The verified equilibrium for this bundling when one exists.
  std::optional<Outcome> equilibrium;
  // Largest revenue of any equilibrium for this bundling (when requested).
  std::optional<Rational> max_revenue;
  std::optional<Outcome> revenue_equilibrium;
};

struct CbeSearchResult {
  Rational best_welfare;
  Outcome witness;
  // Indices into `table` of every bundling attaining best_welfare.
  std::vector<std::size_t> maximizers;
  std::vector<BundlingRecord> table;
  std::optional<Rational> best_revenue;
  std::optional<Outcome> revenue_witness;
};

struct SearchOptions {
  int jobs = 1;
  Budget budget{};
  bool with_revenue = false;
  // Bell(m) bound; larger markets raise ScaleGuardError.
  int max_items = 6;
};

// Every bundling in canonical (restricted-growth) order: builds the induced
// market, decides CE existence and records the induced optimum.
CbeSearchResult cbe_search(const Market& market, const SearchOptions& options = {});

}  // namespace cbe
