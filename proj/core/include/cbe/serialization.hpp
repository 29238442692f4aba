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

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "cbe/bundling.hpp"
#include "cbe/market.hpp"

namespace cbe {

using Json = nlohmann::ordered_json;

// Schema errors are InstanceErrors naming the offending field path.
Json market_to_json(const Market& market);
Market market_from_json(const Json& json);

// Canonical text: two-space indentation and a trailing newline.
std::string dump_canonical(const Json& json);
Json parse_json(const std::string& text);

Market load_market(const std::filesystem::path& path);
void save_market(const Market& market, const std::filesystem::path& path);

// Bundles as label lists, prices as rationals, allocation as bundle indices.
Json outcome_to_json(const Market& market, const Outcome& outcome);
Outcome outcome_from_json(const Market& market, const Json& json);

// {"market": ..., "outcome": ...}
struct MarketOutcome {
  Market market;
  Outcome outcome;
};
MarketOutcome load_market_outcome(const std::filesystem::path& path);

Json rational_json(const Rational& r);

// FNV-1a 64-bit digest of the canonical text, as 16 hex digits.
std::string digest(const std::string& text);

}  // namespace cbe
