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

#include "cbe/serialization.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cbe/errors.hpp"

namespace cbe {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw InstanceError(path + ": " + what); }

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing field '" + key + "'");
  return *it;
}

Rational parse_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) fail(path, "expected a rational string \"p/q\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    fail(path, "invalid rational '" + j.get<std::string>() + "' (" + e.what() + ")");
  }
}

std::vector<Rational> parse_rationals(const Json& j, const std::string& path, std::size_t expected) {
  if (!j.is_array()) fail(path, "expected an array");
  if (j.size() != expected) fail(path, "expected " + std::to_string(expected) + " entries, found " + std::to_string(j.size()));
  std::vector<Rational> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_rational(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

int parse_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

Json rationals_json(const std::vector<Rational>& rs) {
  Json out = Json::array();
  for (const auto& r : rs) out.push_back(rational_json(r));
  return out;
}

Json labels_json(ItemSet s, const std::vector<std::string>& labels) {
  Json out = Json::array();
  for (int j : members(s)) out.push_back(labels[j]);
  return out;
}

ItemSet parse_label_list(const Json& j, const std::vector<std::string>& labels, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of item labels");
  ItemSet s = 0;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string sub = path + "[" + std::to_string(k) + "]";
    if (!j[k].is_string()) fail(sub, "expected an item label");
    auto it = std::find(labels.begin(), labels.end(), j[k].get<std::string>());
    if (it == labels.end()) fail(sub, "unknown item '" + j[k].get<std::string>() + "'");
    const int item = static_cast<int>(it - labels.begin());
    if (contains(s, item)) fail(sub, "repeated item '" + labels[item] + "'");
    s |= singleton(item);
  }
  return s;
}

const char* type_name(ValuationKind kind) {
  switch (kind) {
    case ValuationKind::kExplicit: return "explicit";
    case ValuationKind::kAdditive: return "additive";
    case ValuationKind::kUnitDemand: return "unit_demand";
    case ValuationKind::kBudgetAdditive: return "budget_additive";
    case ValuationKind::kMultiUnit: return "multi_unit";
    case ValuationKind::kMatroidRank: return "matroid_rank";
  }
  return "explicit";
}

Json valuation_json(const Valuation& v, const std::vector<std::string>& labels) {
  Json out;
  out["type"] = type_name(v.kind());
  switch (v.kind()) {
    case ValuationKind::kExplicit: {
      Json table = Json::object();
      for (ItemSet s = 1; s <= full_set(v.num_items()); ++s) table[set_key(s, labels)] = rational_json(v.value(s));
      out["table"] = std::move(table);
      break;
    }
    case ValuationKind::kAdditive:
    case ValuationKind::kUnitDemand:
      out["weights"] = rationals_json(v.weights());
      break;
    case ValuationKind::kBudgetAdditive:
      out["weights"] = rationals_json(v.weights());
      out["budget"] = rational_json(*v.budget());
      break;
    case ValuationKind::kMultiUnit:
      out["per_count"] = rationals_json(v.per_count());
      break;
    case ValuationKind::kMatroidRank: {
      const Matroid& matroid = *v.matroid();
      Json mj;
      if (matroid.kind() == MatroidKind::kUniform) {
        mj["kind"] = "uniform";
        mj["rank"] = matroid.uniform_rank();
      } else {
        mj["kind"] = "family";
        Json sets = Json::array();
        for (ItemSet s : matroid.independent_sets()) sets.push_back(labels_json(s, labels));
        mj["independent"] = std::move(sets);
      }
      out["matroid"] = std::move(mj);
      out["weights"] = rationals_json(v.weights());
      break;
    }
  }
  return out;
}

Valuation parse_valuation(const Json& j, const std::vector<std::string>& labels, const std::string& path) {
  const int m = static_cast<int>(labels.size());
  const Json& type = field(j, "type", path);
  if (!type.is_string()) fail(path + ".type", "expected a string");
  const std::string t = type.get<std::string>();
  try {
    if (t == "explicit") {
      const std::string tp = path + ".table";
      const Json& table = field(j, "table", path);
      if (!table.is_object()) fail(tp, "expected an object keyed by subsets");
      std::unordered_map<std::string, ItemSet> keys;
      for (ItemSet s = 1; s <= full_set(m); ++s) {
        if (!keys.emplace(set_key(s, labels), s).second) fail(tp, "item labels make subset keys ambiguous");
      }
      std::vector<Rational> values(std::size_t{1} << m);
      std::vector<bool> seen(values.size(), false);
      for (auto it = table.begin(); it != table.end(); ++it) {
        const std::string kp = tp + "." + (it.key().empty() ? std::string("\"\"") : it.key());
        if (it.key().empty() || it.key() == "∅") {
          if (!parse_rational(it.value(), kp).is_zero()) fail(kp, "the empty set must have value 0");
          continue;
        }
        auto k = keys.find(it.key());
        if (k == keys.end()) fail(kp, "unknown subset key");
        values[k->second] = parse_rational(it.value(), kp);
        seen[k->second] = true;
      }
      for (ItemSet s = 1; s <= full_set(m); ++s) {
        if (!seen[s]) fail(tp, "missing subset '" + set_key(s, labels) + "' (tables must be total)");
      }
      return Valuation::explicit_table(m, std::move(values));
    }
    if (t == "additive") return Valuation::additive(parse_rationals(field(j, "weights", path), path + ".weights", m));
    if (t == "unit_demand") {
      return Valuation::unit_demand(parse_rationals(field(j, "weights", path), path + ".weights", m));
    }
    if (t == "budget_additive") {
      return Valuation::budget_additive(parse_rationals(field(j, "weights", path), path + ".weights", m),
                                        parse_rational(field(j, "budget", path), path + ".budget"));
    }
    if (t == "multi_unit") {
      return Valuation::multi_unit(parse_rationals(field(j, "per_count", path), path + ".per_count", m + 1));
    }
    if (t == "matroid_rank") {
      const std::string mp = path + ".matroid";
      const Json& mj = field(j, "matroid", path);
      const Json& kind = field(mj, "kind", mp);
      std::optional<Matroid> matroid;
      if (kind == "uniform") {
        matroid = Matroid::uniform(m, parse_int(field(mj, "rank", mp), mp + ".rank"));
      } else if (kind == "family") {
        const Json& sets = field(mj, "independent", mp);
        if (!sets.is_array()) fail(mp + ".independent", "expected an array of label lists");
        std::vector<ItemSet> family;
        for (std::size_t k = 0; k < sets.size(); ++k) {
          family.push_back(parse_label_list(sets[k], labels, mp + ".independent[" + std::to_string(k) + "]"));
        }
        matroid = Matroid::family(m, std::move(family));
      } else {
        fail(mp + ".kind", "expected \"uniform\" or \"family\"");
      }
      return Valuation::matroid_rank(*matroid, parse_rationals(field(j, "weights", path), path + ".weights", m));
    }
  } catch (const ConstructionError& e) {
    fail(path, e.what());
  }
  fail(path + ".type", "unknown valuation type '" + t + "'");
}

}  // namespace

Json rational_json(const Rational& r) { return r.to_string(); }

Json market_to_json(const Market& market) {
  Json out;
  out["items"] = market.labels();
  Json consumers = Json::array();
  for (const auto& c : market.consumers()) {
    Json cj;
    cj["name"] = c.name;
    cj["valuation"] = valuation_json(c.valuation, market.labels());
    consumers.push_back(std::move(cj));
  }
  out["consumers"] = std::move(consumers);
  return out;
}

Market market_from_json(const Json& json) {
  const Json& items = field(json, "items", "$");
  if (!items.is_array() || items.empty()) fail("$.items", "expected a nonempty array of labels");
  if (items.size() > static_cast<std::size_t>(kMaxItems)) fail("$.items", "at most " + std::to_string(kMaxItems) + " items");
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (!items[k].is_string() || items[k].get<std::string>().empty()) {
      fail("$.items[" + std::to_string(k) + "]", "expected a nonempty label");
    }
    labels.push_back(items[k].get<std::string>());
  }
  const Json& consumers = field(json, "consumers", "$");
  if (!consumers.is_array() || consumers.empty()) fail("$.consumers", "expected a nonempty array");
  std::vector<Consumer> list;
  for (std::size_t i = 0; i < consumers.size(); ++i) {
    const std::string path = "$.consumers[" + std::to_string(i) + "]";
    const Json& name = field(consumers[i], "name", path);
    if (!name.is_string()) fail(path + ".name", "expected a string");
    list.push_back(Consumer{name.get<std::string>(), parse_valuation(field(consumers[i], "valuation", path), labels,
                                                                     path + ".valuation")});
  }
  try {
    return Market(std::move(labels), std::move(list));
  } catch (const ConstructionError& e) {
    fail("$", e.what());
  }
}

std::string dump_canonical(const Json& json) { return json.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InstanceError(std::string("malformed JSON: ") + e.what());
  }
}

namespace {
std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError(path.string() + ": cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}
}  // namespace

Market load_market(const std::filesystem::path& path) { return market_from_json(parse_json(read_file(path))); }

void save_market(const Market& market, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError(path.string() + ": cannot write file");
  out << dump_canonical(market_to_json(market));
}

Json outcome_to_json(const Market& market, const Outcome& outcome) {
  Json out;
  Json bundles = Json::array();
  for (ItemSet b : outcome.priced.bundling.bundles) bundles.push_back(labels_json(b, market.labels()));
  out["bundles"] = std::move(bundles);
  out["prices"] = rationals_json(outcome.priced.prices);
  Json alloc = Json::array();
  for (BundleSet s : outcome.allocation) alloc.push_back(members(s));
  out["allocation"] = std::move(alloc);
  return out;
}

Outcome outcome_from_json(const Market& market, const Json& json) {
  Outcome out;
  const Json& bundles = field(json, "bundles", "$.outcome");
  if (!bundles.is_array()) fail("$.outcome.bundles", "expected an array");
  for (std::size_t k = 0; k < bundles.size(); ++k) {
    out.priced.bundling.bundles.push_back(
        parse_label_list(bundles[k], market.labels(), "$.outcome.bundles[" + std::to_string(k) + "]"));
  }
  out.priced.prices = parse_rationals(field(json, "prices", "$.outcome"), "$.outcome.prices", bundles.size());
  const Json& alloc = field(json, "allocation", "$.outcome");
  if (!alloc.is_array() || alloc.size() != static_cast<std::size_t>(market.num_consumers())) {
    fail("$.outcome.allocation", "expected one entry per consumer");
  }
  for (std::size_t i = 0; i < alloc.size(); ++i) {
    const std::string path = "$.outcome.allocation[" + std::to_string(i) + "]";
    if (!alloc[i].is_array()) fail(path, "expected an array of bundle indices");
    BundleSet s = 0;
    for (std::size_t k = 0; k < alloc[i].size(); ++k) {
      const int index = parse_int(alloc[i][k], path + "[" + std::to_string(k) + "]");
      if (index < 0 || index >= static_cast<int>(bundles.size())) fail(path, "bundle index out of range");
      s |= singleton(index);
    }
    out.allocation.push_back(s);
  }
  return out;
}

MarketOutcome load_market_outcome(const std::filesystem::path& path) {
  Json json = parse_json(read_file(path));
  Market market = market_from_json(field(json, "market", "$"));
  Outcome outcome = outcome_from_json(market, field(json, "outcome", "$"));
  return MarketOutcome{std::move(market), std::move(outcome)};
}

std::string digest(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cbe
