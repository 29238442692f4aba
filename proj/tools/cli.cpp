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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <optional>

#include <CLI11.hpp>

#include "cbe/bounds.hpp"
#include "cbe/equilibrium.hpp"
#include "cbe/errors.hpp"
#include "cbe/instances.hpp"
#include "cbe/lp_models.hpp"
#include "cbe/oracles.hpp"
#include "cbe/revenue_algorithms.hpp"
#include "cbe/serialization.hpp"
#include "cbe/welfare_algorithms.hpp"

namespace cbe::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string input;
  std::string out;
  std::string epsilon = "1/10";
  std::string delta = "1/100";
  std::uint64_t seed = 1;
  int jobs = 1;
  std::uint64_t budget = Budget{}.limit;
  bool timing = false;
  // generate
  std::string name;
  std::string random_class;
  int m = 4;
  int n = 4;
  // solve
  std::string algo;
  std::string setting = "uniform";
  bool trace = false;
  // search
  bool revenue = false;
  // lp
  std::string model = "config";
  std::string cap = "1";
  // reproduce
  std::string case_name;
  bool m_set = false;
  bool n_set = false;
  bool eps_set = false;
};

// Failure of a golden check or a verification; reported with exit code 1.
struct Check {
  std::string name;
  bool pass;
  Json expected;
  Json actual;
};

Json checks_json(const std::vector<Check>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) {
    Json j;
    j["check"] = c.name;
    j["pass"] = c.pass;
    j["expected"] = c.expected;
    j["actual"] = c.actual;
    out.push_back(std::move(j));
  }
  return out;
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Check equal_check(const std::string& name, const Rational& expected, const Rational& actual) {
  return Check{name, expected == actual, rational_json(expected), rational_json(actual)};
}

Json labels_of(const Market& market, ItemSet s) {
  Json out = Json::array();
  for (int j : members(s)) out.push_back(market.labels()[j]);
  return out;
}

Json report_json(const Market& market, const VerificationReport& report, const Outcome& outcome) {
  Json out;
  out["pass"] = report.pass;
  out["cleared"] = report.cleared;
  out["unallocated"] = labels_of(market, report.unallocated);
  out["welfare"] = rational_json(report.welfare);
  out["revenue"] = rational_json(report.revenue);
  Json consumers = Json::array();
  for (std::size_t i = 0; i < report.consumers.size(); ++i) {
    const ConsumerCheck& c = report.consumers[i];
    Json cj;
    cj["consumer"] = market.consumers()[i].name;
    cj["maximizes"] = c.maximizes;
    cj["payoff"] = rational_json(c.payoff);
    cj["best_payoff"] = rational_json(c.best_payoff);
    if (c.better_alternative) {
      Json alt = Json::array();
      for (int b : members(*c.better_alternative)) alt.push_back(labels_of(market, outcome.priced.bundling.bundles[b]));
      cj["better_alternative"] = std::move(alt);
    }
    consumers.push_back(std::move(cj));
  }
  out["consumers"] = std::move(consumers);
  out["summary"] = report.summary();
  return out;
}

Json construction_json(const Market& market, const Construction& c) {
  Json out;
  out["path"] = c.path;
  out["welfare"] = rational_json(c.welfare);
  out["revenue"] = rational_json(c.revenue);
  out["opt"] = rational_json(c.opt);
  out["bound"] = c.bound;
  out["bound_holds"] = c.bound_holds;
  out["outcome"] = outcome_to_json(market, c.outcome);
  return out;
}

Rational parse_flag(const std::string& text, const std::string& flag) {
  try {
    return Rational::parse(text);
  } catch (const Error& e) {
    throw InstanceError(flag + ": invalid rational '" + text + "'");
  }
}

Market input_market(const Options& o) {
  if (o.input.empty()) throw InstanceError("--input is required");
  return load_market(o.input);
}

// ---- generate ------------------------------------------------------------

int cmd_generate(const Options& o, Json& report) {
  Market market = [&] {
    if (!o.name.empty() && !o.random_class.empty()) throw InstanceError("use either --name or --class");
    if (!o.name.empty()) {
      InstanceSpec spec;
      spec.name = o.name;
      spec.epsilon = parse_flag(o.epsilon, "--epsilon");
      spec.delta = parse_flag(o.delta, "--delta");
      spec.m = o.m;
      spec.n = o.n;
      spec.seed = o.seed;
      return gen_named(spec);
    }
    if (!o.random_class.empty()) return gen_random(parse_random_class(o.random_class), o.m, o.n, o.seed);
    throw InstanceError("generate needs --name or --class");
  }();
  report = market_to_json(market);
  return kExitOk;
}

// ---- solve ---------------------------------------------------------------

int cmd_solve(const Options& o, Json& report) {
  Market market = input_market(o);
  report["digest"] = digest(dump_canonical(market_to_json(market)));
  report["algo"] = o.algo;
  Construction c;
  if (o.algo == "two-consumer") {
    c = two_consumer_cbe(market);
  } else if (o.algo == "subadditive-n2") {
    c = subadditive_n_over_2(market);
  } else if (o.algo == "multiunit" || o.algo == "multiunit-vq") {
    MultiUnitOptions mo;
    DemandAudit audit;
    mo.audit = &audit;
    c = o.algo == "multiunit" ? multiunit_cbe(market, mo) : multiunit_value_query_mode(market, mo);
    report["demand_audit"] = {{"queries", audit.queries.load()}, {"mismatches", audit.mismatches.load()}};
  } else if (o.algo == "general-m23") {
    c = general_m23(market);
    if (o.trace) {
      Json traces = Json::array();
      for (int k = 1; k <= icbrt_ceil(market.num_items()) && k <= market.num_items(); ++k) {
        AkTrace t = greedy_ak(market, k, Budget{o.budget});
        Json tj;
        tj["k"] = k;
        tj["w"] = rational_json(t.w);
        tj["welfare"] = rational_json(t.welfare);
        Json steps = Json::array();
        for (const auto& s : t.steps) {
          steps.push_back({{"consumer", market.consumers()[s.consumer].name},
                           {"bundle", labels_of(market, s.bundle)},
                           {"value", rational_json(s.value)},
                           {"w_after", rational_json(s.w_after)}});
        }
        tj["steps"] = std::move(steps);
        traces.push_back(std::move(tj));
      }
      report["trace"] = std::move(traces);
    }
  } else if (o.algo == "budget-additive") {
    c = budget_additive_cbe(market);
  } else if (o.algo == "matroid-revenue") {
    if (o.setting == "uniform") {
      c = uniform_matroid_revenue_cbe(market);
    } else if (o.setting == "common") {
      c = common_matroid_revenue_cbe(market);
    } else {
      throw InstanceError("--setting must be uniform or common");
    }
    report["setting"] = o.setting;
  } else {
    throw InstanceError("unknown --algo '" + o.algo + "'");
  }
  report["result"] = construction_json(market, c);
  return c.bound_holds ? kExitOk : kExitFail;
}

// ---- verify --------------------------------------------------------------

int cmd_verify(const Options& o, Json& report) {
  if (o.input.empty()) throw InstanceError("--input is required");
  MarketOutcome mo = load_market_outcome(o.input);
  report["digest"] = digest(dump_canonical(market_to_json(mo.market)));
  VerificationReport v;
  try {
    v = verify_cbe(mo.market, mo.outcome);
  } catch (const PreconditionError& e) {
    throw InstanceError(std::string("malformed outcome: ") + e.what());
  }
  report["result"] = report_json(mo.market, v, mo.outcome);
  return v.pass ? kExitOk : kExitFail;
}

// ---- search --------------------------------------------------------------

int cmd_search(const Options& o, Json& report) {
  Market market = input_market(o);
  report["digest"] = digest(dump_canonical(market_to_json(market)));
  SearchOptions so;
  so.jobs = o.jobs;
  so.budget = Budget{o.budget};
  so.with_revenue = o.revenue;
  CbeSearchResult r = cbe_search(market, so);
  WelfareResult opt = welfare_opt(market, so.budget);
  Json result;
  result["bundlings"] = r.table.size();
  std::size_t with_ce = 0;
  for (const auto& rec : r.table) with_ce += rec.ce ? 1 : 0;
  result["bundlings_with_ce"] = with_ce;
  result["opt"] = rational_json(opt.value);
  result["best_welfare"] = rational_json(r.best_welfare);
  result["maximizers"] = r.maximizers.size();
  result["witness"] = outcome_to_json(market, r.witness);
  if (r.best_revenue) {
    result["best_revenue"] = rational_json(*r.best_revenue);
    if (r.revenue_witness) result["revenue_witness"] = outcome_to_json(market, *r.revenue_witness);
  }
  report["result"] = std::move(result);
  return kExitOk;
}

// ---- lp ------------------------------------------------------------------

int cmd_lp(const Options& o, Json& report) {
  Json result;
  result["model"] = o.model;
  if (o.model == "menu") {
    std::vector<Rational> values = myerson_values(o.n);
    const Rational cap = parse_flag(o.cap, "--cap");
    MenuMechanism menu = menu_lp(values, cap);
    result["cap"] = rational_json(cap);
    result["revenue"] = rational_json(menu.revenue);
    result["reserve_revenue"] = rational_json(best_reserve_revenue(values));
    Json options = Json::array();
    for (std::size_t i = 0; i < values.size(); ++i) {
      options.push_back({{"value", rational_json(values[i])},
                         {"probability", rational_json(menu.probabilities[i])},
                         {"price", rational_json(menu.prices[i])}});
    }
    result["menu"] = std::move(options);
    report["result"] = std::move(result);
    return kExitOk;
  }
  Market market = input_market(o);
  report["digest"] = digest(dump_canonical(market_to_json(market)));
  auto support_json = [&](const std::vector<AssignmentEntry>& support) {
    Json s = Json::array();
    for (const auto& e : support) {
      s.push_back({{"consumer", market.consumers()[e.consumer].name},
                   {"set", labels_of(market, e.set)},
                   {"weight", rational_json(e.weight)}});
    }
    return s;
  };
  if (o.model == "config") {
    ConfigLpResult r = config_lp(market, Budget{o.budget});
    result["fractional"] = rational_json(r.fractional);
    result["integral"] = rational_json(r.integral);
    result["integral_flag"] = r.integral_flag;
    result["support"] = support_json(r.support);
    if (r.integral_flag) {
      Json prices = Json::array();
      for (const auto& p : r.item_prices) prices.push_back(rational_json(p));
      result["witness"] = {{"item_prices", std::move(prices)}};
    }
  } else if (o.model == "cap2") {
    Cap2Result r = cap2_lp(market, Budget{o.budget});
    result["fractional"] = rational_json(r.fractional);
    result["integral"] = rational_json(r.integral);
    result["integral_flag"] = r.integral_flag;
    result["x_support"] = support_json(r.x_support);
    Json z = Json::array();
    for (const auto& e : r.z_support) {
      Json parts = Json::array();
      for (ItemSet s : e.parts) parts.push_back(labels_of(market, s));
      z.push_back({{"bundling", std::move(parts)}, {"weight", rational_json(e.weight)}});
    }
    result["z_support"] = std::move(z);
    if (r.integral_flag) result["witness"] = outcome_to_json(market, nlpe_to_cbe(market, r));
  } else {
    throw InstanceError("--model must be config, cap2 or menu");
  }
  report["result"] = std::move(result);
  return kExitOk;
}

// ---- reproduce -----------------------------------------------------------

// Every welfare-optimal assignment of the bundles in an induced market with a
// CE gives all bundles to consumer 0.
bool all_optima_to_first(const Market& induced, const Rational& induced_opt) {
  const int n = induced.num_consumers();
  const int k = induced.num_items();
  std::vector<int> owner(k, 0);
  while (true) {
    ItemAllocation alloc(n, 0);
    for (int b = 0; b < k; ++b) alloc[owner[b]] |= singleton(b);
    if (allocation_welfare(induced, alloc) == induced_opt && alloc[0] != induced.all_items()) return false;
    int b = 0;
    while (b < k && ++owner[b] == n) owner[b++] = 0;
    if (b == k) return true;
  }
}

std::vector<Check> reproduce_case(const Options& o, Json& details) {
  std::vector<Check> checks;
  const Rational eps = parse_flag(o.epsilon, "--epsilon");
  const Rational delta = parse_flag(o.delta, "--delta");
  SearchOptions so;
  so.jobs = o.jobs;
  so.budget = Budget{o.budget};
  const std::string& c = o.case_name;
  if (c == "prop22") {
    Market market = prop22_market(eps);
    WelfareResult opt = welfare_opt(market);
    ConfigLpResult lp = config_lp(market);
    CeResult ce = ce_exists(market);
    CbeSearchResult search = cbe_search(market, so);
    checks.push_back(equal_check("welfare_opt", 3, opt.value));
    checks.push_back(equal_check("config_lp fractional", Rational(3) + eps / Rational(2), lp.fractional));
    checks.push_back(Check{"ce_exists", !ce.exists, false, ce.exists});
    checks.push_back(equal_check("cbe_search best", Rational(2) + eps, search.best_welfare));
    const bool grand = search.witness.priced.bundling.size() == 1 && search.witness.allocation[0] == 1;
    checks.push_back(Check{"best CBE is the grand bundle to consumer 1", grand, true, grand});
    const Rational ratio = opt.value / search.best_welfare;
    checks.push_back(Check{"ratio below 3/2", ratio < Rational(3, 2), "< 3/2", rational_json(ratio)});
  } else if (c == "thm42") {
    const int m = o.m_set ? o.m : 4;
    Market market = thm42_market(m, eps);
    WelfareResult opt = welfare_opt(market);
    Rational formula = Rational(1) + eps;
    for (int i = 2; i <= m; ++i) formula += Rational(1, i);
    checks.push_back(equal_check("welfare_opt", formula, opt.value));
    CbeSearchResult search = cbe_search(market, so);
    checks.push_back(equal_check("cbe_search best", Rational(2) + Rational(2) * eps, search.best_welfare));
    bool all_first = true;
    for (const auto& rec : search.table) {
      if (!rec.ce) continue;
      all_first = all_first && all_optima_to_first(induced_market(market, rec.bundling), rec.induced_opt);
    }
    checks.push_back(Check{"every CBE gives all units to consumer 1", all_first, true, all_first});
  } else if (c == "table1") {
    Market market = table1_market(eps, delta);
    WelfareResult opt = welfare_opt(market);
    ConfigLpResult lp = config_lp(market);
    CbeSearchResult search = cbe_search(market, so);
    checks.push_back(equal_check("welfare_opt", Rational(5) - eps / Rational(2) - delta, opt.value));
    checks.push_back(equal_check("config_lp fractional", Rational(5) - eps / Rational(2), lp.fractional));
    checks.push_back(equal_check("cbe_search best", 4, search.best_welfare));
    details["ratio"] = rational_json(opt.value / search.best_welfare);
  } else if (c == "ex81" || c == "ex82") {
    Market market = c == "ex81" ? ex81_market() : ex82_market();
    Cap2Result cap = cap2_lp(market);
    checks.push_back(equal_check("cap2 fractional", c == "ex81" ? Rational(11) : Rational(4), cap.fractional));
    checks.push_back(equal_check("cap2 integral", c == "ex81" ? Rational(8) : Rational(7, 2), cap.integral));
    CbeSearchResult search = cbe_search(market, so);
    checks.push_back(equal_check("efficient CBE exists", cap.integral, search.best_welfare));
  } else if (c == "revenue-lb") {
    const int n = o.n_set ? o.n : 4;
    Market market = revenue_lb_market(n);
    so.with_revenue = true;
    CbeSearchResult search = cbe_search(market, so);
    WelfareResult opt = welfare_opt(market);
    Rational harmonic;
    for (int i = 1; i <= n; ++i) harmonic += Rational(1, i);
    checks.push_back(equal_check("welfare_opt", harmonic, opt.value));
    const Rational best = search.best_revenue.value_or(Rational(0));
    checks.push_back(Check{"max CBE revenue <= 1 + max v", best <= Rational(2), "<= 2", rational_json(best)});
  } else if (c == "myerson") {
    const int n = o.n_set ? o.n : 3;
    std::vector<Rational> values = myerson_values(n);
    Json menus = Json::array();
    for (const Rational& cap : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)}) {
      MenuMechanism menu = menu_lp(values, cap);
      const Rational bound = cap / Rational(n - 1);
      checks.push_back(Check{"menu revenue at cap " + cap.to_string() + " <= cap/(n-1)", menu.revenue <= bound,
                             "<= " + bound.to_string(), rational_json(menu.revenue)});
      menus.push_back({{"cap", rational_json(cap)}, {"revenue", rational_json(menu.revenue)}});
      if (cap == Rational(1)) {
        checks.push_back(equal_check("menu revenue at cap 1", Rational(1, n), menu.revenue));
        checks.push_back(equal_check("reserve oracle", best_reserve_revenue(values), menu.revenue));
      }
    }
    details["menus"] = std::move(menus);
  } else {
    throw InstanceError("unknown --case '" + c + "'");
  }
  return checks;
}

int cmd_reproduce(const Options& o, Json& report) {
  Json details = Json::object();
  std::vector<Check> checks = reproduce_case(o, details);
  report["case"] = o.case_name;
  report["checks"] = checks_json(checks);
  if (!details.empty()) report["details"] = std::move(details);
  report["pass"] = all_pass(checks);
  return all_pass(checks) ? kExitOk : kExitFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Competitive bundling equilibria: constructions, verifiers and LPs", "cbe"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Write the report to this path");
    sub->add_option("--jobs", o.jobs, "Worker threads for search loops")->check(CLI::PositiveNumber);
    sub->add_option("--budget", o.budget, "Enumeration guard (steps)");
    sub->add_flag("--timing", o.timing, "Include wall-clock timing in the report");
  };
  auto with_input = [&](CLI::App* sub) { sub->add_option("--input", o.input, "Market (or market + outcome) JSON"); };
  auto with_params = [&](CLI::App* sub) {
    sub->add_option("--epsilon", o.epsilon, "Rational p/q")->each([&](const std::string&) { o.eps_set = true; });
    sub->add_option("--delta", o.delta, "Rational p/q");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--m", o.m, "Items")->each([&](const std::string&) { o.m_set = true; });
    sub->add_option("--n", o.n, "Consumers")->each([&](const std::string&) { o.n_set = true; });
  };

  CLI::App* generate = app.add_subcommand("generate", "Emit a named or random market as JSON");
  common(generate);
  with_params(generate);
  generate->add_option("--name", o.name, "prop22|table1|thm42|ex81|ex82|revenue-lb");
  generate->add_option("--class", o.random_class,
                       "explicit-monotone|additive|unit-demand|budget-additive|multi-unit|"
                       "matroid-rank-uniform|matroid-rank-common|superadditive");

  CLI::App* solve = app.add_subcommand("solve", "Run a CBE construction and check its guarantee");
  common(solve);
  with_input(solve);
  with_params(solve);
  solve->add_option("--algo", o.algo,
                    "two-consumer|subadditive-n2|multiunit|multiunit-vq|general-m23|budget-additive|"
                    "matroid-revenue")
      ->required();
  solve->add_option("--setting", o.setting, "uniform|common (matroid-revenue)");
  solve->add_flag("--trace", o.trace, "Include greedy traces (general-m23)");

  CLI::App* verify = app.add_subcommand("verify", "Check a market + outcome file against the CBE definition");
  common(verify);
  with_input(verify);

  CLI::App* search = app.add_subcommand("search", "Enumerate all bundlings and their equilibria");
  common(search);
  with_input(search);
  search->add_flag("--revenue", o.revenue, "Also maximize revenue per bundling");

  CLI::App* lp = app.add_subcommand("lp", "Solve the configuration LP, CAP2 or the menu LP");
  common(lp);
  with_input(lp);
  with_params(lp);
  lp->add_option("--model", o.model, "config|cap2|menu");
  lp->add_option("--cap", o.cap, "Allocation cap for the menu LP (p/q)");

  CLI::App* reproduce = app.add_subcommand("reproduce", "Recompute a reference instance and check its values");
  common(reproduce);
  with_params(reproduce);
  reproduce->add_option("--case", o.case_name, "prop22|thm42|table1|ex81|ex82|revenue-lb|myerson")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  if (reproduce->parsed() && !o.eps_set && (o.case_name == "table1")) o.epsilon = "1/100";

  Json report;
  report["command"] = args;
  report["version"] = kVersion;
  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (generate->parsed()) {
      Json market;
      code = cmd_generate(o, market);
      report = std::move(market);
    } else if (solve->parsed()) {
      code = cmd_solve(o, report);
    } else if (verify->parsed()) {
      code = cmd_verify(o, report);
    } else if (search->parsed()) {
      code = cmd_search(o, report);
    } else if (lp->parsed()) {
      code = cmd_lp(o, report);
    } else if (reproduce->parsed()) {
      code = cmd_reproduce(o, report);
    }
  } catch (const InstanceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "failure: " << e.what() << "\n";
    return kExitFail;
  }
  if (o.timing && !generate->parsed()) {
    report["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  const std::string text = dump_canonical(report);
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << o.out << "\n";
      return kExitUsage;
    }
    file << text;
  }
  return code;
}

}  // namespace cbe::cli
