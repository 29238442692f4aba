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

#include "cbe/equilibrium.hpp"

#include <sstream>

#include "cbe/errors.hpp"
#include "cbe/lp_models.hpp"
#include "cbe/oracles.hpp"
#include "cbe/parallel.hpp"

namespace cbe {

std::string VerificationReport::summary() const {
  if (pass) return "pass";
  std::ostringstream out;
  for (std::size_t i = 0; i < consumers.size(); ++i) {
    const ConsumerCheck& c = consumers[i];
    if (c.maximizes) continue;
    out << "consumer " << (i + 1) << " gets payoff " << c.payoff << " but bundle set mask "
        << (c.better_alternative ? *c.better_alternative : 0) << " yields " << c.best_payoff;
    return out.str();
  }
  out << "items not allocated (mask " << unallocated << ")";
  return out.str();
}

VerificationReport verify_cbe(const Market& market, const Outcome& outcome) {
  try {
    outcome.validate(market);
  } catch (const ConstructionError& e) {
    throw PreconditionError(std::string("malformed outcome: ") + e.what());
  }
  VerificationReport report;
  report.pass = true;
  ItemSet covered = 0;
  for (int i = 0; i < market.num_consumers(); ++i) {
    const ItemSet items = outcome.items_of(i);
    covered |= items;
    ConsumerCheck check;
    check.payoff = market.value(i, items) - outcome.priced.price_of(outcome.allocation[i]);
    DemandResult demand = demand_query(market.valuation(i), outcome.priced);
    check.best_payoff = demand.payoff;
    check.maximizes = check.payoff == demand.payoff;
    if (!check.maximizes) {
      check.better_alternative = demand.maximizers.front();
      report.pass = false;
    }
    report.consumers.push_back(std::move(check));
  }
  report.unallocated = market.all_items() & ~covered;
  report.cleared = report.unallocated == 0;
  report.pass = report.pass && report.cleared;
  report.welfare = outcome.welfare(market);
  report.revenue = outcome.revenue();
  return report;
}

Outcome item_outcome(int m, const std::vector<Rational>& item_prices, const ItemAllocation& allocation) {
  Outcome out;
  out.priced.bundling = Bundling::singletons(m);
  out.priced.prices = item_prices;
  // Singleton bundle j holds item j, so item masks are bundle masks.
  out.allocation.assign(allocation.begin(), allocation.end());
  return out;
}

VerificationReport verify_ce(const Market& market, const std::vector<Rational>& item_prices,
                             const ItemAllocation& allocation) {
  return verify_cbe(market, item_outcome(market.num_items(), item_prices, allocation));
}

CeResult ce_exists(const Market& market, const Budget& budget) {
  ConfigLpResult lp = config_lp(market, budget);
  CeResult out;
  out.fractional = lp.fractional;
  out.integral = lp.integral;
  out.exists = lp.integral_flag;
  if (out.exists) {
    out.prices = lp.item_prices;
    out.allocation = lp.integral_allocation;
    VerificationReport report = verify_ce(market, out.prices, out.allocation);
    check_invariant(report.pass, "configuration LP dual does not support a CE: " + report.summary());
  }
  return out;
}

std::vector<Rational> max_revenue_ce_prices(const Market& market) {
  const int n = market.num_consumers();
  const int m = market.num_items();
  ConfigLpResult config = config_lp(market);
  check_precondition(config.integral_flag, "no competitive equilibrium exists");
  // Columns: u_0..u_{n-1}, p_0..p_{m-1}.
  LinearProgram lp;
  lp.sense = Sense::kMaximize;
  for (int i = 0; i < n; ++i) lp.add_variable(Rational(0));
  for (int j = 0; j < m; ++j) lp.add_variable(Rational(1));
  const ItemSet all = market.all_items();
  for (int i = 0; i < n; ++i) {
    for (ItemSet s = 1; s <= all; ++s) {
      std::vector<Rational> row(n + m);
      row[i] = Rational(1);
      for (int j : members(s)) row[n + j] = Rational(1);
      lp.add_constraint(std::move(row), Relation::kGreaterEqual, market.value(i, s));
    }
  }
  lp.add_constraint(std::vector<Rational>(n + m, Rational(1)), Relation::kEqual, config.fractional);
  LpSolution sol = lp_solve(lp);
  check_invariant(sol.status == LpStatus::kOptimal, "revenue LP not optimal");
  CertificateCheck cert = verify_certificates(lp, sol);
  check_invariant(cert.ok(), "revenue LP certificate failed: " + cert.detail);
  return {sol.primal.begin() + n, sol.primal.end()};
}

CbeSearchResult cbe_search(const Market& market, const SearchOptions& options) {
  const int m = market.num_items();
  if (m > options.max_items) {
    throw ScaleGuardError("cbe_search over " + std::to_string(m) + " items exceeds the limit of " +
                          std::to_string(options.max_items));
  }
  options.budget.require(bell_number(m), "cbe_search");
  std::vector<Bundling> bundlings;
  for_each_set_partition(m, [&](const std::vector<int>& block, int count) {
    bundlings.push_back(Bundling{blocks_to_masks(block, count)});
  });

  CbeSearchResult result;
  result.table.resize(bundlings.size());
  parallel_for(bundlings.size(), options.jobs, [&](std::size_t b) {
    BundlingRecord& record = result.table[b];
    record.bundling = bundlings[b];
    Market induced = induced_market(market, record.bundling);
    CeResult ce = ce_exists(induced, options.budget);
    record.ce = ce.exists;
    record.induced_opt = ce.integral;
    if (!ce.exists) return;
    Outcome eq;
    eq.priced = PricedBundling{record.bundling, ce.prices};
    eq.allocation.assign(ce.allocation.begin(), ce.allocation.end());
    VerificationReport report = verify_cbe(market, eq);
    check_invariant(report.pass, "induced CE is not a CBE: " + report.summary());
    record.equilibrium = eq;
    if (options.with_revenue) {
      Outcome rev = eq;
      rev.priced.prices = max_revenue_ce_prices(induced);
      VerificationReport rr = verify_cbe(market, rev);
      check_invariant(rr.pass, "revenue-maximal prices are not a CBE: " + rr.summary());
      record.max_revenue = rev.revenue();
      record.revenue_equilibrium = std::move(rev);
    }
  });

  bool found = false;
  for (std::size_t b = 0; b < result.table.size(); ++b) {
    const BundlingRecord& record = result.table[b];
    if (!record.ce) continue;
    if (!found || record.induced_opt > result.best_welfare) {
      result.best_welfare = record.induced_opt;
      result.witness = *record.equilibrium;
      result.maximizers.clear();
      found = true;
    }
    if (record.induced_opt == result.best_welfare) result.maximizers.push_back(b);
    if (record.max_revenue && (!result.best_revenue || *record.max_revenue > *result.best_revenue)) {
      result.best_revenue = record.max_revenue;
      result.revenue_witness = record.revenue_equilibrium;
    }
  }
  check_invariant(found, "no bundling admits an equilibrium");
  return result;
}

}  // namespace cbe
