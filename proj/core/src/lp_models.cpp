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

#include "cbe/lp_models.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cbe/equilibrium.hpp"
#include "cbe/errors.hpp"
#include "cbe/oracles.hpp"

namespace cbe {

namespace {

std::size_t subset_count(int m) { return (std::size_t{1} << m) - 1; }

}  // namespace

LinearProgram config_lp_program(const Market& market) {
  const int n = market.num_consumers();
  const int m = market.num_items();
  const std::size_t sets = subset_count(m);
  const std::size_t cols = static_cast<std::size_t>(n) * sets;
  LinearProgram lp;
  lp.sense = Sense::kMaximize;
  lp.objective.reserve(cols);
  for (int i = 0; i < n; ++i) {
    for (std::size_t s = 1; s <= sets; ++s) lp.objective.push_back(market.value(i, static_cast<ItemSet>(s)));
  }
  for (int j = 0; j < m; ++j) {
    std::vector<Rational> row(cols);
    for (int i = 0; i < n; ++i) {
      for (std::size_t s = 1; s <= sets; ++s) {
        if (contains(static_cast<ItemSet>(s), j)) row[i * sets + s - 1] = Rational(1);
      }
    }
    lp.add_constraint(std::move(row), Relation::kLessEqual, Rational(1));
  }
  for (int i = 0; i < n; ++i) {
    std::vector<Rational> row(cols);
    for (std::size_t s = 1; s <= sets; ++s) row[i * sets + s - 1] = Rational(1);
    lp.add_constraint(std::move(row), Relation::kLessEqual, Rational(1));
  }
  return lp;
}

ConfigLpResult config_lp(const Market& market, const Budget& budget) {
  const int n = market.num_consumers();
  const int m = market.num_items();
  const std::size_t sets = subset_count(m);
  budget.require(static_cast<double>(n) * static_cast<double>(sets) * (m + n), "config_lp");
  LinearProgram lp = config_lp_program(market);
  LpSolution sol = lp_solve(lp);
  check_invariant(sol.status == LpStatus::kOptimal, "configuration LP not optimal");
  ConfigLpResult out;
  out.certificate = verify_certificates(lp, sol);
  check_invariant(out.certificate.ok(), "configuration LP certificate failed: " + out.certificate.detail);
  out.fractional = sol.value;
  for (int i = 0; i < n; ++i) {
    for (std::size_t s = 1; s <= sets; ++s) {
      const Rational& x = sol.primal[i * sets + s - 1];
      if (x.sign() > 0) out.support.push_back({i, static_cast<ItemSet>(s), x});
    }
  }
  WelfareResult opt = welfare_opt(market, budget);
  out.integral = opt.value;
  out.integral_allocation = opt.allocation;
  check_invariant(out.fractional >= out.integral, "configuration LP below the integral optimum");
  out.integral_flag = out.fractional == out.integral;
  out.item_prices.assign(sol.dual.begin(), sol.dual.begin() + m);
  out.utilities.assign(sol.dual.begin() + m, sol.dual.end());
  return out;
}

Cap2Result cap2_lp(const Market& market, const Budget& budget) {
  const int n = market.num_consumers();
  const int m = market.num_items();
  const std::size_t sets = subset_count(m);
  const double partitions = bell_number(m);
  budget.require((static_cast<double>(n) * sets + partitions) * (n + sets + 1), "cap2_lp");

  std::vector<std::vector<ItemSet>> all_partitions;
  for_each_set_partition(m, [&](const std::vector<int>& block, int count) {
    all_partitions.push_back(blocks_to_masks(block, count));
  });
  const std::size_t x_cols = static_cast<std::size_t>(n) * sets;
  const std::size_t cols = x_cols + all_partitions.size();

  LinearProgram lp;
  lp.sense = Sense::kMaximize;
  lp.objective.assign(cols, Rational(0));
  for (int i = 0; i < n; ++i) {
    for (std::size_t s = 1; s <= sets; ++s) lp.objective[i * sets + s - 1] = market.value(i, static_cast<ItemSet>(s));
  }
  for (int i = 0; i < n; ++i) {
    std::vector<Rational> row(cols);
    for (std::size_t s = 1; s <= sets; ++s) row[i * sets + s - 1] = Rational(1);
    lp.add_constraint(std::move(row), Relation::kLessEqual, Rational(1));
  }
  for (std::size_t s = 1; s <= sets; ++s) {
    std::vector<Rational> row(cols);
    for (int i = 0; i < n; ++i) row[i * sets + s - 1] = Rational(1);
    for (std::size_t b = 0; b < all_partitions.size(); ++b) {
      const auto& parts = all_partitions[b];
      if (std::find(parts.begin(), parts.end(), static_cast<ItemSet>(s)) != parts.end()) row[x_cols + b] = Rational(-1);
    }
    lp.add_constraint(std::move(row), Relation::kLessEqual, Rational(0));
  }
  {
    std::vector<Rational> row(cols);
    for (std::size_t b = 0; b < all_partitions.size(); ++b) row[x_cols + b] = Rational(1);
    lp.add_constraint(std::move(row), Relation::kLessEqual, Rational(1));
  }

  LpSolution sol = lp_solve(lp);
  check_invariant(sol.status == LpStatus::kOptimal, "CAP2 not optimal");
  Cap2Result out;
  out.certificate = verify_certificates(lp, sol);
  check_invariant(out.certificate.ok(), "CAP2 certificate failed: " + out.certificate.detail);
  out.fractional = sol.value;
  for (int i = 0; i < n; ++i) {
    for (std::size_t s = 1; s <= sets; ++s) {
      const Rational& x = sol.primal[i * sets + s - 1];
      if (x.sign() > 0) out.x_support.push_back({i, static_cast<ItemSet>(s), x});
    }
  }
  for (std::size_t b = 0; b < all_partitions.size(); ++b) {
    const Rational& z = sol.primal[x_cols + b];
    if (z.sign() > 0) out.z_support.push_back({all_partitions[b], z});
  }
  out.pi.assign(sol.dual.begin(), sol.dual.begin() + n);
  out.subset_prices.assign(sets + 1, Rational(0));
  for (std::size_t s = 1; s <= sets; ++s) out.subset_prices[s] = sol.dual[n + s - 1];
  out.pi0 = sol.dual.back();

  bool slack = true;
  for (std::size_t s = 1; s <= sets; ++s) {
    if (out.subset_prices[s].sign() <= 0) continue;
    Rational demand, supply;
    for (const auto& e : out.x_support) {
      if (e.set == s) demand += e.weight;
    }
    for (const auto& e : out.z_support) {
      if (std::find(e.parts.begin(), e.parts.end(), static_cast<ItemSet>(s)) != e.parts.end()) supply += e.weight;
    }
    slack = slack && demand == supply;
  }
  for (const auto& e : out.x_support) {
    slack = slack && out.pi[e.consumer] == market.value(e.consumer, e.set) - out.subset_prices[e.set];
  }
  for (const auto& e : out.z_support) {
    Rational total;
    for (ItemSet part : e.parts) total += out.subset_prices[part];
    slack = slack && out.pi0 == total;
  }
  out.slackness_holds = slack;
  check_invariant(slack, "CAP2 complementary slackness failed");

  WelfareResult opt = welfare_opt(market, budget);
  out.integral = opt.value;
  check_invariant(out.fractional >= out.integral, "CAP2 below the integral optimum");
  out.integral_flag = out.fractional == out.integral;
  return out;
}

Outcome nlpe_to_cbe(const Market& market, const Cap2Result& cap2) {
  check_precondition(cap2.integral_flag, "CAP2 optimum is fractional");
  const int n = market.num_consumers();
  WelfareResult opt = welfare_opt(market);
  Outcome out;
  out.allocation.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    const ItemSet part = opt.allocation[i];
    if (part == 0) {
      check_invariant(cap2.pi[i].is_zero(), "unallocated consumer with positive utility");
      continue;
    }
    check_invariant(cap2.pi[i] == market.value(i, part) - cap2.subset_prices[part],
                    "CAP2 slackness fails on the integral optimum");
    out.allocation[i] = singleton(out.priced.bundling.size());
    out.priced.bundling.bundles.push_back(part);
    out.priced.prices.push_back(cap2.subset_prices[part]);
  }
  VerificationReport report = verify_cbe(market, out);
  check_invariant(report.pass, "CAP2 extraction is not a CBE: " + report.summary());
  check_invariant(report.welfare == cap2.integral, "CAP2 extraction is not efficient");
  return out;
}

MenuMechanism menu_lp(const std::vector<Rational>& values, const Rational& cap) {
  check_precondition(!values.empty(), "menu_lp needs at least one type");
  check_precondition(cap.sign() >= 0 && cap <= Rational(1), "cap must lie in [0, 1]");
  std::set<Rational> distinct;
  for (const auto& v : values) {
    check_precondition(v.sign() > 0, "type values must be positive");
    distinct.insert(v);
  }
  check_precondition(distinct.size() == values.size(), "type values must be distinct");

  const std::size_t k = values.size();
  // Columns: x_0..x_{k-1}, then p_0..p_{k-1} (free).
  LinearProgram lp;
  lp.sense = Sense::kMaximize;
  for (std::size_t i = 0; i < k; ++i) lp.add_variable(Rational(0));
  for (std::size_t i = 0; i < k; ++i) lp.add_variable(Rational(1, static_cast<long>(k)), std::nullopt);
  auto row = [&] { return std::vector<Rational>(2 * k); };
  for (std::size_t i = 0; i < k; ++i) {
    auto r = row();
    r[i] = Rational(1);
    lp.add_constraint(std::move(r), Relation::kLessEqual, cap);
  }
  for (std::size_t i = 0; i < k; ++i) {
    auto r = row();
    r[i] = values[i];
    r[k + i] = Rational(-1);
    lp.add_constraint(std::move(r), Relation::kGreaterEqual, Rational(0));
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      auto r = row();
      r[i] = values[i];
      r[k + i] = Rational(-1);
      r[j] -= values[i];
      r[k + j] += Rational(1);
      lp.add_constraint(std::move(r), Relation::kGreaterEqual, Rational(0));
    }
  }
  LpSolution sol = lp_solve(lp);
  check_invariant(sol.status == LpStatus::kOptimal, "menu LP not optimal");
  CertificateCheck cert = verify_certificates(lp, sol);
  check_invariant(cert.ok(), "menu LP certificate failed: " + cert.detail);
  MenuMechanism out;
  out.values = values;
  out.cap = cap;
  out.probabilities.assign(sol.primal.begin(), sol.primal.begin() + k);
  out.prices.assign(sol.primal.begin() + k, sol.primal.end());
  out.revenue = sol.value;
  check_invariant(menu_is_valid(out), "menu LP output violates IC/IR");
  return out;
}

Rational best_reserve_revenue(const std::vector<Rational>& values) {
  Rational best;
  for (const auto& r : values) {
    long buyers = std::count_if(values.begin(), values.end(), [&](const Rational& v) { return v >= r; });
    best = max(best, r * Rational(buyers, static_cast<long>(values.size())));
  }
  return best;
}

bool menu_is_valid(const MenuMechanism& menu) {
  const std::size_t k = menu.values.size();
  Rational total;
  for (std::size_t i = 0; i < k; ++i) {
    const Rational& x = menu.probabilities[i];
    if (x.sign() < 0 || x > menu.cap) return false;
    Rational own = menu.values[i] * x - menu.prices[i];
    if (own.sign() < 0) return false;
    for (std::size_t j = 0; j < k; ++j) {
      if (own < menu.values[i] * menu.probabilities[j] - menu.prices[j]) return false;
    }
    total += menu.prices[i];
  }
  return total / Rational(static_cast<long>(k)) == menu.revenue;
}

}  // namespace cbe
