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

#include "cbe/linear_program.hpp"

#include <gmpxx.h>

#include <utility>

#include "cbe/errors.hpp"

namespace cbe {

std::optional<Rational> LinearProgram::lower_bound(std::size_t j) const {
  if (lower_bounds.empty()) return Rational(0);
  return lower_bounds[j];
}

std::size_t LinearProgram::add_variable(const Rational& cost, std::optional<Rational> lower) {
  if (!lower_bounds.empty() || !(lower && lower->is_zero())) {
    lower_bounds.resize(objective.size(), std::optional<Rational>(Rational(0)));
    lower_bounds.push_back(std::move(lower));
  }
  objective.push_back(cost);
  for (auto& c : constraints) c.coefficients.emplace_back(0);
  return objective.size() - 1;
}

void LinearProgram::add_constraint(std::vector<Rational> coefficients, Relation relation, Rational rhs) {
  constraints.push_back(Constraint{std::move(coefficients), relation, std::move(rhs)});
}

void LinearProgram::validate() const {
  const std::size_t n = objective.size();
  if (!lower_bounds.empty() && lower_bounds.size() != n) {
    throw PreconditionError("lower bound vector has width " + std::to_string(lower_bounds.size()) +
                            ", expected " + std::to_string(n));
  }
  for (std::size_t r = 0; r < constraints.size(); ++r) {
    if (constraints[r].coefficients.size() != n) {
      throw PreconditionError("constraint " + std::to_string(r) + " has width " +
                              std::to_string(constraints[r].coefficients.size()) + ", expected " +
                              std::to_string(n));
    }
  }
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

// Dense simplex tableau in equality form with an explicit reduced-cost row.
// zrow[c] is the reduced cost of column c; zrow[width] is minus the current
// objective value.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_(rows, std::vector<mpq_class>(cols + 1)), basis_(rows), zrow_(cols + 1) {}

  mpq_class& at(std::size_t r, std::size_t c) { return cells_[r][c]; }
  mpq_class& rhs(std::size_t r) { return cells_[r][cols_]; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::vector<mpq_class>& zrow() { return zrow_; }

  void set_costs(const std::vector<mpq_class>& costs) {
    for (std::size_t c = 0; c < cols_; ++c) zrow_[c] = costs[c];
    zrow_[cols_] = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const mpq_class& cb = costs[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) {
        if (sgn(cells_[r][c]) != 0) zrow_[c] -= cb * cells_[r][c];
      }
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    std::vector<mpq_class>& prow = cells_[pr];
    const mpq_class inv = 1 / prow[pc];
    for (std::size_t c = 0; c <= cols_; ++c) {
      if (sgn(prow[c]) != 0) prow[c] *= inv;
    }
    std::vector<std::size_t> support;
    for (std::size_t c = 0; c <= cols_; ++c) {
      if (sgn(prow[c]) != 0) support.push_back(c);
    }
    auto eliminate = [&](std::vector<mpq_class>& row) {
      if (sgn(row[pc]) == 0) return;
      const mpq_class factor = row[pc];
      for (std::size_t c : support) row[c] -= factor * prow[c];
    };
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r != pr) eliminate(cells_[r]);
    }
    eliminate(zrow_);
    basis_[pr] = pc;
  }

  // Maximizes over columns with allowed[c]. Returns false when unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    while (true) {
      std::size_t enter = cols_;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (allowed[c] && sgn(zrow_[c]) > 0) {
          enter = c;
          break;
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = rows_;
      mpq_class best;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (sgn(cells_[r][enter]) <= 0) continue;
        mpq_class ratio = cells_[r][cols_] / cells_[r][enter];
        if (leave == rows_ || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::vector<mpq_class>> cells_;
  std::vector<std::size_t> basis_;
  std::vector<mpq_class> zrow_;
};

struct ColumnSource {
  std::size_t variable;
  int sign;
};

}  // namespace

LpSolution lp_solve(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = lp.num_variables();
  const std::size_t m = lp.constraints.size();
  const bool minimize = lp.sense == Sense::kMinimize;

  // Structural columns after shifting bounded variables and splitting free ones.
  std::vector<ColumnSource> sources;
  std::vector<std::vector<std::size_t>> columns_of(n);
  std::vector<mpq_class> lower(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto lb = lp.lower_bound(j);
    columns_of[j].push_back(sources.size());
    sources.push_back({j, 1});
    if (lb) {
      lower[j] = lb->raw();
    } else {
      columns_of[j].push_back(sources.size());
      sources.push_back({j, -1});
    }
  }
  const std::size_t structural = sources.size();

  std::vector<Relation> relation(m);
  std::vector<bool> flipped(m, false);
  std::vector<mpq_class> rhs(m);
  for (std::size_t r = 0; r < m; ++r) {
    const Constraint& row = lp.constraints[r];
    mpq_class b = row.rhs.raw();
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(lower[j]) != 0) b -= row.coefficients[j].raw() * lower[j];
    }
    relation[r] = row.relation;
    if (sgn(b) < 0) {
      flipped[r] = true;
      b = -b;
      if (relation[r] == Relation::kLessEqual) {
        relation[r] = Relation::kGreaterEqual;
      } else if (relation[r] == Relation::kGreaterEqual) {
        relation[r] = Relation::kLessEqual;
      }
    }
    rhs[r] = b;
  }

  // Column layout: structural | slack or surplus | artificial.
  std::vector<std::size_t> slack_col(m, SIZE_MAX);
  std::vector<std::size_t> identity_col(m);
  std::size_t cols = structural;
  for (std::size_t r = 0; r < m; ++r) {
    if (relation[r] != Relation::kEqual) slack_col[r] = cols++;
  }
  const std::size_t first_artificial = cols;
  for (std::size_t r = 0; r < m; ++r) {
    identity_col[r] = relation[r] == Relation::kLessEqual ? slack_col[r] : cols++;
  }

  Tableau t(m, cols);
  for (std::size_t r = 0; r < m; ++r) {
    const Constraint& row = lp.constraints[r];
    const int s = flipped[r] ? -1 : 1;
    for (std::size_t c = 0; c < structural; ++c) {
      const mpq_class& a = row.coefficients[sources[c].variable].raw();
      if (sgn(a) != 0) t.at(r, c) = a * (s * sources[c].sign);
    }
    if (slack_col[r] != SIZE_MAX) t.at(r, slack_col[r]) = relation[r] == Relation::kLessEqual ? 1 : -1;
    t.at(r, identity_col[r]) = 1;
    t.rhs(r) = rhs[r];
    t.basis()[r] = identity_col[r];
  }

  LpSolution solution;
  std::vector<bool> allowed(cols, true);

  // Phase 1: maximize minus the sum of artificials.
  if (first_artificial < cols) {
    std::vector<mpq_class> phase1(cols);
    for (std::size_t c = first_artificial; c < cols; ++c) phase1[c] = -1;
    t.set_costs(phase1);
    t.optimize(allowed);
    if (sgn(t.zrow()[cols]) != 0) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis()[r] < first_artificial) continue;
      for (std::size_t c = 0; c < first_artificial; ++c) {
        if (sgn(t.at(r, c)) != 0) {
          t.pivot(r, c);
          break;
        }
      }
    }
    for (std::size_t c = first_artificial; c < cols; ++c) allowed[c] = false;
  }

  // Phase 2.
  std::vector<mpq_class> costs(cols);
  for (std::size_t c = 0; c < structural; ++c) {
    const mpq_class& cj = lp.objective[sources[c].variable].raw();
    costs[c] = (minimize ? -cj : cj) * sources[c].sign;
  }
  t.set_costs(costs);
  if (!t.optimize(allowed)) {
    solution.status = LpStatus::kUnbounded;
    return solution;
  }

  std::vector<mpq_class> column_value(cols);
  for (std::size_t r = 0; r < m; ++r) column_value[t.basis()[r]] = t.rhs(r);
  solution.status = LpStatus::kOptimal;
  solution.primal.resize(n);
  mpq_class value;
  for (std::size_t j = 0; j < n; ++j) {
    mpq_class x = lower[j];
    for (std::size_t c : columns_of[j]) x += column_value[c] * sources[c].sign;
    solution.primal[j] = Rational(x);
    value += lp.objective[j].raw() * x;
  }
  solution.value = Rational(value);
  solution.dual.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    mpq_class y = -t.zrow()[identity_col[r]];
    if (flipped[r]) y = -y;
    if (minimize) y = -y;
    solution.dual[r] = Rational(y);
  }
  return solution;
}

CertificateCheck verify_certificates(const LinearProgram& lp, const LpSolution& solution) {
  CertificateCheck check;
  if (solution.status != LpStatus::kOptimal) {
    check.detail = "solution is not optimal";
    return check;
  }
  const std::size_t n = lp.num_variables();
  const std::size_t m = lp.constraints.size();
  const bool minimize = lp.sense == Sense::kMinimize;
  if (solution.primal.size() != n || solution.dual.size() != m) {
    check.detail = "certificate dimensions do not match the program";
    return check;
  }

  check.primal_feasible = true;
  std::vector<Rational> activity(m);
  for (std::size_t r = 0; r < m; ++r) {
    Rational a;
    for (std::size_t j = 0; j < n; ++j) {
      if (!lp.constraints[r].coefficients[j].is_zero()) a += lp.constraints[r].coefficients[j] * solution.primal[j];
    }
    activity[r] = a;
    const Rational& b = lp.constraints[r].rhs;
    bool ok = lp.constraints[r].relation == Relation::kLessEqual      ? a <= b
              : lp.constraints[r].relation == Relation::kGreaterEqual ? a >= b
                                                                       : a == b;
    if (!ok) {
      check.primal_feasible = false;
      check.detail += "row " + std::to_string(r) + " violated; ";
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    auto lb = lp.lower_bound(j);
    if (lb && solution.primal[j] < *lb) {
      check.primal_feasible = false;
      check.detail += "variable " + std::to_string(j) + " below its bound; ";
    }
  }

  check.dual_feasible = true;
  for (std::size_t r = 0; r < m; ++r) {
    int s = solution.dual[r].sign();
    if (minimize) s = -s;
    Relation rel = lp.constraints[r].relation;
    if ((rel == Relation::kLessEqual && s < 0) || (rel == Relation::kGreaterEqual && s > 0)) {
      check.dual_feasible = false;
      check.detail += "dual sign wrong on row " + std::to_string(r) + "; ";
    }
  }
  // slack_j = (Aᵀy)_j − c_j, oriented so that feasibility means slack >= 0.
  std::vector<Rational> slack(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rational aty;
    for (std::size_t r = 0; r < m; ++r) {
      if (!solution.dual[r].is_zero()) aty += lp.constraints[r].coefficients[j] * solution.dual[r];
    }
    slack[j] = aty - lp.objective[j];
    Rational oriented = minimize ? -slack[j] : slack[j];
    bool ok = lp.lower_bound(j) ? oriented.sign() >= 0 : oriented.is_zero();
    if (!ok) {
      check.dual_feasible = false;
      check.detail += "dual row for variable " + std::to_string(j) + " violated; ";
    }
  }

  Rational primal_value;
  for (std::size_t j = 0; j < n; ++j) primal_value += lp.objective[j] * solution.primal[j];
  Rational dual_value;
  for (std::size_t r = 0; r < m; ++r) dual_value += lp.constraints[r].rhs * solution.dual[r];
  for (std::size_t j = 0; j < n; ++j) {
    auto lb = lp.lower_bound(j);
    if (lb && !lb->is_zero()) dual_value -= *lb * slack[j];
  }
  check.strong_duality = primal_value == solution.value && dual_value == primal_value;
  if (!check.strong_duality) {
    check.detail += "objective " + primal_value.to_string() + " vs dual " + dual_value.to_string() + "; ";
  }

  check.complementary_slackness = true;
  for (std::size_t r = 0; r < m; ++r) {
    if (!solution.dual[r].is_zero() && activity[r] != lp.constraints[r].rhs) {
      check.complementary_slackness = false;
      check.detail += "row " + std::to_string(r) + " has a dual but is slack; ";
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    auto lb = lp.lower_bound(j);
    if (lb && !slack[j].is_zero() && solution.primal[j] != *lb) {
      check.complementary_slackness = false;
      check.detail += "variable " + std::to_string(j) + " off its bound with a nonzero reduced cost; ";
    }
  }
  return check;
}

LinearProgram dual_program(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = lp.num_variables();
  const std::size_t m = lp.constraints.size();
  const bool minimize = lp.sense == Sense::kMinimize;
  for (std::size_t j = 0; j < n; ++j) {
    auto lb = lp.lower_bound(j);
    if (lb && !lb->is_zero()) throw PreconditionError("dual_program requires zero or free lower bounds");
  }
  LinearProgram dual;
  dual.sense = minimize ? Sense::kMaximize : Sense::kMinimize;
  dual.lower_bounds.assign(m, std::nullopt);
  for (std::size_t r = 0; r < m; ++r) dual.objective.push_back(lp.constraints[r].rhs);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> row(m);
    for (std::size_t r = 0; r < m; ++r) row[r] = lp.constraints[r].coefficients[j];
    Relation rel = !lp.lower_bound(j) ? Relation::kEqual : (minimize ? Relation::kLessEqual : Relation::kGreaterEqual);
    dual.add_constraint(std::move(row), rel, lp.objective[j]);
  }
  // Sign restrictions as explicit rows, so dual variable r stays aligned with row r.
  for (std::size_t r = 0; r < m; ++r) {
    Relation rel = lp.constraints[r].relation;
    if (rel == Relation::kEqual) continue;
    bool nonnegative = (rel == Relation::kLessEqual) != minimize;
    std::vector<Rational> row(m);
    row[r] = 1;
    dual.add_constraint(std::move(row), nonnegative ? Relation::kGreaterEqual : Relation::kLessEqual, Rational(0));
  }
  return dual;
}

std::optional<std::vector<Rational>> lp_feasible(const std::vector<Constraint>& constraints,
                                                 std::size_t num_variables,
                                                 const std::vector<std::optional<Rational>>& lower_bounds) {
  LinearProgram lp;
  lp.objective.assign(num_variables, Rational(0));
  lp.constraints = constraints;
  lp.lower_bounds = lower_bounds;
  LpSolution s = lp_solve(lp);
  if (s.status != LpStatus::kOptimal) return std::nullopt;
  return s.primal;
}

}  // namespace cbe
