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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cbe/rational.hpp"

namespace cbe {

enum class Sense { kMaximize, kMinimize };
enum class Relation { kLessEqual, kGreaterEqual, kEqual };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct Constraint {
  std::vector<Rational> coefficients;
  Relation relation = Relation::kLessEqual;
  Rational rhs;
};

// An exact linear program. Variables default to a lower bound of 0; a
// lower bound of std::nullopt makes the variable free.
//
// Dual convention. For a maximization the dual is
//   min  bᵀy − Σ_j l_j ((Aᵀy)_j − c_j)
//   s.t. (Aᵀy)_j ≥ c_j for bounded j, (Aᵀy)_j = c_j for free j,
//        y_r ≥ 0 on ≤ rows, y_r ≤ 0 on ≥ rows, y_r free on = rows.
// For a minimization the inequalities and signs flip: (Aᵀy)_j ≤ c_j,
// y_r ≤ 0 on ≤ rows, y_r ≥ 0 on ≥ rows. In both cases dual[r] belongs to
// constraints[r] and strong duality reads value = bᵀy − Σ_j l_j((Aᵀy)_j − c_j).
struct LinearProgram {
  Sense sense = Sense::kMaximize;
  std::vector<Rational> objective;
  std::vector<Constraint> constraints;
  std::vector<std::optional<Rational>> lower_bounds;  // empty: all zero

  std::size_t num_variables() const { return objective.size(); }
  std::optional<Rational> lower_bound(std::size_t j) const;

  std::size_t add_variable(const Rational& cost, std::optional<Rational> lower = Rational(0));
  void add_constraint(std::vector<Rational> coefficients, Relation relation, Rational rhs);
  // Throws PreconditionError when a row width or bound vector is inconsistent.
  void validate() const;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Rational value;
  std::vector<Rational> primal;
  std::vector<Rational> dual;
};

// Two-phase primal simplex over exact rationals with Bland's rule.
LpSolution lp_solve(const LinearProgram& lp);

struct CertificateCheck {
  bool primal_feasible = false;
  bool dual_feasible = false;
  bool strong_duality = false;
  bool complementary_slackness = false;
  std::string detail;

  bool ok() const { return primal_feasible && dual_feasible && strong_duality && complementary_slackness; }
};

// Re-checks an optimal solution against the LP with exact arithmetic.
CertificateCheck verify_certificates(const LinearProgram& lp, const LpSolution& solution);

// The dual LP written out explicitly, one variable per row of `lp`, with
// the sign conventions documented above. Requires all lower bounds to be 0.
LinearProgram dual_program(const LinearProgram& lp);

// Some point satisfying the constraints (with the given lower bounds), or
// std::nullopt when the system is infeasible.
std::optional<std::vector<Rational>> lp_feasible(const std::vector<Constraint>& constraints,
                                                 std::size_t num_variables,
                                                 const std::vector<std::optional<Rational>>& lower_bounds = {});

std::string to_string(LpStatus status);

}  // namespace cbe
