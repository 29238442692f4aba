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

#include <gmpxx.h>

#include "cbe/rational.hpp"

// Exact comparisons against irrational quantities (logarithms, roots).
namespace cbe {

// log2(x) >= q, exactly. Requires x > 0.
bool log2_at_least(const Rational& x, const Rational& q);

// sqrt(x) >= q, exactly. Requires x >= 0.
bool sqrt_at_least(const Rational& x, const Rational& q);

// Largest integer t with t*t <= n, and smallest with t*t >= n.
mpz_class isqrt_floor(const mpz_class& n);
mpz_class isqrt_ceil(const mpz_class& n);

// floor(log2(n)) for n >= 1.
long ilog2(const mpz_class& n);

// ceil(m^(1/3)) for m >= 1.
long icbrt_ceil(long m);

// Rational lower bound of m^(2/3) accurate to 2^-20.
Rational pow_two_thirds_lower(long m);

// Checks welfare * divisor >= total where divisor = factor * (log2(base) + 2).
// All exact: equivalent to log2(base) >= total / (factor * welfare) - 2.
bool within_log_factor(const Rational& welfare, const Rational& total, const Rational& factor,
                       const Rational& base);

}  // namespace cbe
