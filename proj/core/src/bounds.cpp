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

#include "cbe/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "cbe/errors.hpp"

namespace cbe {

namespace {

mpz_class pow_z(const mpz_class& base, unsigned long e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

// log2 of a positive integer, accurate to about 2^-50 absolute.
double log2_z(const mpz_class& z) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

}  // namespace

bool log2_at_least(const Rational& x, const Rational& q) {
  check_precondition(x.sign() > 0, "log2 of a non-positive number");
  // Floating-point screen; only near-ties reach the exact comparison.
  const double approx = log2_z(x.numerator()) - log2_z(x.denominator());
  const double target = q.to_double();
  const double margin = 1e-6 * std::max(1.0, std::abs(target));
  if (approx > target + margin) return true;
  if (approx < target - margin) return false;
  // log2(u/w) >= a/b  <=>  u^b >= 2^a w^b  (b > 0).
  mpz_class a = q.numerator();
  mpz_class b = q.denominator();
  check_precondition(b.fits_ulong_p() && mpz_class(abs(a)).fits_ulong_p(), "exponent too large");
  unsigned long be = b.get_ui();
  mpz_class lhs = pow_z(x.numerator(), be);
  mpz_class rhs = pow_z(x.denominator(), be);
  mpz_class two_a = pow_z(mpz_class(2), mpz_class(abs(a)).get_ui());
  if (sgn(a) >= 0) {
    rhs *= two_a;
  } else {
    lhs *= two_a;
  }
  return lhs >= rhs;
}

bool sqrt_at_least(const Rational& x, const Rational& q) {
  check_precondition(x.sign() >= 0, "sqrt of a negative number");
  if (q.sign() <= 0) return true;
  return x >= q * q;
}

mpz_class isqrt_floor(const mpz_class& n) {
  check_precondition(sgn(n) >= 0, "isqrt of a negative number");
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

mpz_class isqrt_ceil(const mpz_class& n) {
  mpz_class r = isqrt_floor(n);
  if (r * r < n) r += 1;
  return r;
}

long ilog2(const mpz_class& n) {
  check_precondition(sgn(n) > 0, "ilog2 of a non-positive number");
  return static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - 1;
}

long icbrt_ceil(long m) {
  check_precondition(m >= 1, "cube root of a non-positive number");
  long t = 1;
  while (t * t * t < m) ++t;
  return t;
}

Rational pow_two_thirds_lower(long m) {
  check_precondition(m >= 1, "m must be positive");
  // floor(cbrt(m^2 * 2^60)) / 2^20.
  mpz_class target = mpz_class(m) * m;
  target <<= 60;
  mpz_class root;
  mpz_root(root.get_mpz_t(), target.get_mpz_t(), 3);
  mpz_class den(1);
  den <<= 20;
  return Rational::from_integers(root, den);
}

bool within_log_factor(const Rational& welfare, const Rational& total, const Rational& factor,
                       const Rational& base) {
  if (total.sign() <= 0) return true;
  if (welfare.sign() <= 0) return false;
  return log2_at_least(base, total / (factor * welfare) - Rational(2));
}

}  // namespace cbe
