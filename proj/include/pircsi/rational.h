// Copyright 2026 The PIR-CSI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIRCSI_RATIONAL_H_
#define PIRCSI_RATIONAL_H_

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace pircsi {

// Exact rational number. GMP keeps results of arithmetic in lowest terms
// with a positive denominator.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational MakeRational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational MakeRational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string NumeratorString(const Rational& r) { return r.get_num().get_str(); }
inline std::string DenominatorString(const Rational& r) { return r.get_den().get_str(); }
// "n/d", or "n" when the denominator is 1.
inline std::string ToString(const Rational& r) { return r.get_str(); }

// n! (0 for negative n is never requested; callers guard).
inline BigInt Factorial(long n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

// Binomial coefficient; zero when k < 0, n < 0 or k > n.
inline BigInt Binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

}  // namespace pircsi

#endif  // PIRCSI_RATIONAL_H_
