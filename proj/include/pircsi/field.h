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

#ifndef PIRCSI_FIELD_H_
#define PIRCSI_FIELD_H_

#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "pircsi/rng.h"

namespace pircsi {

class FieldParams;
using FieldParamsPtr = std::shared_ptr<const FieldParams>;

// Largest supported base-field modulus; coefficients travel as 16-bit words.
inline constexpr uint32_t kMaxFieldCharacteristic = 65535;
inline constexpr uint32_t kMaxExtensionDegree = 8;

// Parameters of GF(q^m), represented as polynomials over GF(q) reduced modulo
// a fixed monic irreducible polynomial of degree m. Immutable once created.
class FieldParams {
 public:
  // Requires q prime with 3 <= q <= 65535 and 1 <= m <= 8 (and q^m < 2^62).
  // The modulus is the lexicographically smallest monic irreducible of
  // degree m, so equal (q, m) always yield the same representation.
  static absl::StatusOr<FieldParamsPtr> Create(uint32_t q, uint32_t m);

  uint32_t q() const { return q_; }
  uint32_t m() const { return m_; }
  // Coefficients of the monic modulus, lowest degree first (m + 1 entries).
  // Empty when m == 1.
  const std::vector<uint32_t>& modulus() const { return modulus_; }
  // Number of field elements, q^m.
  uint64_t order() const { return order_; }

  std::string ToString() const;

  friend bool operator==(const FieldParams& a, const FieldParams& b) {
    return a.q_ == b.q_ && a.m_ == b.m_ && a.modulus_ == b.modulus_;
  }

 private:
  FieldParams(uint32_t q, uint32_t m, std::vector<uint32_t> modulus);

  uint32_t q_;
  uint32_t m_;
  uint64_t order_;
  std::vector<uint32_t> modulus_;
};

bool IsPrime(uint64_t n);

// Exhaustive irreducibility test of a monic polynomial over GF(q) by trial
// division with every monic polynomial of degree <= deg/2.
bool IsIrreducible(std::span<const uint32_t> monic_poly, uint32_t q);

// Lexicographically smallest monic irreducible polynomial of degree m over
// GF(q). Polynomials x^m + c_{m-1} x^{m-1} + ... + c_0 are ordered by the
// integer sum c_i q^i.
absl::StatusOr<std::vector<uint32_t>> SmallestIrreducible(uint32_t q, uint32_t m);

// An element of GF(q^m): m coefficients in [0, q), lowest degree first.
// Elements of the base field GF(q) are the constant polynomials.
class FieldElement {
 public:
  // An unset element; only assignment and comparison are meaningful.
  FieldElement() = default;

  static FieldElement Zero(const FieldParamsPtr& params);
  static FieldElement One(const FieldParamsPtr& params);
  // The constant polynomial `value mod q`.
  static FieldElement FromBase(const FieldParamsPtr& params, uint64_t value);
  // Element whose coefficients are the base-q digits of `ordinal`.
  static FieldElement FromOrdinal(const FieldParamsPtr& params, uint64_t ordinal);
  static absl::StatusOr<FieldElement> FromCoefficients(const FieldParamsPtr& params,
                                                       std::vector<uint32_t> coeffs);

  const FieldParamsPtr& params() const { return params_; }
  const std::vector<uint32_t>& coeffs() const { return coeffs_; }
  uint64_t Ordinal() const;

  bool IsZero() const;
  // True when the element lies in the base field GF(q).
  bool IsBase() const;
  // Constant coefficient; the element's value when IsBase().
  uint32_t BaseValue() const { return coeffs_.empty() ? 0 : coeffs_[0]; }

  // Polynomial notation, e.g. "2x+1"; base elements print as integers.
  std::string ToString() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b);

  // Unchecked arithmetic for code that already guarantees a common field.
  // Mixing fields throws std::invalid_argument.
  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a);
  FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
  FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
  FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }

 private:
  FieldElement(FieldParamsPtr params, std::vector<uint32_t> coeffs)
      : params_(std::move(params)), coeffs_(std::move(coeffs)) {}

  friend absl::StatusOr<FieldElement> FfInv(const FieldElement& a);

  FieldParamsPtr params_;
  std::vector<uint32_t> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& e);

bool SameField(const FieldElement& a, const FieldElement& b);

// Checked arithmetic: mismatched fields yield InvalidArgument.
absl::StatusOr<FieldElement> FfAdd(const FieldElement& a, const FieldElement& b);
absl::StatusOr<FieldElement> FfSub(const FieldElement& a, const FieldElement& b);
absl::StatusOr<FieldElement> FfMul(const FieldElement& a, const FieldElement& b);
// Multiplicative inverse; zero yields FailedPrecondition (division by zero).
absl::StatusOr<FieldElement> FfInv(const FieldElement& a);

// Uniform draw from GF(q^m), or, when `nonzero_base` is set, from the
// multiplicative group of the base field GF(q) embedded as constants.
FieldElement FfSample(const FieldParamsPtr& params, Rng& rng, bool nonzero_base);

}  // namespace pircsi

#endif  // PIRCSI_FIELD_H_
