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

#include "pircsi/field.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace pircsi {
namespace {

using Poly = std::vector<uint32_t>;

void Trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder of `a` modulo monic `b` over GF(q). Both lowest degree first.
Poly PolyMod(Poly a, const Poly& b, uint32_t q) {
  Trim(a);
  const size_t db = b.size() - 1;
  while (a.size() > db) {
    const uint64_t lead = a.back();
    const size_t shift = a.size() - 1 - db;
    for (size_t i = 0; i <= db; ++i) {
      const uint64_t sub = lead * b[i] % q;
      a[shift + i] = static_cast<uint32_t>((a[shift + i] + q - sub) % q);
    }
    Trim(a);
  }
  return a;
}

// Monic polynomial of degree `deg` whose lower coefficients are the base-q
// digits of `rank`.
Poly MonicFromRank(uint64_t rank, uint32_t deg, uint32_t q) {
  Poly p(deg + 1, 0);
  for (uint32_t i = 0; i < deg; ++i) {
    p[i] = static_cast<uint32_t>(rank % q);
    rank /= q;
  }
  p[deg] = 1;
  return p;
}

bool CheckedPow(uint64_t base, uint32_t exp, uint64_t cap, uint64_t& out) {
  out = 1;
  for (uint32_t i = 0; i < exp; ++i) {
    if (out > cap / base) return false;
    out *= base;
  }
  return true;
}

void RequireSameField(const FieldElement& a, const FieldElement& b) {
  if (!SameField(a, b)) {
    throw std::invalid_argument("field elements belong to different fields");
  }
}

}  // namespace

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool IsIrreducible(std::span<const uint32_t> monic_poly, uint32_t q) {
  if (monic_poly.size() < 2 || monic_poly.back() != 1) return false;
  const uint32_t deg = static_cast<uint32_t>(monic_poly.size() - 1);
  const Poly f(monic_poly.begin(), monic_poly.end());
  for (uint32_t d = 1; d <= deg / 2; ++d) {
    uint64_t count;
    CheckedPow(q, d, UINT64_MAX, count);
    for (uint64_t rank = 0; rank < count; ++rank) {
      if (PolyMod(f, MonicFromRank(rank, d, q), q).empty()) return false;
    }
  }
  return true;
}

absl::StatusOr<std::vector<uint32_t>> SmallestIrreducible(uint32_t q, uint32_t m) {
  if (m == 0) return absl::InvalidArgumentError("extension degree must be >= 1");
  uint64_t count;
  if (!CheckedPow(q, m, uint64_t{1} << 62, count)) {
    return absl::InvalidArgumentError("field too large");
  }
  for (uint64_t rank = 0; rank < count; ++rank) {
    Poly p = MonicFromRank(rank, m, q);
    if (IsIrreducible(p, q)) return p;
  }
  return absl::InternalError(
      absl::StrCat("no irreducible polynomial of degree ", m, " over GF(", q, ")"));
}

FieldParams::FieldParams(uint32_t q, uint32_t m, std::vector<uint32_t> modulus)
    : q_(q), m_(m), modulus_(std::move(modulus)) {
  CheckedPow(q, m, UINT64_MAX, order_);
}

absl::StatusOr<FieldParamsPtr> FieldParams::Create(uint32_t q, uint32_t m) {
  if (q < 3 || q > kMaxFieldCharacteristic || !IsPrime(q)) {
    return absl::InvalidArgumentError(
        absl::StrCat("q must be a prime in [3, ", kMaxFieldCharacteristic, "], got ", q));
  }
  if (m < 1 || m > kMaxExtensionDegree) {
    return absl::InvalidArgumentError(
        absl::StrCat("extension degree must be in [1, ", kMaxExtensionDegree, "], got ", m));
  }
  uint64_t order;
  if (!CheckedPow(q, m, uint64_t{1} << 62, order)) {
    return absl::InvalidArgumentError(absl::StrCat("GF(", q, "^", m, ") is too large"));
  }
  std::vector<uint32_t> modulus;
  if (m > 1) {
    auto found = SmallestIrreducible(q, m);
    if (!found.ok()) return found.status();
    modulus = *std::move(found);
  }
  return FieldParamsPtr(new FieldParams(q, m, std::move(modulus)));
}

std::string FieldParams::ToString() const {
  if (m_ == 1) return absl::StrCat("GF(", q_, ")");
  return absl::StrCat("GF(", q_, "^", m_, ")");
}

FieldElement FieldElement::Zero(const FieldParamsPtr& params) {
  return FieldElement(params, std::vector<uint32_t>(params->m(), 0));
}

FieldElement FieldElement::One(const FieldParamsPtr& params) { return FromBase(params, 1); }

FieldElement FieldElement::FromBase(const FieldParamsPtr& params, uint64_t value) {
  std::vector<uint32_t> c(params->m(), 0);
  c[0] = static_cast<uint32_t>(value % params->q());
  return FieldElement(params, std::move(c));
}

FieldElement FieldElement::FromOrdinal(const FieldParamsPtr& params, uint64_t ordinal) {
  std::vector<uint32_t> c(params->m(), 0);
  for (auto& digit : c) {
    digit = static_cast<uint32_t>(ordinal % params->q());
    ordinal /= params->q();
  }
  return FieldElement(params, std::move(c));
}

absl::StatusOr<FieldElement> FieldElement::FromCoefficients(const FieldParamsPtr& params,
                                                            std::vector<uint32_t> coeffs) {
  if (coeffs.size() != params->m()) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", params->m(), " coefficients, got ", coeffs.size()));
  }
  for (uint32_t c : coeffs) {
    if (c >= params->q()) {
      return absl::InvalidArgumentError(
          absl::StrCat("coefficient ", c, " out of range for q = ", params->q()));
    }
  }
  return FieldElement(params, std::move(coeffs));
}

uint64_t FieldElement::Ordinal() const {
  uint64_t v = 0;
  for (size_t i = coeffs_.size(); i-- > 0;) v = v * params_->q() + coeffs_[i];
  return v;
}

bool FieldElement::IsZero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](uint32_t c) { return c == 0; });
}

bool FieldElement::IsBase() const {
  return std::all_of(coeffs_.begin() + (coeffs_.empty() ? 0 : 1), coeffs_.end(),
                     [](uint32_t c) { return c == 0; });
}

std::string FieldElement::ToString() const {
  if (!params_) return "<unset>";
  if (IsBase()) return absl::StrCat(BaseValue());
  std::string out;
  for (size_t i = coeffs_.size(); i-- > 0;) {
    if (coeffs_[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0 || coeffs_[i] != 1) absl::StrAppend(&out, coeffs_[i]);
    if (i >= 1) out += "x";
    if (i >= 2) absl::StrAppend(&out, "^", i);
  }
  return out;
}

bool SameField(const FieldElement& a, const FieldElement& b) {
  if (!a.params() || !b.params()) return false;
  return a.params() == b.params() || *a.params() == *b.params();
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  if (!a.params_ || !b.params_) return !a.params_ && !b.params_;
  return SameField(a, b) && a.coeffs_ == b.coeffs_;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  RequireSameField(a, b);
  const uint32_t q = a.params_->q();
  std::vector<uint32_t> c(a.coeffs_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = (a.coeffs_[i] + b.coeffs_[i]) % q;
  return FieldElement(a.params_, std::move(c));
}

FieldElement operator-(const FieldElement& a) {
  const uint32_t q = a.params_->q();
  std::vector<uint32_t> c(a.coeffs_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = (q - a.coeffs_[i]) % q;
  return FieldElement(a.params_, std::move(c));
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  RequireSameField(a, b);
  const uint32_t q = a.params_->q();
  std::vector<uint32_t> c(a.coeffs_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = (a.coeffs_[i] + q - b.coeffs_[i]) % q;
  return FieldElement(a.params_, std::move(c));
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  RequireSameField(a, b);
  const FieldParams& f = *a.params_;
  const uint64_t q = f.q();
  if (f.m() == 1) {
    return FieldElement(a.params_,
                        {static_cast<uint32_t>(uint64_t{a.coeffs_[0]} * b.coeffs_[0] % q)});
  }
  std::vector<uint64_t> wide(2 * f.m() - 1, 0);
  for (size_t i = 0; i < f.m(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (size_t j = 0; j < f.m(); ++j) {
      wide[i + j] = (wide[i + j] + uint64_t{a.coeffs_[i]} * b.coeffs_[j]) % q;
    }
  }
  Poly product(wide.begin(), wide.end());
  Poly reduced = PolyMod(std::move(product), f.modulus(), f.q());
  reduced.resize(f.m(), 0);
  return FieldElement(a.params_, std::move(reduced));
}

std::ostream& operator<<(std::ostream& os, const FieldElement& e) { return os << e.ToString(); }

absl::StatusOr<FieldElement> FfAdd(const FieldElement& a, const FieldElement& b) {
  if (!SameField(a, b)) return absl::InvalidArgumentError("mismatched field parameters");
  return a + b;
}

absl::StatusOr<FieldElement> FfSub(const FieldElement& a, const FieldElement& b) {
  if (!SameField(a, b)) return absl::InvalidArgumentError("mismatched field parameters");
  return a - b;
}

absl::StatusOr<FieldElement> FfMul(const FieldElement& a, const FieldElement& b) {
  if (!SameField(a, b)) return absl::InvalidArgumentError("mismatched field parameters");
  return a * b;
}

absl::StatusOr<FieldElement> FfInv(const FieldElement& a) {
  if (!a.params_) return absl::InvalidArgumentError("unset field element");
  if (a.IsZero()) return absl::FailedPreconditionError("division by zero");
  // a^(q^m - 2) = a^-1 in the multiplicative group of order q^m - 1.
  uint64_t e = a.params_->order() - 2;
  FieldElement base = a;
  FieldElement acc = FieldElement::One(a.params_);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

FieldElement FfSample(const FieldParamsPtr& params, Rng& rng, bool nonzero_base) {
  if (nonzero_base) return FieldElement::FromBase(params, 1 + rng.Below(params->q() - 1));
  return FieldElement::FromOrdinal(params, rng.Below(params->order()));
}

}  // namespace pircsi
