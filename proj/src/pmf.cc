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

#include "pircsi/pmf.h"

#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "pircsi/status_macros.h"

namespace pircsi {
namespace {

Rational Ratio(const BigInt& num, const BigInt& den) { return MakeRational(num, den); }

BigInt Power(const BigInt& base, long exp) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exp));
  return out;
}

Rational Alpha(int n, int M, int r) {
  if (n <= 2) return 1;
  const long top = static_cast<long>(M + 1) * (n - 1);
  const BigInt m1_fact = Factorial(M + 1);
  const BigInt mr_fact = Factorial(M - r + 1);
  return Ratio(Factorial(top - 2 * r) * m1_fact * m1_fact, Factorial(top) * mr_fact * mr_fact);
}

Rational Partition(int n, int M, int r) {
  if (n < 3) return 1;
  const long top = static_cast<long>(M + 1) * (n - 1);
  const BigInt mr_fact = Factorial(M - r + 1);
  return Ratio(2 * Factorial(n - 3) * mr_fact * mr_fact * Power(Factorial(M + 1), n - 3),
               Factorial(top - 2 * r));
}

// Points (s, r) with s + r == line at which the binomials in the law are
// nonzero.
std::vector<ExtraCounts> LinePoints(int K, int M, int line) {
  std::vector<ExtraCounts> out;
  for (int s = 0; s <= line; ++s) {
    const int r = line - s;
    if (s <= M && r <= K - M - 1) out.emplace_back(s, r);
  }
  return out;
}

}  // namespace

int QuerySetCount(int num_messages, int side_size) {
  return (num_messages + side_size) / (side_size + 1);
}

int DuplicateCount(int num_messages, int side_size) {
  return (side_size + 1) * QuerySetCount(num_messages, side_size) - num_messages;
}

absl::Status ValidateInstance(Model model, int num_messages, int side_size) {
  if (num_messages < 1) {
    return absl::InvalidArgumentError(absl::StrCat("K must be >= 1, got ", num_messages));
  }
  if (model == Model::kI && (side_size < 0 || side_size >= num_messages)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "model I requires 0 <= M < K, got M = ", side_size, ", K = ", num_messages));
  }
  if (model == Model::kII && (side_size < 1 || side_size > num_messages)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "model II requires 1 <= M <= K, got M = ", side_size, ", K = ", num_messages));
  }
  return absl::OkStatus();
}

Rational RpDistribution::Mass(int s, int r) const {
  auto it = table.find({s, r});
  return it == table.end() ? Rational(0) : it->second;
}

absl::StatusOr<RpDistribution> ComputeRpDistribution(int num_messages, int side_size) {
  PIRCSI_RETURN_IF_ERROR(ValidateInstance(Model::kI, num_messages, side_size));
  const int K = num_messages;
  const int M = side_size;
  RpDistribution d;
  d.num_messages = K;
  d.side_size = M;
  d.set_count = QuerySetCount(K, M);
  d.duplicates = DuplicateCount(K, M);
  const int n = d.set_count;
  const int l = d.duplicates;
  for (int r = 0; r <= l; ++r) {
    d.alpha[r] = Alpha(n, M, r);
    d.partition[r] = Partition(n, M, r);
  }
  if (l == 0) {
    // No extra indices are needed; the only consistent law is the point mass.
    d.table[{0, 0}] = 1;
    d.normalizer = 1;
    return d;
  }
  const BigInt beta_den = Binomial(M, l - 1);
  std::map<ExtraCounts, Rational> weights;
  Rational total = 0;
  for (int line : {l - 1, l}) {
    const int multiplier = line == l ? 2 : 1;
    for (auto [s, r] : LinePoints(K, M, line)) {
      Rational w = multiplier * d.alpha[r] * Ratio(Binomial(M, s) * Binomial(K - M - 1, r), beta_den);
      if (w == 0) continue;
      total += w;
      weights[{s, r}] = w;
    }
  }
  d.normalizer = 1 / total;
  for (auto& [key, w] : weights) d.table[key] = w * d.normalizer;
  return d;
}

absl::StatusOr<Rational> PartitionProbability(int num_messages, int side_size, int r) {
  PIRCSI_RETURN_IF_ERROR(ValidateInstance(Model::kI, num_messages, side_size));
  const int l = DuplicateCount(num_messages, side_size);
  if (r < 0 || r > l) {
    return absl::InvalidArgumentError(absl::StrCat("r must lie in [0, ", l, "], got ", r));
  }
  return Partition(QuerySetCount(num_messages, side_size), side_size, r);
}

absl::StatusOr<Rational> FValue(int num_messages, int side_size, int s, int r) {
  PIRCSI_ASSIGN_OR_RETURN(RpDistribution d, ComputeRpDistribution(num_messages, side_size));
  const int K = num_messages;
  const int M = side_size;
  const int l = d.duplicates;
  const bool on_line = s + r == l || s + r == l - 1;
  if (s < 0 || r < 0 || !on_line || s > M || r > K - M - 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("(s, r) = (", s, ", ", r, ") is outside the admissible range for K = ", K,
                     ", M = ", M));
  }
  const BigInt den = Binomial(M, s) * Binomial(K - M - 1, r) * Binomial(K - 1, M);
  return d.Mass(s, r) / Rational(den) * d.partition.at(r);
}

IdentityReport CheckFIdentities(int num_messages, int side_size) {
  IdentityReport report;
  auto dist = ComputeRpDistribution(num_messages, side_size);
  if (!dist.ok()) {
    report.passed = false;
    report.counterexample = std::string(dist.status().message());
    return report;
  }
  const int K = num_messages;
  const int M = side_size;
  const int l = dist->duplicates;
  struct Point {
    ExtraCounts at;
    Rational f;
  };
  auto collect = [&](int line) {
    std::vector<Point> out;
    if (line < 0) return out;
    for (auto p : LinePoints(K, M, line)) out.push_back({p, *FValue(K, M, p.first, p.second)});
    return out;
  };
  const std::vector<Point> low = collect(l - 1);
  const std::vector<Point> high = collect(l);
  auto name = [](const Point& p) {
    return absl::StrCat("f(", p.at.first, ",", p.at.second, ")=", p.f.get_str());
  };
  auto fail = [&](std::string what) {
    if (report.passed) {
      report.passed = false;
      report.counterexample = std::move(what);
    }
  };

  // f(a) + f(b) == f(c) + f(d) on the lower line.
  for (const Point& a : low) {
    for (const Point& b : low) {
      const Rational lhs = a.f + b.f;
      for (const Point& c : low) {
        for (const Point& d : low) {
          ++report.tuples_checked;
          if (lhs != c.f + d.f) {
            fail(absl::StrCat("lower-line sums differ: ", name(a), " + ", name(b), " vs ",
                              name(c), " + ", name(d)));
          }
        }
      }
      // f(a) + f(b) == f(c) with c on the upper line.
      for (const Point& c : high) {
        ++report.tuples_checked;
        if (lhs != c.f) {
          fail(absl::StrCat("mixed identity fails: ", name(a), " + ", name(b), " vs ", name(c)));
        }
      }
    }
  }
  // f constant on the upper line.
  for (const Point& a : high) {
    for (const Point& b : high) {
      ++report.tuples_checked;
      if (a.f != b.f) fail(absl::StrCat("upper-line values differ: ", name(a), " vs ", name(b)));
    }
  }
  return report;
}

absl::StatusOr<std::map<int, Rational>> Case2Pmf(int num_messages, int side_size) {
  const int K = num_messages;
  const int M = side_size;
  if (M < 3 || 2 * M > K) {
    return absl::InvalidArgumentError(
        absl::StrCat("case-2 law requires 3 <= M <= K/2, got M = ", M, ", K = ", K));
  }
  const Rational low = MakeRational(2 * (M - 1), K);
  return std::map<int, Rational>{{M - 2, low}, {M - 1, 1 - low}};
}

absl::StatusOr<std::map<int, Rational>> Case3Pmf(int num_messages, int side_size) {
  const int K = num_messages;
  const int M = side_size;
  if (M < 3 || 2 * M < K + 1 || M > K - 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "case-3 law requires floor(K/2)+1 <= M <= K-1 and M >= 3, got M = ", M, ", K = ", K));
  }
  const Rational high = MakeRational(2 * (K - M), K);
  return std::map<int, Rational>{{2 * M - K - 1, 1 - high}, {2 * M - K, high}};
}

Rate Rate::FromDownload(long elements) {
  if (elements == 0) return Infinite();
  return Finite(MakeRational(1, elements));
}

absl::StatusOr<Rate> Capacity(Model model, int num_messages, int side_size) {
  PIRCSI_RETURN_IF_ERROR(ValidateInstance(model, num_messages, side_size));
  if (model == Model::kI) {
    return Rate::Finite(MakeRational(1, QuerySetCount(num_messages, side_size)));
  }
  if (side_size == 1) return Rate::Infinite();
  if (side_size == 2 || side_size == num_messages) return Rate::Finite(1);
  return Rate::Finite(MakeRational(1, 2));
}

}  // namespace pircsi
