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

#ifndef PIRCSI_PMF_H_
#define PIRCSI_PMF_H_

#include <map>
#include <string>
#include <utility>

#include "absl/status/statusor.h"
#include "pircsi/rational.h"
#include "pircsi/types.h"

namespace pircsi {

// Number of query sets the partitioning protocol downloads, ceil(K/(M+1)).
int QuerySetCount(int num_messages, int side_size);
// Number of indices that appear in two query sets, (M+1)n - K.
int DuplicateCount(int num_messages, int side_size);

// Key (s, r): s extra indices taken from the side-information support and
// r extra indices taken from outside both the support and the demand.
using ExtraCounts = std::pair<int, int>;

// Joint law of the extra-index counts used by the partitioning protocol,
// together with the intermediate quantities it is built from.
struct RpDistribution {
  int num_messages = 0;  // K
  int side_size = 0;     // M
  int set_count = 0;     // n
  int duplicates = 0;    // l

  // Nonzero masses only. Keys satisfy l-1 <= s+r <= l.
  std::map<ExtraCounts, Rational> table;
  Rational normalizer;                  // P
  std::map<int, Rational> alpha;        // r -> alpha_{n,r}, 0 <= r <= l
  std::map<int, Rational> partition;    // r -> P_{n,r},     0 <= r <= l

  Rational Mass(int s, int r) const;
};

// Requires 0 <= M < K. When l == 0 the law is the point mass at (0, 0).
absl::StatusOr<RpDistribution> ComputeRpDistribution(int num_messages, int side_size);

// Probability of one specific realisation of the sets after the demand set,
// given the extras. Requires 0 <= r <= l.
absl::StatusOr<Rational> PartitionProbability(int num_messages, int side_size, int r);

// The likelihood contribution
//   p(s,r) / (C(M,s) C(K-M-1,r) C(K-1,M)) * P_{n,r}
// defined for s, r >= 0 with s + r in {l-1, l}, s <= M and r <= K-M-1.
absl::StatusOr<Rational> FValue(int num_messages, int side_size, int s, int r);

struct IdentityReport {
  bool passed = true;
  // Number of index tuples compared.
  long long tuples_checked = 0;
  // Human-readable description of the first violation, if any.
  std::string counterexample;
};

// Checks, over every admissible tuple of (s, r) pairs:
//   f(a) + f(b) == f(c) + f(d)   for a, b, c, d on the line s+r = l-1,
//   f(a) + f(b) == f(c)          for a, b on s+r = l-1 and c on s+r = l,
//   f(a) == f(b)                 for a, b on s+r = l.
IdentityReport CheckFIdentities(int num_messages, int side_size);

// Two-point law of r used when 3 <= M <= K/2 (demand inside the support):
// r = M-2 with mass 2(M-1)/K, r = M-1 with the rest.
absl::StatusOr<std::map<int, Rational>> Case2Pmf(int num_messages, int side_size);

// Two-point law of s used when floor(K/2)+1 <= M <= K-1: s = 2M-K-1 with mass
// 1 - 2(K-M)/K, s = 2M-K with mass 2(K-M)/K.
absl::StatusOr<std::map<int, Rational>> Case3Pmf(int num_messages, int side_size);

// A download rate: either infinite (nothing downloaded) or an exact rational.
struct Rate {
  bool infinite = false;
  Rational value;

  static Rate Infinite() { return Rate{true, 0}; }
  static Rate Finite(Rational v) { return Rate{false, std::move(v)}; }
  // 1/elements, infinite for zero elements.
  static Rate FromDownload(long elements);

  std::string ToString() const { return infinite ? "inf" : pircsi::ToString(value); }
  friend bool operator==(const Rate& a, const Rate& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
};

// Model I: 1/ceil(K/(M+1)) for 0 <= M < K.
// Model II: infinite for M = 1, 1 for M in {2, K}, 1/2 for 3 <= M <= K-1.
absl::StatusOr<Rate> Capacity(Model model, int num_messages, int side_size);

// Validates (model, K, M) against the model's admissible side-information
// sizes: 0 <= M < K for model I, 1 <= M <= K for model II.
absl::Status ValidateInstance(Model model, int num_messages, int side_size);

}  // namespace pircsi

#endif  // PIRCSI_PMF_H_
