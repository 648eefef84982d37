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

#ifndef PIRCSI_RANDOM_H_
#define PIRCSI_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pircsi/field.h"
#include "pircsi/rational.h"
#include "pircsi/rng.h"
#include "pircsi/types.h"

namespace pircsi {

// A finite law over {0, ..., size-1} with exact masses. Sampling uses the
// inverse CDF over integer weights scaled to a common denominator, so draws
// are exact whenever that denominator fits in 64 bits.
class DiscretePmf {
 public:
  DiscretePmf() = default;
  explicit DiscretePmf(std::vector<Rational> masses);

  const std::vector<Rational>& masses() const { return masses_; }
  size_t size() const { return masses_.size(); }

  size_t Sample(Rng& rng) const;

 private:
  std::vector<Rational> masses_;
  // Cumulative integer weights over a common denominator, when it fits.
  std::vector<uint64_t> cumulative_;
  uint64_t total_ = 0;
  std::vector<double> cumulative_double_;
};

// Every random decision a protocol makes while building a query goes through
// this interface. A seeded implementation draws the decisions; the exact
// auditor supplies an implementation that walks every branch instead.
//
// Index-set decisions (Choose, Subset, Partition) determine which sets are
// sent. Orderings (Permutation) and coefficients (Coefficient) only affect
// presentation and values, never which indices are grouped together.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  // Index drawn from `pmf`.
  virtual size_t Choose(const DiscretePmf& pmf) = 0;

  // Uniformly random k-subset of `pool`, returned in ascending order.
  virtual std::vector<MessageIndex> Subset(std::span<const MessageIndex> pool, size_t k) = 0;

  // Uniformly random partition of `pool` into blocks of `block_size`
  // (pool size must be a multiple of it). Blocks are returned in arbitrary
  // order, each sorted ascending.
  virtual std::vector<std::vector<MessageIndex>> Partition(std::span<const MessageIndex> pool,
                                                           size_t block_size) = 0;

  // Uniformly random permutation of {0, ..., n-1}.
  virtual std::vector<size_t> Permutation(size_t n) = 0;

  // Uniform element of the multiplicative group of GF(q), embedded in the
  // field of `params`, optionally excluding one base value.
  virtual FieldElement Coefficient(const FieldParamsPtr& params,
                                   std::optional<uint32_t> exclude) = 0;
};

class SeededSource final : public RandomSource {
 public:
  explicit SeededSource(Rng& rng) : rng_(rng) {}

  size_t Choose(const DiscretePmf& pmf) override { return pmf.Sample(rng_); }
  std::vector<MessageIndex> Subset(std::span<const MessageIndex> pool, size_t k) override;
  std::vector<std::vector<MessageIndex>> Partition(std::span<const MessageIndex> pool,
                                                   size_t block_size) override;
  std::vector<size_t> Permutation(size_t n) override;
  FieldElement Coefficient(const FieldParamsPtr& params,
                           std::optional<uint32_t> exclude) override;

 private:
  Rng& rng_;
};

// Uniform k-subset of [1, n] (ascending), by partial Fisher-Yates.
std::vector<MessageIndex> SampleSubset(Rng& rng, MessageIndex n, size_t k);

}  // namespace pircsi

#endif  // PIRCSI_RANDOM_H_
