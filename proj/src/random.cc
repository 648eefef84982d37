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

#include "pircsi/random.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace pircsi {
namespace {

template <typename T>
void Shuffle(std::vector<T>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.Below(i)]);
  }
}

}  // namespace

DiscretePmf::DiscretePmf(std::vector<Rational> masses) : masses_(std::move(masses)) {
  if (masses_.empty()) throw std::invalid_argument("empty pmf");
  BigInt common = 1;
  for (const Rational& p : masses_) {
    if (p < 0) throw std::invalid_argument("negative probability mass");
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), p.get_den().get_mpz_t());
  }
  BigInt running = 0;
  bool fits = true;
  for (const Rational& p : masses_) {
    running += p.get_num() * (common / p.get_den());
    if (!running.fits_ulong_p()) {
      fits = false;
      break;
    }
    cumulative_.push_back(running.get_ui());
  }
  if (fits && running > 0) {
    total_ = cumulative_.back();
  } else {
    cumulative_.clear();
    double acc = 0;
    for (const Rational& p : masses_) {
      acc += p.get_d();
      cumulative_double_.push_back(acc);
    }
  }
}

size_t DiscretePmf::Sample(Rng& rng) const {
  if (total_ > 0) {
    const uint64_t u = rng.Below(total_);
    return static_cast<size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                               cumulative_.begin());
  }
  const double u = rng.UnitDouble() * cumulative_double_.back();
  auto it = std::upper_bound(cumulative_double_.begin(), cumulative_double_.end(), u);
  size_t i = static_cast<size_t>(it - cumulative_double_.begin());
  if (i >= masses_.size()) i = masses_.size() - 1;
  while (masses_[i] == 0 && i > 0) --i;
  return i;
}

std::vector<MessageIndex> SeededSource::Subset(std::span<const MessageIndex> pool, size_t k) {
  if (k > pool.size()) throw std::invalid_argument("subset larger than pool");
  std::vector<MessageIndex> v(pool.begin(), pool.end());
  for (size_t i = 0; i < k; ++i) {
    std::swap(v[i], v[i + rng_.Below(v.size() - i)]);
  }
  v.resize(k);
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<std::vector<MessageIndex>> SeededSource::Partition(std::span<const MessageIndex> pool,
                                                               size_t block_size) {
  if (block_size == 0 || pool.size() % block_size != 0) {
    throw std::invalid_argument("pool size is not a multiple of the block size");
  }
  std::vector<MessageIndex> v(pool.begin(), pool.end());
  Shuffle(v, rng_);
  std::vector<std::vector<MessageIndex>> blocks;
  for (size_t i = 0; i < v.size(); i += block_size) {
    std::vector<MessageIndex> block(v.begin() + i, v.begin() + i + block_size);
    std::sort(block.begin(), block.end());
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<size_t> SeededSource::Permutation(size_t n) {
  std::vector<size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  Shuffle(p, rng_);
  return p;
}

FieldElement SeededSource::Coefficient(const FieldParamsPtr& params,
                                       std::optional<uint32_t> exclude) {
  const uint32_t q = params->q();
  if (!exclude || *exclude == 0 || *exclude >= q) {
    return FieldElement::FromBase(params, 1 + rng_.Below(q - 1));
  }
  // Uniform over the q - 2 nonzero values other than `exclude`.
  uint64_t v = 1 + rng_.Below(q - 2);
  if (v >= *exclude) ++v;
  return FieldElement::FromBase(params, v);
}

std::vector<MessageIndex> SampleSubset(Rng& rng, MessageIndex n, size_t k) {
  std::vector<MessageIndex> all(n);
  std::iota(all.begin(), all.end(), 1);
  SeededSource source(rng);
  return source.Subset(all, k);
}

}  // namespace pircsi
