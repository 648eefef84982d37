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

#ifndef PIRCSI_RNG_H_
#define PIRCSI_RNG_H_

#include <cstdint>
#include <random>

namespace pircsi {

// Seeded 64-bit generator used for every random draw in the library.
//
// Bounded draws use rejection sampling on raw engine output rather than
// std::uniform_int_distribution, whose algorithm is implementation-defined,
// so a seed reproduces the same transcript on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, bound). `bound` must be positive.
  uint64_t Below(uint64_t bound) {
    const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    uint64_t x;
    do {
      x = engine_();
    } while (x > limit);
    return x % bound;
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double UnitDouble() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Derives an independent child generator (e.g. one per worker thread).
  Rng Fork() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pircsi

#endif  // PIRCSI_RNG_H_
