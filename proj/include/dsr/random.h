// Copyright 2026 The DSR Toolkit Authors.
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

#ifndef DSR_RANDOM_H_
#define DSR_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace dsr {

// Mixes a base seed with a sequence of stream identifiers into a new,
// well-distributed seed (splitmix64 finalizer chain). Used to give every
// example, dialog and turn its own independent stream so results do not
// depend on processing order or thread count.
uint64_t DeriveSeed(uint64_t base, std::initializer_list<uint64_t> streams);

// Stable 64-bit FNV-1a hash of a string, for deriving seeds from ids.
uint64_t HashString(std::string_view text);

// Deterministic pseudo-random source. Wraps mt19937_64, whose output sequence
// is fixed by the standard, and implements bounded draws itself because the
// standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  uint64_t Uniform(uint64_t bound);

  // Uniform integer in [lo, hi] inclusive.
  int64_t UniformIn(int64_t lo, int64_t hi);

  // First `count` elements of a uniformly random permutation of [0, n).
  std::vector<size_t> SampleIndices(size_t n, size_t count);

  template <typename T>
  void Shuffle(std::vector<T> &items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = Uniform(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dsr

#endif  // DSR_RANDOM_H_
