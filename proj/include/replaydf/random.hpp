// Copyright 2026 The replaydf-toolkit Authors
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

#ifndef REPLAYDF_RANDOM_HPP_
#define REPLAYDF_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace replaydf {

// std::mt19937_64 produces the same stream on every conforming platform, but
// the std distributions do not. Rng derives its variates from raw engine
// output so seeded runs are bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, bound).
  std::uint64_t index(std::uint64_t bound);

  // Standard normal via the Box-Muller transform.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Order-sensitive hash of a root seed and labels; used for per-cell and
// per-file sub-seeds so results do not depend on scheduling order.
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::string_view> parts);

}  // namespace replaydf

#endif  // REPLAYDF_RANDOM_HPP_
