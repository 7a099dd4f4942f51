// Copyright 2026 The Silpan Authors.
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


#ifndef SILPAN_RNG_H_
#define SILPAN_RNG_H_

#include <cstdint>
#include <random>

namespace silpan {

// Portable seeded generator. std::mt19937_64 output is fixed by the C++
// standard; the mappings below are spelled out instead of using the
// implementation-defined std:: distributions, so a seed reproduces the same
// stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Top 53 bits scaled into [0, 1).
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Integer in [lo, hi] (inclusive) as lo + floor(Uniform() * (hi - lo + 1)).
  int UniformInt(int lo, int hi) {
    const double span = static_cast<double>(hi) - lo + 1.0;
    const int v = lo + static_cast<int>(Uniform() * span);
    return v > hi ? hi : v;
  }

  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace silpan

#endif  // SILPAN_RNG_H_
