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


#ifndef SILPAN_GRADCHECK_H_
#define SILPAN_GRADCHECK_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace silpan {

inline constexpr double kFiniteDifferenceStep = 1e-5;
inline constexpr double kGradientTolerance = 1e-4;

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h for every i.
absl::StatusOr<std::vector<double>> CentralDifferences(
    const std::function<absl::StatusOr<double>(std::span<const double>)>& f,
    std::span<const double> x, double h = kFiniteDifferenceStep);

// max_i |a_i - n_i| / max(|a_i|, |n_i|, 1e-6).
double MaxRelativeError(std::span<const double> analytic,
                        std::span<const double> numeric);

struct GradSuiteResult {
  std::string name;
  int instances = 0;
  double max_rel_error = 0.0;
  bool passed = false;
};

// Dice, soft-IoU and pixel cross-entropy gradients against central
// differences on `instances` seeded random 8x8 problems each.
absl::StatusOr<std::vector<GradSuiteResult>> RunGradientSuites(
    int instances, std::uint64_t seed,
    double tolerance = kGradientTolerance);

}  // namespace silpan

#endif  // SILPAN_GRADCHECK_H_
