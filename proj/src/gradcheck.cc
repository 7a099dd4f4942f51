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


#include "silpan/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "silpan/grid.h"
#include "silpan/losses.h"
#include "silpan/rng.h"
#include "silpan/silhouette.h"
#include "silpan/status_macros.h"

namespace silpan {
namespace {

constexpr int kSide = 8;
constexpr int kClasses = 3;

// Probabilities kept away from 0 and 1 so that +-h stays inside [0, 1].
DenseGrid2 RandomProbs(Rng& rng) {
  DenseGrid2 p(kSide, kSide);
  for (double& v : p.mutable_data()) v = rng.Uniform(0.05, 0.95);
  return p;
}

BinaryMask RandomMask(Rng& rng) {
  BinaryMask g(kSide, kSide);
  for (std::size_t i = 0; i < g.size(); ++i) g.Set(i, rng.Bernoulli(0.4));
  return g;
}

using GridLoss =
    std::function<absl::StatusOr<double>(const DenseGrid2&, const BinaryMask&)>;
using GridGrad = std::function<absl::StatusOr<DenseGrid2>(const DenseGrid2&,
                                                          const BinaryMask&)>;

absl::StatusOr<double> CheckGridLoss(Rng& rng, const GridLoss& loss,
                                     const GridGrad& grad) {
  const DenseGrid2 p = RandomProbs(rng);
  const BinaryMask g = RandomMask(rng);
  SILPAN_ASSIGN_OR_RETURN(const DenseGrid2 analytic, grad(p, g));
  auto f = [&](std::span<const double> x) -> absl::StatusOr<double> {
    SILPAN_ASSIGN_OR_RETURN(
        auto grid,
        DenseGrid2::FromData(kSide, kSide, {x.begin(), x.end()}));
    return loss(grid, g);
  };
  SILPAN_ASSIGN_OR_RETURN(const auto numeric, CentralDifferences(f, p.data()));
  return MaxRelativeError(analytic.data(), numeric);
}

absl::StatusOr<double> CheckCrossEntropy(Rng& rng) {
  DenseGrid3 logits(kClasses, kSide, kSide);
  for (double& v : logits.mutable_data()) v = rng.Uniform(-3.0, 3.0);
  ClassLabels labels{kSide, kSide, std::vector<int>(kSide * kSide)};
  for (int& l : labels.labels) {
    l = rng.Bernoulli(0.1) ? kIgnoreLabel : rng.UniformInt(0, kClasses - 1);
  }
  SILPAN_ASSIGN_OR_RETURN(const DenseGrid3 analytic,
                          PixelCrossEntropyGrad(logits, labels));
  auto f = [&](std::span<const double> x) -> absl::StatusOr<double> {
    SILPAN_ASSIGN_OR_RETURN(
        auto grid,
        DenseGrid3::FromData(kClasses, kSide, kSide, {x.begin(), x.end()}));
    return PixelCrossEntropy(grid, labels);
  };
  SILPAN_ASSIGN_OR_RETURN(const auto numeric,
                          CentralDifferences(f, logits.data()));
  return MaxRelativeError(analytic.data(), numeric);
}

}  // namespace

absl::StatusOr<std::vector<double>> CentralDifferences(
    const std::function<absl::StatusOr<double>(std::span<const double>)>& f,
    std::span<const double> x, double h) {
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    point[i] = x[i] + h;
    SILPAN_ASSIGN_OR_RETURN(const double plus, f(point));
    point[i] = x[i] - h;
    SILPAN_ASSIGN_OR_RETURN(const double minus, f(point));
    point[i] = x[i];
    out[i] = (plus - minus) / (2.0 * h);
  }
  return out;
}

double MaxRelativeError(std::span<const double> analytic,
                        std::span<const double> numeric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double scale =
        std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-6});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
  }
  return worst;
}

absl::StatusOr<std::vector<GradSuiteResult>> RunGradientSuites(
    int instances, std::uint64_t seed, double tolerance) {
  auto dice_loss = [](const DenseGrid2& p, const BinaryMask& g) {
    return SilhouetteLoss(p, g, kDefaultDiceEps);
  };
  auto dice_grad = [](const DenseGrid2& p, const BinaryMask& g) {
    return DiceGrad(p, g, kDefaultDiceEps);
  };
  std::vector<GradSuiteResult> results = {
      {"dice_grad", instances, 0.0, false},
      {"soft_iou_grad", instances, 0.0, false},
      {"cross_entropy_grad", instances, 0.0, false}};
  Rng rng(seed);
  for (int i = 0; i < instances; ++i) {
    SILPAN_ASSIGN_OR_RETURN(const double e0,
                            CheckGridLoss(rng, dice_loss, dice_grad));
    SILPAN_ASSIGN_OR_RETURN(const double e1,
                            CheckGridLoss(rng, SoftIouLoss, SoftIouGrad));
    SILPAN_ASSIGN_OR_RETURN(const double e2, CheckCrossEntropy(rng));
    results[0].max_rel_error = std::max(results[0].max_rel_error, e0);
    results[1].max_rel_error = std::max(results[1].max_rel_error, e1);
    results[2].max_rel_error = std::max(results[2].max_rel_error, e2);
  }
  for (auto& r : results) r.passed = r.max_rel_error < tolerance;
  return results;
}

}  // namespace silpan
