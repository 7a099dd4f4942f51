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


#ifndef SILPAN_LOSSES_H_
#define SILPAN_LOSSES_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "silpan/grid.h"

namespace silpan {

// 1 - sum(p*g) / (sum(p) + sum(g) - sum(p*g)). Both empty gives 0.
absl::StatusOr<double> SoftIouLoss(const DenseGrid2& p, const BinaryMask& g);
absl::StatusOr<DenseGrid2> SoftIouGrad(const DenseGrid2& p,
                                       const BinaryMask& g);

inline constexpr int kIgnoreLabel = -1;

// Per-pixel class index in [0, C) or kIgnoreLabel.
struct ClassLabels {
  int height = 0;
  int width = 0;
  std::vector<int> labels;
};

// Mean over non-ignored pixels of -log softmax(logits[:, y, x])[label].
// Zero when every pixel is ignored.
absl::StatusOr<double> PixelCrossEntropy(const DenseGrid3& logits,
                                         const ClassLabels& labels);
absl::StatusOr<DenseGrid3> PixelCrossEntropyGrad(const DenseGrid3& logits,
                                                 const ClassLabels& labels);

absl::StatusOr<double> Mse(std::span<const double> pred,
                           std::span<const double> target);

// Relative weights of the combined mask loss. No published values exist;
// all default to 1.
struct MaskLossWeights {
  double cross_entropy = 1.0;
  double soft_iou = 1.0;
  double silhouette = 1.0;
};

struct MaskLossTerms {
  double cross_entropy = 0.0;
  double soft_iou = 0.0;
  double silhouette = 0.0;
};

double CombineMaskLoss(const MaskLossTerms& terms,
                       const MaskLossWeights& weights);

}  // namespace silpan

#endif  // SILPAN_LOSSES_H_
