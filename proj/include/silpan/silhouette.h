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


#ifndef SILPAN_SILHOUETTE_H_
#define SILPAN_SILHOUETTE_H_

#include "absl/status/statusor.h"
#include "silpan/grid.h"
#include "silpan/panoptic.h"

namespace silpan {

inline constexpr double kDefaultDiceEps = 1.0;

enum class SilhouetteTarget { kThings, kStuff, kAll };

struct SilhouettePair {
  BinaryMask things;
  BinaryMask stuff;
};

// Junction pixels of a panoptic label map.
//
// A labeled pixel is a silhouette pixel iff the 4-neighbour Laplacian
// [[0,1,0],[1,-4,1],[0,1,0]] of its own segment's indicator is nonzero there,
// i.e. iff some in-image 4-neighbour carries a different id (void included).
// Void pixels are never set and the image frame is not a junction. The
// result is one pixel thick on each side of a boundary.
//
// `target` keeps pixels whose own segment is a thing, stuff, or either.
absl::StatusOr<BinaryMask> ExtractSilhouette(const PanopticLabelMap& map,
                                             const SegmentTable& table,
                                             SilhouetteTarget target);

absl::StatusOr<SilhouettePair> ExtractSilhouettePair(
    const PanopticLabelMap& map, const SegmentTable& table);

// Smoothed Dice similarity (2*sum(p*g) + eps) / (sum(p^2) + sum(g^2) + eps).
// `p` must hold probabilities in [0, 1]; eps must be positive.
absl::StatusOr<double> DiceScore(const DenseGrid2& p, const BinaryMask& g,
                                 double eps = kDefaultDiceEps);

// 1 - DiceScore.
absl::StatusOr<double> SilhouetteLoss(const DenseGrid2& p,
                                      const BinaryMask& g,
                                      double eps = kDefaultDiceEps);

// d SilhouetteLoss / d p_i = (2 * p_i * score - 2 * g_i) / denominator.
absl::StatusOr<DenseGrid2> DiceGrad(const DenseGrid2& p, const BinaryMask& g,
                                    double eps = kDefaultDiceEps);

// Checks matching dimensions and p in [0, 1]. Shared with the other
// probability losses.
absl::Status CheckProbabilityInputs(const DenseGrid2& p, const BinaryMask& g);

}  // namespace silpan

#endif  // SILPAN_SILHOUETTE_H_
