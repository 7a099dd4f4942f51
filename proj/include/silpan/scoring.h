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


#ifndef SILPAN_SCORING_H_
#define SILPAN_SCORING_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "silpan/blend.h"
#include "silpan/grid.h"

namespace silpan {

inline constexpr double kDefaultAlpha = 0.8;
inline constexpr double kDefaultNmsIou = 0.6;
inline constexpr double kDefaultDupIou = 0.5;

struct Detection {
  BBox box;
  int class_id = 0;
  double fcos_score = 0.0;  // combined detector confidence in [0, 1]
  AttentionVector attention;
};

struct ScoredInstance {
  Detection detection;
  InstanceMask mask;
  double iou_score = 0.0;
  double silhouette_score = 1.0;
  double mask_score = 0.0;
};

double BoxIou(const BBox& a, const BBox& b);

// Class-aware greedy NMS. Visits detections by descending fcos_score (ties by
// lower index), keeps each one not overlapping an already-kept detection of
// the same class by IoU > iou_threshold. Returns kept indices in visit order.
absl::StatusOr<std::vector<int>> Nms(std::span<const Detection> detections,
                                     double iou_threshold);

// Bounding rectangle of the set pixels; empty for an empty mask.
PixelRect MaskExtent(const BinaryMask& mask);

// |a & b| / |a | b|, 0 when both are empty.
absl::StatusOr<double> MaskIou(const BinaryMask& a, const BinaryMask& b);

struct ConfidenceTargets {
  double iou = 0.0;
  double silhouette = 0.0;
};

// Regression targets of the confidence head. The silhouette target compares
// the mask/background junctions of the predicted and ground-truth masks.
absl::StatusOr<ConfidenceTargets> ComputeConfidenceTargets(
    const InstanceMask& pred, const BinaryMask& gt_mask, double eps);

// alpha * fcos + (1 - alpha) * iou; every argument must lie in [0, 1].
absl::StatusOr<double> MaskScore(double fcos, double iou, double alpha);

// Fills mask_score from the detection and iou_score.
absl::StatusOr<ScoredInstance> MakeScoredInstance(Detection detection,
                                                  InstanceMask mask,
                                                  double iou_score,
                                                  double silhouette_score,
                                                  double alpha);

// Final confidence order. Instances are ordered by descending mask score
// (recomputed with `alpha`), ties by lower index, subject to one override:
// for every same-class pair whose binary masks overlap with IoU >= dup_iou,
// the member with the higher silhouette score comes first. The result is
// the lexicographically smallest order (under the score order) satisfying
// all overrides.
absl::StatusOr<std::vector<int>> RankInstances(
    std::span<const ScoredInstance> instances, double alpha, double dup_iou);
// Same, over a selection of instances; indices refer to `instances`.
absl::StatusOr<std::vector<int>> RankInstances(
    std::span<const ScoredInstance* const> instances, double alpha,
    double dup_iou);

}  // namespace silpan

#endif  // SILPAN_SCORING_H_
