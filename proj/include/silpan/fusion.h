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


#ifndef SILPAN_FUSION_H_
#define SILPAN_FUSION_H_

#include <cstdint>
#include <span>

#include "absl/status/statusor.h"
#include "silpan/grid.h"
#include "silpan/panoptic.h"
#include "silpan/scoring.h"

namespace silpan {

struct FusionParams {
  double score_min = 0.4;
  double keep_frac = 0.5;
  std::int64_t min_instance_area = 16;
  // Stated for a 640x480 image; smaller images scale it by their area.
  std::int64_t min_stuff_area = 4096;
  double alpha = kDefaultAlpha;
  double dup_iou = kDefaultDupIou;

  std::int64_t EffectiveMinStuffArea(int height, int width) const;
};

absl::Status ValidateFusionParams(const FusionParams& params);

// Greedy panoptic assembly.
//
//  1. Instances with mask score < score_min are dropped.
//  2. The rest are ordered by RankInstances.
//  3. Each instance in turn claims the still-unassigned pixels of its binary
//     mask. If it would claim fewer than keep_frac of its mask, or fewer than
//     min_instance_area pixels, it is discarded and claims nothing.
//  4. Remaining pixels take the argmax over all stuff_probs channels (ties to
//     the lower channel). The last channel is the "other" (thing) class;
//     pixels whose argmax lands there become void. Channel k < N_stuff maps
//     to stuff_category_ids[k]; each category forms one segment, voided if
//     smaller than the effective min_stuff_area.
//
// Thing segments get ids 1..K in rank order, stuff segments follow in
// stuff channel order.
absl::StatusOr<PanopticResult> FusePanoptic(
    std::span<const ScoredInstance> instances, const DenseGrid3& stuff_probs,
    std::span<const int> stuff_category_ids, const FusionParams& params);

// True iff every pixel id is void or in the table and table areas equal the
// pixel counts.
bool FuseRoundtripCheck(const PanopticResult& result);

}  // namespace silpan

#endif  // SILPAN_FUSION_H_
