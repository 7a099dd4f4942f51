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


#include "silpan/fusion.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/strings/str_cat.h"
#include "silpan/status_macros.h"

namespace silpan {
namespace {

constexpr double kReferenceArea = 640.0 * 480.0;

}  // namespace

std::int64_t FusionParams::EffectiveMinStuffArea(int height,
                                                 int width) const {
  const double scale =
      std::min(1.0, static_cast<double>(height) * width / kReferenceArea);
  return std::llround(static_cast<double>(min_stuff_area) * scale);
}

absl::Status ValidateFusionParams(const FusionParams& params) {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(params.score_min)) {
    return absl::InvalidArgumentError("score_min must be in [0, 1]");
  }
  if (!unit(params.keep_frac)) {
    return absl::InvalidArgumentError("keep_frac must be in [0, 1]");
  }
  if (!unit(params.alpha)) {
    return absl::InvalidArgumentError("alpha must be in [0, 1]");
  }
  if (!(params.dup_iou > 0.0 && params.dup_iou <= 1.0)) {
    return absl::InvalidArgumentError("dup_iou must be in (0, 1]");
  }
  if (params.min_instance_area < 0 || params.min_stuff_area < 0) {
    return absl::InvalidArgumentError("minimum areas must be >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<PanopticResult> FusePanoptic(
    std::span<const ScoredInstance> instances, const DenseGrid3& stuff_probs,
    std::span<const int> stuff_category_ids, const FusionParams& params) {
  SILPAN_RETURN_IF_ERROR(ValidateFusionParams(params));
  const int n_stuff = static_cast<int>(stuff_category_ids.size());
  if (stuff_probs.channels() != n_stuff + 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "stuff probabilities have ", stuff_probs.channels(),
        " channels, expected ", n_stuff + 1, " (stuff + other)"));
  }
  std::vector<int> sorted_ids(stuff_category_ids.begin(),
                              stuff_category_ids.end());
  std::ranges::sort(sorted_ids);
  if (std::ranges::adjacent_find(sorted_ids) != sorted_ids.end()) {
    return absl::InvalidArgumentError("stuff category ids must be distinct");
  }
  const int h = stuff_probs.height();
  const int w = stuff_probs.width();
  for (const auto& inst : instances) {
    if (inst.mask.binary.height() != h || inst.mask.binary.width() != w) {
      return absl::InvalidArgumentError(absl::StrCat(
          "instance mask ", inst.mask.binary.height(), "x",
          inst.mask.binary.width(), " does not match image ", h, "x", w));
    }
  }

  std::vector<const ScoredInstance*> admitted;
  for (const auto& inst : instances) {
    SILPAN_ASSIGN_OR_RETURN(const double score,
                            MaskScore(inst.detection.fcos_score,
                                      inst.iou_score, params.alpha));
    if (score >= params.score_min) admitted.push_back(&inst);
  }
  SILPAN_ASSIGN_OR_RETURN(const std::vector<int> order,
                          RankInstances(admitted, params.alpha,
                                        params.dup_iou));

  PanopticResult result;
  result.map = PanopticLabelMap(h, w);
  auto ids = result.map.mutable_ids();
  SegmentId next_id = 1;
  std::vector<std::size_t> claim;
  for (int rank_index : order) {
    const ScoredInstance& inst = *admitted[rank_index];
    auto bits = inst.mask.binary.bits();
    claim.clear();
    std::int64_t total = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (!bits[i]) continue;
      ++total;
      if (ids[i] == kVoidId) claim.push_back(i);
    }
    const auto claimed = static_cast<std::int64_t>(claim.size());
    if (total == 0 || claimed < params.min_instance_area ||
        static_cast<double>(claimed) <
            params.keep_frac * static_cast<double>(total)) {
      continue;
    }
    for (std::size_t i : claim) ids[i] = next_id;
    result.table[next_id] = SegmentInfo{inst.detection.class_id, true, claimed};
    ++next_id;
  }

  // Stuff pass: per-pixel argmax, then per-category area filter.
  std::vector<int> stuff_channel(ids.size(), -1);
  std::vector<std::int64_t> stuff_area(n_stuff, 0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] != kVoidId) continue;
    int best = 0;
    double best_p = stuff_probs.channel(0)[i];
    for (int c = 1; c <= n_stuff; ++c) {
      const double p = stuff_probs.channel(c)[i];
      if (p > best_p) {
        best_p = p;
        best = c;
      }
    }
    if (best == n_stuff) continue;  // "other" dominates
    stuff_channel[i] = best;
    ++stuff_area[best];
  }
  const std::int64_t min_stuff = params.EffectiveMinStuffArea(h, w);
  std::vector<SegmentId> channel_id(n_stuff, kVoidId);
  for (int c = 0; c < n_stuff; ++c) {
    if (stuff_area[c] == 0 || stuff_area[c] < min_stuff) continue;
    if (next_id > kMaxSegmentId) {
      return absl::ResourceExhaustedError("segment id space exhausted");
    }
    channel_id[c] = next_id;
    result.table[next_id] =
        SegmentInfo{stuff_category_ids[c], false, stuff_area[c]};
    ++next_id;
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (stuff_channel[i] >= 0) ids[i] = channel_id[stuff_channel[i]];
  }
  return result;
}

bool FuseRoundtripCheck(const PanopticResult& result) {
  if (result.map.size() !=
      static_cast<std::size_t>(result.map.height()) * result.map.width()) {
    return false;
  }
  return ValidatePanoptic(result).ok();
}

}  // namespace silpan
