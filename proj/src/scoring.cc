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


#include "silpan/scoring.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "silpan/panoptic.h"
#include "silpan/silhouette.h"
#include "silpan/status_macros.h"

namespace silpan {
namespace {

absl::Status CheckUnit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must be in [0, 1], got ", v));
  }
  return absl::OkStatus();
}

absl::StatusOr<BinaryMask> MaskJunctions(const BinaryMask& mask) {
  constexpr SegmentId kInside = 1;
  constexpr SegmentId kOutside = 2;
  PanopticLabelMap map(mask.height(), mask.width());
  auto ids = map.mutable_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    ids[i] = mask.Get(i) ? kInside : kOutside;
  }
  const SegmentTable table = {{kInside, {0, true, 0}},
                              {kOutside, {0, false, 0}}};
  return ExtractSilhouette(map, table, SilhouetteTarget::kAll);
}

}  // namespace

double BoxIou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double ih = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.Area() + b.Area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

absl::StatusOr<std::vector<int>> Nms(std::span<const Detection> detections,
                                     double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("nms iou threshold must be in (0, 1), got ",
                     iou_threshold));
  }
  for (const auto& det : detections) {
    SILPAN_RETURN_IF_ERROR(CheckUnit(det.fcos_score, "fcos score"));
    SILPAN_RETURN_IF_ERROR(ValidateBox(det.box));
  }
  std::vector<int> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](int a, int b) {
    return detections[a].fcos_score > detections[b].fcos_score;
  });
  // Suppression only ever happens within a class, so each class is an
  // independent greedy pass over its own members.
  std::map<int, std::vector<int>> kept_by_class;
  std::vector<int> kept;
  for (int idx : order) {
    auto& same_class = kept_by_class[detections[idx].class_id];
    const bool suppressed = std::ranges::any_of(same_class, [&](int k) {
      return BoxIou(detections[idx].box, detections[k].box) > iou_threshold;
    });
    if (suppressed) continue;
    same_class.push_back(idx);
    kept.push_back(idx);
  }
  return kept;
}

absl::StatusOr<double> MaskIou(const BinaryMask& a, const BinaryMask& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "mask dimension mismatch: ", a.height(), "x", a.width(), " vs ",
        b.height(), "x", b.width()));
  }
  std::int64_t inter = 0;
  std::int64_t uni = 0;
  auto ab = a.bits();
  auto bb = b.bits();
  for (std::size_t i = 0; i < ab.size(); ++i) {
    inter += ab[i] & bb[i];
    uni += ab[i] | bb[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

absl::StatusOr<ConfidenceTargets> ComputeConfidenceTargets(
    const InstanceMask& pred, const BinaryMask& gt_mask, double eps) {
  ConfidenceTargets targets;
  SILPAN_ASSIGN_OR_RETURN(targets.iou, MaskIou(pred.binary, gt_mask));
  SILPAN_ASSIGN_OR_RETURN(const BinaryMask pred_rim,
                          MaskJunctions(pred.binary));
  SILPAN_ASSIGN_OR_RETURN(const BinaryMask gt_rim, MaskJunctions(gt_mask));
  SILPAN_ASSIGN_OR_RETURN(targets.silhouette,
                          DiceScore(MaskToGrid(pred_rim), gt_rim, eps));
  return targets;
}

absl::StatusOr<double> MaskScore(double fcos, double iou, double alpha) {
  SILPAN_RETURN_IF_ERROR(CheckUnit(fcos, "fcos score"));
  SILPAN_RETURN_IF_ERROR(CheckUnit(iou, "iou score"));
  SILPAN_RETURN_IF_ERROR(CheckUnit(alpha, "alpha"));
  return alpha * fcos + (1.0 - alpha) * iou;
}

absl::StatusOr<ScoredInstance> MakeScoredInstance(Detection detection,
                                                  InstanceMask mask,
                                                  double iou_score,
                                                  double silhouette_score,
                                                  double alpha) {
  ScoredInstance inst;
  SILPAN_ASSIGN_OR_RETURN(inst.mask_score,
                          MaskScore(detection.fcos_score, iou_score, alpha));
  inst.detection = std::move(detection);
  inst.mask = std::move(mask);
  inst.iou_score = iou_score;
  inst.silhouette_score = silhouette_score;
  return inst;
}

PixelRect MaskExtent(const BinaryMask& mask) {
  PixelRect r{mask.width(), mask.height(), 0, 0};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.Get(y, x)) continue;
      r.x0 = std::min(r.x0, x);
      r.y0 = std::min(r.y0, y);
      r.x1 = std::max(r.x1, x + 1);
      r.y1 = std::max(r.y1, y + 1);
    }
  }
  return r.empty() ? PixelRect{} : r;
}

absl::StatusOr<std::vector<int>> RankInstances(
    std::span<const ScoredInstance> instances, double alpha, double dup_iou) {
  std::vector<const ScoredInstance*> ptrs;
  ptrs.reserve(instances.size());
  for (const auto& inst : instances) ptrs.push_back(&inst);
  return RankInstances(ptrs, alpha, dup_iou);
}

absl::StatusOr<std::vector<int>> RankInstances(
    std::span<const ScoredInstance* const> instances, double alpha,
    double dup_iou) {
  if (!(dup_iou > 0.0 && dup_iou <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("dup_iou must be in (0, 1], got ", dup_iou));
  }
  const int n = static_cast<int>(instances.size());
  std::vector<double> score(n);
  for (int i = 0; i < n; ++i) {
    SILPAN_ASSIGN_OR_RETURN(score[i],
                            MaskScore(instances[i]->detection.fcos_score,
                                      instances[i]->iou_score, alpha));
  }
  auto before = [&](int a, int b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  };

  // Edges from the better silhouette to the worse one. They follow a strict
  // total order, so the constraint graph is acyclic.
  std::vector<PixelRect> extent(n);
  for (int i = 0; i < n; ++i) extent[i] = MaskExtent(instances[i]->mask.binary);
  std::vector<std::vector<int>> successors(n);
  std::vector<int> indegree(n, 0);
  for (int a = 0; a < n; ++a) {
    const auto& ma = instances[a]->mask;
    for (int b = a + 1; b < n; ++b) {
      const auto& mb = instances[b]->mask;
      if (instances[a]->detection.class_id !=
          instances[b]->detection.class_id) {
        continue;
      }
      // Masks with disjoint extents have IoU 0.
      if (extent[a].Intersect(extent[b]).empty()) continue;
      SILPAN_ASSIGN_OR_RETURN(const double iou,
                              MaskIou(ma.binary, mb.binary));
      if (iou < dup_iou) continue;
      const double sa = instances[a]->silhouette_score;
      const double sb = instances[b]->silhouette_score;
      const bool a_first = sa != sb ? sa > sb : before(a, b);
      const int from = a_first ? a : b;
      const int to = a_first ? b : a;
      successors[from].push_back(to);
      ++indegree[to];
    }
  }

  std::vector<int> ready;
  for (int i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    auto best = std::ranges::min_element(ready, before);
    const int next = *best;
    ready.erase(best);
    order.push_back(next);
    for (int succ : successors[next]) {
      if (--indegree[succ] == 0) ready.push_back(succ);
    }
  }
  return order;
}

}  // namespace silpan
