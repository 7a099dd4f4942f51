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


#include "silpan/metrics.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "silpan/status_macros.h"

namespace silpan {
namespace {

constexpr int kIouFractionBits = 53;

std::uint64_t PairKey(SegmentId pred, SegmentId gt) {
  return (static_cast<std::uint64_t>(pred) << 32) | gt;
}

struct Overlaps {
  // (pred, gt) -> intersection pixel count, gt non-void only.
  std::unordered_map<std::uint64_t, std::int64_t> intersections;
  // pred id -> pixels lying on gt void.
  std::unordered_map<SegmentId, std::int64_t> pred_on_void;
};

Overlaps CountOverlaps(const PanopticLabelMap& pred,
                       const PanopticLabelMap& gt) {
  Overlaps o;
  auto p = pred.ids();
  auto g = gt.ids();
  std::size_t i = 0;
  while (i < p.size()) {
    const SegmentId pid = p[i];
    const SegmentId gid = g[i];
    std::size_t j = i + 1;
    while (j < p.size() && p[j] == pid && g[j] == gid) ++j;
    const auto run = static_cast<std::int64_t>(j - i);
    if (pid != kVoidId) {
      if (gid == kVoidId) {
        o.pred_on_void[pid] += run;
      } else {
        o.intersections[PairKey(pid, gid)] += run;
      }
    }
    i = j;
  }
  return o;
}

absl::Status CheckPair(const PanopticResult& pred, const PanopticResult& gt) {
  if (pred.map.height() != gt.map.height() ||
      pred.map.width() != gt.map.width()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "prediction ", pred.map.height(), "x", pred.map.width(),
        " vs ground truth ", gt.map.height(), "x", gt.map.width()));
  }
  if (auto s = ValidatePanoptic(pred); !s.ok()) {
    return absl::Status(s.code(), absl::StrCat("prediction: ", s.message()));
  }
  if (auto s = ValidatePanoptic(gt); !s.ok()) {
    return absl::Status(s.code(), absl::StrCat("ground truth: ", s.message()));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<SegmentMatch>> MatchFromOverlaps(
    const PanopticResult& pred, const PanopticResult& gt, const Overlaps& o) {
  std::vector<SegmentMatch> matches;
  for (const auto& [key, inter] : o.intersections) {
    const auto pid = static_cast<SegmentId>(key >> 32);
    const auto gid = static_cast<SegmentId>(key & 0xffffffffu);
    const SegmentInfo& pi = pred.table.at(pid);
    const SegmentInfo& gi = gt.table.at(gid);
    if (pi.category_id != gi.category_id) continue;
    auto void_it = o.pred_on_void.find(pid);
    const std::int64_t on_void =
        void_it == o.pred_on_void.end() ? 0 : void_it->second;
    const std::int64_t uni = pi.area + gi.area - inter - on_void;
    const double iou = static_cast<double>(inter) / static_cast<double>(uni);
    if (iou > 0.5) matches.push_back({pid, gid, pi.category_id, iou});
  }
  std::ranges::sort(matches, {}, &SegmentMatch::gt_id);
  std::unordered_set<SegmentId> seen_pred;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    if ((i > 0 && matches[i].gt_id == matches[i - 1].gt_id) ||
        !seen_pred.insert(matches[i].pred_id).second) {
      return absl::InternalError("segment matched twice");
    }
  }
  return matches;
}

}  // namespace

void IouSum::Add(double iou) {
  units_ += static_cast<std::uint64_t>(
      std::llround(std::ldexp(iou, kIouFractionBits)));
}

double IouSum::value() const {
  return std::ldexp(static_cast<double>(units_), -kIouFractionBits);
}

PQStats PQStats::ForRegistry(const CategoryRegistry& registry) {
  PQStats stats;
  for (const auto& c : registry.categories()) {
    stats.category_ids.push_back(c.id);
  }
  stats.classes.resize(stats.category_ids.size());
  return stats;
}

absl::StatusOr<std::vector<SegmentMatch>> MatchSegments(
    const PanopticResult& pred, const PanopticResult& gt) {
  SILPAN_RETURN_IF_ERROR(CheckPair(pred, gt));
  return MatchFromOverlaps(pred, gt, CountOverlaps(pred.map, gt.map));
}

absl::StatusOr<PQStats> ComputeImageStats(const PanopticResult& pred,
                                          const PanopticResult& gt,
                                          const CategoryRegistry& registry) {
  SILPAN_RETURN_IF_ERROR(CheckPair(pred, gt));
  SILPAN_RETURN_IF_ERROR(CheckCategories(pred, registry));
  SILPAN_RETURN_IF_ERROR(CheckCategories(gt, registry));
  const Overlaps overlaps = CountOverlaps(pred.map, gt.map);
  SILPAN_ASSIGN_OR_RETURN(const auto matches,
                          MatchFromOverlaps(pred, gt, overlaps));

  PQStats stats = PQStats::ForRegistry(registry);
  auto slot = [&](int category_id) -> ClassStats& {
    return stats.classes[registry.IndexOf(category_id)];
  };
  std::unordered_set<SegmentId> matched_pred;
  std::unordered_set<SegmentId> matched_gt;
  for (const auto& m : matches) {
    ClassStats& s = slot(m.category_id);
    ++s.tp;
    s.iou_sum.Add(m.iou);
    matched_pred.insert(m.pred_id);
    matched_gt.insert(m.gt_id);
  }
  for (const auto& [gid, info] : gt.table) {
    if (info.area > 0 && !matched_gt.contains(gid)) ++slot(info.category_id).fn;
  }
  for (const auto& [pid, info] : pred.table) {
    if (info.area == 0 || matched_pred.contains(pid)) continue;
    auto void_it = overlaps.pred_on_void.find(pid);
    const std::int64_t on_void =
        void_it == overlaps.pred_on_void.end() ? 0 : void_it->second;
    if (2 * on_void > info.area) continue;
    ++slot(info.category_id).fp;
  }
  return stats;
}

absl::StatusOr<PQStats> PqReduce(const PQStats& a, const PQStats& b) {
  if (a.category_ids.empty()) return b;
  if (b.category_ids.empty()) return a;
  if (a.category_ids != b.category_ids) {
    return absl::InvalidArgumentError("PQ stats use different registries");
  }
  PQStats out = a;
  for (std::size_t i = 0; i < out.classes.size(); ++i) {
    out.classes[i].tp += b.classes[i].tp;
    out.classes[i].fp += b.classes[i].fp;
    out.classes[i].fn += b.classes[i].fn;
    out.classes[i].iou_sum += b.classes[i].iou_sum;
  }
  return out;
}

absl::StatusOr<PQReport> SummarizePq(const PQStats& stats,
                                     const CategoryRegistry& registry) {
  PQStats effective = stats;
  if (effective.category_ids.empty()) {
    effective = PQStats::ForRegistry(registry);
  }
  if (effective.category_ids != PQStats::ForRegistry(registry).category_ids) {
    return absl::InvalidArgumentError("PQ stats do not match the registry");
  }
  PQReport report;
  double pq_things = 0.0;
  double pq_stuff = 0.0;
  for (std::size_t i = 0; i < effective.classes.size(); ++i) {
    const ClassStats& s = effective.classes[i];
    ClassReport c;
    c.category_id = effective.category_ids[i];
    c.is_thing = registry.categories()[i].is_thing;
    c.tp = s.tp;
    c.fp = s.fp;
    c.fn = s.fn;
    c.iou_sum = s.iou_sum.value();
    c.included = s.tp + s.fp + s.fn > 0;
    if (c.included) {
      const double denom = static_cast<double>(s.tp) + 0.5 * s.fp + 0.5 * s.fn;
      c.pq = c.iou_sum / denom;
      c.rq = static_cast<double>(s.tp) / denom;
      c.sq = s.tp > 0 ? c.iou_sum / static_cast<double>(s.tp) : 0.0;
      report.pq += c.pq;
      report.sq += c.sq;
      report.rq += c.rq;
      ++report.num_classes;
      if (c.is_thing) {
        pq_things += c.pq;
        ++report.num_things;
      } else {
        pq_stuff += c.pq;
        ++report.num_stuff;
      }
    }
    report.per_class.push_back(c);
  }
  if (report.num_classes > 0) {
    report.pq /= report.num_classes;
    report.sq /= report.num_classes;
    report.rq /= report.num_classes;
  }
  if (report.num_things > 0) report.pq_things = pq_things / report.num_things;
  if (report.num_stuff > 0) report.pq_stuff = pq_stuff / report.num_stuff;
  return report;
}

absl::StatusOr<PQReport> PqEvaluate(std::span<const EvalPair> pairs,
                                    const CategoryRegistry& registry) {
  PQStats total = PQStats::ForRegistry(registry);
  for (const auto& pair : pairs) {
    if (pair.pred == nullptr || pair.gt == nullptr) {
      return absl::InvalidArgumentError("null panoptic result in eval pair");
    }
    SILPAN_ASSIGN_OR_RETURN(const PQStats image,
                            ComputeImageStats(*pair.pred, *pair.gt, registry));
    SILPAN_ASSIGN_OR_RETURN(total, PqReduce(total, image));
  }
  return SummarizePq(total, registry);
}

}  // namespace silpan
