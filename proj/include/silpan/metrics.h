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


#ifndef SILPAN_METRICS_H_
#define SILPAN_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "silpan/panoptic.h"

namespace silpan {

// Sum of IoU values kept in units of 2^-53. Every double in [0.5, 1] is an
// integer multiple of 2^-53, so adding matched IoUs (always > 0.5) is exact
// and the sum is associative and commutative.
class IouSum {
 public:
  void Add(double iou);
  IouSum& operator+=(const IouSum& other) {
    units_ += other.units_;
    return *this;
  }
  double value() const;
  bool operator==(const IouSum&) const = default;

 private:
  unsigned __int128 units_ = 0;
};

struct ClassStats {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  IouSum iou_sum;

  bool operator==(const ClassStats&) const = default;
};

// Per-category accumulators over a fixed registry; classes[i] belongs to
// category_ids[i]. A default-constructed PQStats is the reduction identity.
struct PQStats {
  std::vector<int> category_ids;
  std::vector<ClassStats> classes;

  static PQStats ForRegistry(const CategoryRegistry& registry);
  bool operator==(const PQStats&) const = default;
};

struct SegmentMatch {
  SegmentId pred_id = kVoidId;
  SegmentId gt_id = kVoidId;
  int category_id = 0;
  double iou = 0.0;

  bool operator==(const SegmentMatch&) const = default;
};

// Pairs (pred, gt) segments of the same category whose IoU exceeds 0.5.
// Pixels that are void in gt are left out of the union. Sorted by gt id.
absl::StatusOr<std::vector<SegmentMatch>> MatchSegments(
    const PanopticResult& pred, const PanopticResult& gt);

// TP/FP/FN accounting for one image. Unmatched predictions lying more than
// half on gt void are not counted as false positives.
absl::StatusOr<PQStats> ComputeImageStats(const PanopticResult& pred,
                                          const PanopticResult& gt,
                                          const CategoryRegistry& registry);

absl::StatusOr<PQStats> PqReduce(const PQStats& a, const PQStats& b);

struct ClassReport {
  int category_id = 0;
  bool is_thing = false;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double iou_sum = 0.0;
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
  // tp + fp + fn > 0; only these classes enter the averages.
  bool included = false;
};

struct PQReport {
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
  double pq_things = 0.0;
  double pq_stuff = 0.0;
  int num_classes = 0;
  int num_things = 0;
  int num_stuff = 0;
  std::vector<ClassReport> per_class;
};

// Per class: PQ = iou_sum / (tp + fp/2 + fn/2), SQ = iou_sum / tp,
// RQ = tp / (tp + fp/2 + fn/2). Overall values are unweighted means over the
// included classes (things / stuff subsets for pq_things / pq_stuff).
absl::StatusOr<PQReport> SummarizePq(const PQStats& stats,
                                     const CategoryRegistry& registry);

struct EvalPair {
  const PanopticResult* pred = nullptr;
  const PanopticResult* gt = nullptr;
};

absl::StatusOr<PQReport> PqEvaluate(std::span<const EvalPair> pairs,
                                    const CategoryRegistry& registry);

}  // namespace silpan

#endif  // SILPAN_METRICS_H_
