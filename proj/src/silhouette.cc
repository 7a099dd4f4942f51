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


#include "silpan/silhouette.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "silpan/status_macros.h"

namespace silpan {
namespace {

struct DiceTerms {
  double numerator;
  double denominator;
};

absl::StatusOr<DiceTerms> ComputeDiceTerms(const DenseGrid2& p,
                                           const BinaryMask& g, double eps) {
  SILPAN_RETURN_IF_ERROR(CheckProbabilityInputs(p, g));
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("dice eps must be positive, got ", eps));
  }
  double overlap = 0.0;
  double p_sq = 0.0;
  double g_sq = 0.0;
  auto pd = p.data();
  for (std::size_t i = 0; i < pd.size(); ++i) {
    p_sq += pd[i] * pd[i];
    if (g.Get(i)) {
      overlap += pd[i];
      g_sq += 1.0;
    }
  }
  return DiceTerms{2.0 * overlap + eps, p_sq + g_sq + eps};
}

}  // namespace

absl::Status CheckProbabilityInputs(const DenseGrid2& p, const BinaryMask& g) {
  if (p.height() != g.height() || p.width() != g.width()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: prediction ", p.height(), "x",
                     p.width(), " vs target ", g.height(), "x", g.width()));
  }
  for (double v : p.data()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("probability out of [0, 1]: ", v));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<BinaryMask> ExtractSilhouette(const PanopticLabelMap& map,
                                             const SegmentTable& table,
                                             SilhouetteTarget target) {
  SILPAN_RETURN_IF_ERROR(CheckIdsInTable(map, table));
  const int h = map.height();
  const int w = map.width();
  BinaryMask out(h, w);
  // Cache the last looked-up id; label maps are piecewise constant.
  SegmentId cached_id = kVoidId;
  bool cached_keep = false;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const SegmentId id = map.at(y, x);
      if (id == kVoidId) continue;
      const bool junction = (x > 0 && map.at(y, x - 1) != id) ||
                            (x + 1 < w && map.at(y, x + 1) != id) ||
                            (y > 0 && map.at(y - 1, x) != id) ||
                            (y + 1 < h && map.at(y + 1, x) != id);
      if (!junction) continue;
      if (id != cached_id) {
        const bool is_thing = table.at(id).is_thing;
        cached_keep = target == SilhouetteTarget::kAll ||
                      (target == SilhouetteTarget::kThings) == is_thing;
        cached_id = id;
      }
      if (cached_keep) out.Set(y, x);
    }
  }
  return out;
}

absl::StatusOr<SilhouettePair> ExtractSilhouettePair(
    const PanopticLabelMap& map, const SegmentTable& table) {
  SilhouettePair pair;
  SILPAN_ASSIGN_OR_RETURN(pair.things,
                          ExtractSilhouette(map, table,
                                            SilhouetteTarget::kThings));
  SILPAN_ASSIGN_OR_RETURN(pair.stuff,
                          ExtractSilhouette(map, table,
                                            SilhouetteTarget::kStuff));
  return pair;
}

absl::StatusOr<double> DiceScore(const DenseGrid2& p, const BinaryMask& g,
                                 double eps) {
  SILPAN_ASSIGN_OR_RETURN(const DiceTerms terms, ComputeDiceTerms(p, g, eps));
  return terms.numerator / terms.denominator;
}

absl::StatusOr<double> SilhouetteLoss(const DenseGrid2& p,
                                      const BinaryMask& g, double eps) {
  SILPAN_ASSIGN_OR_RETURN(const double score, DiceScore(p, g, eps));
  return 1.0 - score;
}

absl::StatusOr<DenseGrid2> DiceGrad(const DenseGrid2& p, const BinaryMask& g,
                                    double eps) {
  SILPAN_ASSIGN_OR_RETURN(const DiceTerms terms, ComputeDiceTerms(p, g, eps));
  const double score = terms.numerator / terms.denominator;
  DenseGrid2 grad(p.height(), p.width());
  auto pd = p.data();
  auto out = grad.mutable_data();
  for (std::size_t i = 0; i < pd.size(); ++i) {
    const double gi = g.Get(i) ? 1.0 : 0.0;
    out[i] = (2.0 * pd[i] * score - 2.0 * gi) / terms.denominator;
  }
  return grad;
}

}  // namespace silpan
