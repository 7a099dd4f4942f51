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


#include "silpan/synth.h"

#include <algorithm>
#include <cmath>
#include <optional>

#include "absl/strings/str_cat.h"
#include "silpan/rng.h"
#include "silpan/status_macros.h"

namespace silpan {
namespace {

// Scene layout. Ground-truth instance masks are defined as what the mask
// head produces from the clean bases, so zero noise reproduces them exactly:
// each instance owns one basis channel (+kBasisLogit inside its shape,
// -kBasisLogit elsewhere) and its attention strongly prefers that channel.
// Instances sharing a channel keep kChannelMargin px between their boxes so
// ROIAlign never sees a neighbour.
constexpr double kBasisLogit = 8.0;
constexpr double kAttentionLogit = 6.0;
constexpr int kChannelMargin = 2;
constexpr int kPlacementTries = 64;
constexpr double kMinBoxFrac = 0.15;
constexpr double kMaxBoxFrac = 0.35;
constexpr double kMaxSameClassBoxIou = 0.2;
constexpr std::int64_t kMinAmodalArea = 64;
constexpr double kMinVisibleFrac = 0.7;
constexpr double kMinStuffVisibleFrac = 0.5;
constexpr double kStuffConfidence = 0.7;
constexpr double kFrontScore = 0.9;
constexpr double kScoreSpread = 0.4;
constexpr std::uint64_t kNoiseStream = 0x9e3779b97f4a7c15ull;

struct Placement {
  BBox box;
  bool ellipse = false;
  int class_id = 0;
  int channel = 0;
};

bool InsideShape(const Placement& p, int y, int x) {
  const double px = x + 0.5;
  const double py = y + 0.5;
  if (px < p.box.x0 || px >= p.box.x1 || py < p.box.y0 || py >= p.box.y1) {
    return false;
  }
  if (!p.ellipse) return true;
  const double rx = 0.5 * p.box.width();
  const double ry = 0.5 * p.box.height();
  const double dx = (px - (p.box.x0 + rx)) / rx;
  const double dy = (py - (p.box.y0 + ry)) / ry;
  return dx * dx + dy * dy <= 1.0;
}

void PaintShape(const Placement& p, double value, DenseGrid3& bases) {
  const PixelRect r = RasterizeBox(p.box).Intersect(
      PixelRect{0, 0, bases.width(), bases.height()});
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) {
      if (InsideShape(p, y, x)) bases.at(p.channel, y, x) = value;
    }
  }
}

PixelRect Expanded(const BBox& box, int margin) {
  PixelRect r = RasterizeBox(box);
  return PixelRect{r.x0 - margin, r.y0 - margin, r.x1 + margin,
                   r.y1 + margin};
}

AttentionVector ChannelAttention(int channel, const BlendParams& blend) {
  const std::size_t plane =
      static_cast<std::size_t>(blend.native_res) * blend.native_res;
  AttentionVector att(plane * blend.n_bases, 0.0);
  std::fill_n(att.begin() + channel * plane, plane, kAttentionLogit);
  return att;
}

// Row boundaries of the stuff bands; band b covers [rows[b], rows[b+1]).
std::vector<int> BandRows(Rng& rng, int height, int bands) {
  std::vector<double> weights(bands);
  for (double& w : weights) w = 0.5 + rng.Uniform();
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<int> rows = {0};
  double acc = 0.0;
  for (int b = 0; b + 1 < bands; ++b) {
    acc += weights[b];
    rows.push_back(static_cast<int>(std::floor(height * acc / total)));
  }
  rows.push_back(height);
  return rows;
}

// Composes every placed instance from `clean` and checks the layout rules
// in painter's order. Returns the amodal masks, or nullopt if a rule fails.
absl::StatusOr<std::optional<std::vector<BinaryMask>>> CheckLayout(
    const std::vector<Placement>& placed, const DenseGrid3& clean,
    const std::vector<int>& row_band,
    const std::vector<std::int64_t>& band_area, const SceneSpec& spec) {
  const int h = clean.height();
  const int w = clean.width();
  std::vector<BinaryMask> masks;
  BinaryMask covered(h, w);
  std::vector<std::int64_t> band_covered(band_area.size(), 0);
  for (const Placement& p : placed) {
    SILPAN_ASSIGN_OR_RETURN(
        InstanceMask amodal,
        ComposeInstance(ChannelAttention(p.channel, spec.blend), clean, p.box,
                        h, w, spec.blend));
    std::int64_t area = 0;
    std::int64_t visible = 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!amodal.binary.Get(y, x)) continue;
        ++area;
        if (!covered.Get(y, x)) {
          ++visible;
          ++band_covered[row_band[y]];
          covered.Set(y, x);
        }
      }
    }
    if (area < kMinAmodalArea ||
        static_cast<double>(visible) < kMinVisibleFrac * area) {
      return std::nullopt;
    }
    masks.push_back(std::move(amodal.binary));
  }
  for (std::size_t b = 0; b < band_area.size(); ++b) {
    if (static_cast<double>(band_covered[b]) >
        (1.0 - kMinStuffVisibleFrac) * band_area[b]) {
      return std::nullopt;
    }
  }
  return masks;
}

}  // namespace

absl::StatusOr<ShapeFamily> ParseShapeFamily(std::string_view name) {
  if (name == "rectangles") return ShapeFamily::kRectangles;
  if (name == "ellipses") return ShapeFamily::kEllipses;
  if (name == "mixed") return ShapeFamily::kMixed;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown shape family '", std::string(name),
                   "' (expected rectangles, ellipses or mixed)"));
}

std::string_view ShapeFamilyName(ShapeFamily family) {
  switch (family) {
    case ShapeFamily::kRectangles:
      return "rectangles";
    case ShapeFamily::kEllipses:
      return "ellipses";
    case ShapeFamily::kMixed:
      return "mixed";
  }
  return "mixed";
}

absl::Status ValidateSceneSpec(const SceneSpec& spec) {
  if (spec.height < 16 || spec.width < 16) {
    return absl::InvalidArgumentError(absl::StrCat(
        "scene must be at least 16x16, got ", spec.height, "x", spec.width));
  }
  if (spec.min_instances < 0 || spec.max_instances < spec.min_instances) {
    return absl::InvalidArgumentError("need 0 <= min_instances <= max_instances");
  }
  if (spec.stuff_regions < 1 || spec.stuff_regions > spec.height / 4) {
    return absl::InvalidArgumentError("stuff_regions out of range");
  }
  if (spec.thing_classes < 1 || spec.stuff_classes < 1) {
    return absl::InvalidArgumentError("need at least one thing and one stuff class");
  }
  if (!(spec.box_jitter >= 0.0) || !(spec.score_noise >= 0.0) ||
      !(spec.mask_flip_prob >= 0.0 && spec.mask_flip_prob <= 1.0)) {
    return absl::InvalidArgumentError("noise parameters out of range");
  }
  if (!(spec.dice_eps > 0.0) || !(spec.alpha >= 0.0 && spec.alpha <= 1.0)) {
    return absl::InvalidArgumentError("dice_eps or alpha out of range");
  }
  return ValidateBlendParams(spec.blend);
}

absl::StatusOr<SyntheticScene> SynthScene(const SceneSpec& spec) {
  SILPAN_RETURN_IF_ERROR(ValidateSceneSpec(spec));
  const int h = spec.height;
  const int w = spec.width;
  const BlendParams& blend = spec.blend;
  Rng rng(spec.seed);
  SyntheticScene scene;

  std::vector<Category> cats;
  for (int t = 0; t < spec.thing_classes; ++t) {
    cats.push_back({t + 1, absl::StrCat("thing_", t + 1), true});
  }
  for (int s = 0; s < spec.stuff_classes; ++s) {
    const int id = spec.thing_classes + s + 1;
    cats.push_back({id, absl::StrCat("stuff_", s + 1), false});
  }
  SILPAN_ASSIGN_OR_RETURN(scene.categories,
                          CategoryRegistry::Create(std::move(cats)));
  const std::vector<int> stuff_ids = scene.categories.StuffIds();
  const int n_stuff = static_cast<int>(stuff_ids.size());

  // Stuff bands.
  const std::vector<int> rows = BandRows(rng, h, spec.stuff_regions);
  std::vector<int> band_channel(spec.stuff_regions);
  for (int& c : band_channel) c = rng.UniformInt(0, n_stuff - 1);
  std::vector<int> row_band(h);
  std::vector<std::int64_t> band_area(spec.stuff_regions);
  for (int b = 0; b < spec.stuff_regions; ++b) {
    for (int y = rows[b]; y < rows[b + 1]; ++y) row_band[y] = b;
    band_area[b] = static_cast<std::int64_t>(rows[b + 1] - rows[b]) * w;
  }

  // Instances, front to back.
  DenseGrid3 clean(blend.n_bases, h, w, -kBasisLogit);
  std::vector<Placement> placed;
  const int target = rng.UniformInt(spec.min_instances, spec.max_instances);
  for (int k = 0; k < target; ++k) {
    for (int attempt = 0; attempt < kPlacementTries; ++attempt) {
      Placement p;
      const double bw = rng.Uniform(kMinBoxFrac, kMaxBoxFrac) * w;
      const double bh = rng.Uniform(kMinBoxFrac, kMaxBoxFrac) * h;
      const double x0 = rng.Uniform(1.0, w - 1.0 - bw);
      const double y0 = rng.Uniform(1.0, h - 1.0 - bh);
      p.box = BBox{x0, y0, x0 + bw, y0 + bh};
      p.ellipse = spec.shapes == ShapeFamily::kEllipses ||
                  (spec.shapes == ShapeFamily::kMixed && rng.Bernoulli(0.5));
      p.class_id = rng.UniformInt(1, spec.thing_classes);

      bool ok = std::ranges::none_of(placed, [&](const Placement& q) {
        return q.class_id == p.class_id &&
               BoxIou(q.box, p.box) > kMaxSameClassBoxIou;
      });
      if (!ok) continue;
      std::vector<bool> used(blend.n_bases, false);
      const PixelRect mine = Expanded(p.box, kChannelMargin);
      for (const auto& q : placed) {
        if (!mine.Intersect(Expanded(q.box, kChannelMargin)).empty()) {
          used[q.channel] = true;
        }
      }
      auto free_it = std::ranges::find(used, false);
      if (free_it == used.end()) continue;
      p.channel = static_cast<int>(free_it - used.begin());

      PaintShape(p, kBasisLogit, clean);
      placed.push_back(p);
      SILPAN_ASSIGN_OR_RETURN(
          std::optional<std::vector<BinaryMask>> masks,
          CheckLayout(placed, clean, row_band, band_area, spec));
      if (!masks.has_value()) {
        placed.pop_back();
        PaintShape(p, -kBasisLogit, clean);
        continue;
      }
      scene.gt_instance_masks = std::move(*masks);
      break;
    }
  }
  const int n = static_cast<int>(placed.size());

  // Ground truth by painter's order: front instances first, stuff below.
  scene.gt.map = PanopticLabelMap(h, w);
  auto ids = scene.gt.map.mutable_ids();
  for (int i = 0; i < n; ++i) {
    const SegmentId id = static_cast<SegmentId>(i + 1);
    std::int64_t area = 0;
    auto bits = scene.gt_instance_masks[i].bits();
    for (std::size_t p = 0; p < ids.size(); ++p) {
      if (bits[p] && ids[p] == kVoidId) {
        ids[p] = id;
        ++area;
      }
    }
    scene.gt.table[id] = SegmentInfo{placed[i].class_id, true, area};
  }
  std::vector<std::int64_t> stuff_area(n_stuff, 0);
  std::vector<int> pixel_channel(ids.size(), -1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      if (ids[p] != kVoidId) continue;
      pixel_channel[p] = band_channel[row_band[y]];
      ++stuff_area[pixel_channel[p]];
    }
  }
  std::vector<SegmentId> channel_id(n_stuff, kVoidId);
  SegmentId next_id = static_cast<SegmentId>(n + 1);
  for (int c = 0; c < n_stuff; ++c) {
    if (stuff_area[c] == 0) continue;
    channel_id[c] = next_id;
    scene.gt.table[next_id++] = SegmentInfo{stuff_ids[c], false, stuff_area[c]};
  }
  for (std::size_t p = 0; p < ids.size(); ++p) {
    if (pixel_channel[p] >= 0) ids[p] = channel_id[pixel_channel[p]];
  }

  // Stuff probabilities: the visible gt class (or "other" under things)
  // gets kStuffConfidence, the rest share the remainder.
  scene.stuff_probs = DenseGrid3(n_stuff + 1, h, w,
                                 (1.0 - kStuffConfidence) / n_stuff);
  for (std::size_t p = 0; p < ids.size(); ++p) {
    const int c = pixel_channel[p] >= 0 ? pixel_channel[p] : n_stuff;
    scene.stuff_probs.mutable_channel(c)[p] = kStuffConfidence;
  }

  // Simulated predictions.
  Rng noise(spec.seed ^ kNoiseStream);
  scene.bases = clean;
  if (spec.mask_flip_prob > 0.0) {
    for (double& v : scene.bases.mutable_data()) {
      if (noise.Bernoulli(spec.mask_flip_prob)) v = -v;
    }
  }
  for (int i = 0; i < n; ++i) {
    Detection det;
    det.box = placed[i].box;
    if (spec.box_jitter > 0.0) {
      BBox j = det.box;
      j.x0 += noise.Uniform(-spec.box_jitter, spec.box_jitter);
      j.y0 += noise.Uniform(-spec.box_jitter, spec.box_jitter);
      j.x1 += noise.Uniform(-spec.box_jitter, spec.box_jitter);
      j.y1 += noise.Uniform(-spec.box_jitter, spec.box_jitter);
      if (j.x1 - j.x0 >= 1.0 && j.y1 - j.y0 >= 1.0) det.box = j;
    }
    det.class_id = placed[i].class_id;
    double fcos = kFrontScore - kScoreSpread * i / std::max(n - 1, 1);
    if (spec.score_noise > 0.0) {
      fcos += noise.Uniform(-spec.score_noise, spec.score_noise);
    }
    det.fcos_score = std::clamp(fcos, 0.0, 1.0);
    det.attention = ChannelAttention(placed[i].channel, blend);

    SILPAN_ASSIGN_OR_RETURN(
        InstanceMask mask,
        ComposeInstance(det.attention, scene.bases, det.box, h, w, blend));
    SILPAN_ASSIGN_OR_RETURN(
        const ConfidenceTargets targets,
        ComputeConfidenceTargets(mask, scene.gt_instance_masks[i],
                                 spec.dice_eps));
    if (spec.tie_fcos_to_iou) det.fcos_score = targets.iou;
    scene.detections.push_back(det);
    SILPAN_ASSIGN_OR_RETURN(
        ScoredInstance inst,
        MakeScoredInstance(std::move(det), std::move(mask), targets.iou,
                           targets.silhouette, spec.alpha));
    scene.scored.push_back(std::move(inst));
  }
  return scene;
}

}  // namespace silpan
