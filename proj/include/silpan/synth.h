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


#ifndef SILPAN_SYNTH_H_
#define SILPAN_SYNTH_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "silpan/blend.h"
#include "silpan/grid.h"
#include "silpan/panoptic.h"
#include "silpan/scoring.h"
#include "silpan/silhouette.h"

namespace silpan {

enum class ShapeFamily { kRectangles, kEllipses, kMixed };

absl::StatusOr<ShapeFamily> ParseShapeFamily(std::string_view name);
std::string_view ShapeFamilyName(ShapeFamily family);

struct SceneSpec {
  std::uint64_t seed = 0;
  int height = 128;
  int width = 128;
  int min_instances = 2;
  int max_instances = 6;
  ShapeFamily shapes = ShapeFamily::kMixed;
  int stuff_regions = 3;
  int thing_classes = 3;
  int stuff_classes = 3;

  // Noise on the simulated predictions. All zero reproduces the ground
  // truth exactly.
  double box_jitter = 0.0;      // px, uniform in [-j, j] per box coordinate
  double mask_flip_prob = 0.0;  // per basis value sign flip
  double score_noise = 0.0;     // uniform in [-s, s] added to fcos scores
  // Replace each fcos score by the instance's true IoU target.
  bool tie_fcos_to_iou = false;

  BlendParams blend;
  double dice_eps = kDefaultDiceEps;
  double alpha = kDefaultAlpha;
};

absl::Status ValidateSceneSpec(const SceneSpec& spec);

struct SyntheticScene {
  CategoryRegistry categories;
  PanopticResult gt;
  // Full (unoccluded) instance masks, front to back. Entry i is the
  // ground truth of detections[i].
  std::vector<BinaryMask> gt_instance_masks;
  std::vector<Detection> detections;
  DenseGrid3 bases;        // predicted bases, noise applied
  DenseGrid3 stuff_probs;  // stuff channels in StuffIds() order, then other
  std::vector<ScoredInstance> scored;  // detections composed and scored
};

// Deterministic in `spec`: equal specs give bit-identical scenes.
absl::StatusOr<SyntheticScene> SynthScene(const SceneSpec& spec);

}  // namespace silpan

#endif  // SILPAN_SYNTH_H_
