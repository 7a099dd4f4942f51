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


#ifndef SILPAN_BLEND_H_
#define SILPAN_BLEND_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "silpan/grid.h"
#include "silpan/interpolate.h"

namespace silpan {

// Flattened per-instance attention: n_bases maps of native_res^2 values,
// basis-major.
using AttentionVector = std::vector<double>;

struct BlendParams {
  int n_bases = 4;
  int native_res = 14;
  int mask_res = 56;
  int samples_per_bin = kDefaultSamplesPerBin;
  // Pixels with probability >= threshold are in the binary mask.
  double mask_threshold = 0.5;
};

absl::Status ValidateBlendParams(const BlendParams& params);

struct InstanceMask {
  DenseGrid2 probs;  // image-sized, in [0, 1]
  BinaryMask binary;
  BBox box;
};

// Reshape -> bilinear upsample to out_res^2 -> softmax across bases at each
// pixel. Every output pixel's channel values sum to 1.
absl::StatusOr<DenseGrid3> AttentionScores(std::span<const double> attention,
                                           int n_bases, int native_res,
                                           int out_res);

// Element-wise product of matching channels summed over channels.
absl::StatusOr<DenseGrid2> BlendLogits(const DenseGrid3& scores,
                                       const DenseGrid3& crop);

// Full mask head for one instance:
//   RoiAlignCrop(bases, box) -> AttentionScores -> BlendLogits -> sigmoid
//   (at mask_res) -> PasteMask into the image -> threshold.
// `bases` is the image-wide basis stack with params.n_bases channels.
absl::StatusOr<InstanceMask> ComposeInstance(
    std::span<const double> attention, const DenseGrid3& bases,
    const BBox& box, int image_h, int image_w, const BlendParams& params);

double Sigmoid(double x);

}  // namespace silpan

#endif  // SILPAN_BLEND_H_
