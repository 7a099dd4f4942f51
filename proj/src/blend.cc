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


#include "silpan/blend.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "silpan/status_macros.h"

namespace silpan {

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

absl::Status ValidateBlendParams(const BlendParams& params) {
  if (params.n_bases < 1) {
    return absl::InvalidArgumentError("n_bases must be >= 1");
  }
  if (params.native_res < 1 || params.mask_res < params.native_res) {
    return absl::InvalidArgumentError(
        absl::StrCat("need 1 <= native_res <= mask_res, got ",
                     params.native_res, " and ", params.mask_res));
  }
  if (params.samples_per_bin < 1) {
    return absl::InvalidArgumentError("samples_per_bin must be >= 1");
  }
  if (!(params.mask_threshold > 0.0 && params.mask_threshold <= 1.0)) {
    return absl::InvalidArgumentError("mask_threshold must be in (0, 1]");
  }
  return absl::OkStatus();
}

absl::StatusOr<DenseGrid3> AttentionScores(std::span<const double> attention,
                                           int n_bases, int native_res,
                                           int out_res) {
  if (n_bases < 1 || native_res < 1 || out_res < native_res) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad attention shape: n_bases=", n_bases,
                     " native_res=", native_res, " out_res=", out_res));
  }
  const std::size_t expected =
      static_cast<std::size_t>(n_bases) * native_res * native_res;
  if (attention.size() != expected) {
    return absl::InvalidArgumentError(
        absl::StrCat("attention length ", attention.size(), " != ", n_bases,
                     " x ", native_res, "^2"));
  }
  SILPAN_ASSIGN_OR_RETURN(
      const DenseGrid3 maps,
      DenseGrid3::FromData(n_bases, native_res, native_res,
                           {attention.begin(), attention.end()}));
  SILPAN_ASSIGN_OR_RETURN(DenseGrid3 scores,
                          ResizeBilinear(maps, out_res, out_res));
  const std::size_t plane = scores.plane_size();
  for (std::size_t i = 0; i < plane; ++i) {
    double max_v = scores.channel(0)[i];
    for (int c = 1; c < n_bases; ++c) {
      max_v = std::max(max_v, scores.channel(c)[i]);
    }
    double sum = 0.0;
    for (int c = 0; c < n_bases; ++c) {
      double& v = scores.mutable_channel(c)[i];
      v = std::exp(v - max_v);
      sum += v;
    }
    for (int c = 0; c < n_bases; ++c) scores.mutable_channel(c)[i] /= sum;
  }
  return scores;
}

absl::StatusOr<DenseGrid2> BlendLogits(const DenseGrid3& scores,
                                       const DenseGrid3& crop) {
  if (scores.channels() != crop.channels() ||
      scores.height() != crop.height() || scores.width() != crop.width()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "blend shape mismatch: scores ", scores.channels(), "x",
        scores.height(), "x", scores.width(), " vs crop ", crop.channels(),
        "x", crop.height(), "x", crop.width()));
  }
  DenseGrid2 logits(scores.height(), scores.width());
  auto out = logits.mutable_data();
  for (int c = 0; c < scores.channels(); ++c) {
    auto s = scores.channel(c);
    auto f = crop.channel(c);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += s[i] * f[i];
  }
  return logits;
}

absl::StatusOr<InstanceMask> ComposeInstance(
    std::span<const double> attention, const DenseGrid3& bases,
    const BBox& box, int image_h, int image_w, const BlendParams& params) {
  SILPAN_RETURN_IF_ERROR(ValidateBlendParams(params));
  if (bases.channels() != params.n_bases) {
    return absl::InvalidArgumentError(
        absl::StrCat("bases have ", bases.channels(), " channels, expected ",
                     params.n_bases));
  }
  if (bases.height() != image_h || bases.width() != image_w) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bases are ", bases.height(), "x", bases.width(), " but the image is ",
        image_h, "x", image_w));
  }
  SILPAN_ASSIGN_OR_RETURN(
      const DenseGrid3 crop,
      RoiAlignCrop(bases, box, params.mask_res, params.mask_res,
                   params.samples_per_bin));
  SILPAN_ASSIGN_OR_RETURN(
      const DenseGrid3 scores,
      AttentionScores(attention, params.n_bases, params.native_res,
                      params.mask_res));
  SILPAN_ASSIGN_OR_RETURN(DenseGrid2 logits, BlendLogits(scores, crop));
  for (double& v : logits.mutable_data()) v = Sigmoid(v);
  SILPAN_ASSIGN_OR_RETURN(PastedMask pasted,
                          PasteMask(logits, box, image_h, image_w));
  InstanceMask mask;
  mask.binary = ThresholdGrid(pasted.probs, params.mask_threshold);
  mask.probs = std::move(pasted.probs);
  mask.box = box;
  return mask;
}

}  // namespace silpan
