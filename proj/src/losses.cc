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


#include "silpan/losses.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "silpan/silhouette.h"
#include "silpan/status_macros.h"

namespace silpan {
namespace {

struct IouTerms {
  double intersection;
  double union_;
};

absl::StatusOr<IouTerms> ComputeIouTerms(const DenseGrid2& p,
                                         const BinaryMask& g) {
  SILPAN_RETURN_IF_ERROR(CheckProbabilityInputs(p, g));
  double inter = 0.0;
  double p_sum = 0.0;
  double g_sum = 0.0;
  auto pd = p.data();
  for (std::size_t i = 0; i < pd.size(); ++i) {
    p_sum += pd[i];
    if (g.Get(i)) {
      inter += pd[i];
      g_sum += 1.0;
    }
  }
  return IouTerms{inter, p_sum + g_sum - inter};
}

absl::Status CheckLabels(const DenseGrid3& logits, const ClassLabels& labels) {
  if (labels.height != logits.height() || labels.width != logits.width() ||
      labels.labels.size() != logits.plane_size()) {
    return absl::InvalidArgumentError("labels do not match logits plane");
  }
  if (logits.channels() < 1) {
    return absl::InvalidArgumentError("logits need at least one class");
  }
  for (int label : labels.labels) {
    if (label != kIgnoreLabel && (label < 0 || label >= logits.channels())) {
      return absl::OutOfRangeError(absl::StrCat(
          "label ", label, " outside [0, ", logits.channels(), ")"));
    }
  }
  return absl::OkStatus();
}

// Fills `probs` with the softmax over channels at plane index `i` and
// returns log(sum(exp(logit - max))) + max.
double SoftmaxAt(const DenseGrid3& logits, std::size_t i,
                 std::vector<double>& probs) {
  const int c_count = logits.channels();
  double max_logit = logits.channel(0)[i];
  for (int c = 1; c < c_count; ++c) {
    max_logit = std::max(max_logit, logits.channel(c)[i]);
  }
  double sum = 0.0;
  for (int c = 0; c < c_count; ++c) {
    probs[c] = std::exp(logits.channel(c)[i] - max_logit);
    sum += probs[c];
  }
  for (int c = 0; c < c_count; ++c) probs[c] /= sum;
  return max_logit + std::log(sum);
}

}  // namespace

absl::StatusOr<double> SoftIouLoss(const DenseGrid2& p, const BinaryMask& g) {
  SILPAN_ASSIGN_OR_RETURN(const IouTerms t, ComputeIouTerms(p, g));
  if (t.union_ <= 0.0) return 0.0;
  return 1.0 - t.intersection / t.union_;
}

absl::StatusOr<DenseGrid2> SoftIouGrad(const DenseGrid2& p,
                                       const BinaryMask& g) {
  SILPAN_ASSIGN_OR_RETURN(const IouTerms t, ComputeIouTerms(p, g));
  DenseGrid2 grad(p.height(), p.width());
  if (t.union_ <= 0.0) return grad;
  // d(I/U)/dp_i = (g_i * U - I * (1 - g_i)) / U^2
  const double u2 = t.union_ * t.union_;
  auto out = grad.mutable_data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double gi = g.Get(i) ? 1.0 : 0.0;
    out[i] = -(gi * t.union_ - t.intersection * (1.0 - gi)) / u2;
  }
  return grad;
}

absl::StatusOr<double> PixelCrossEntropy(const DenseGrid3& logits,
                                         const ClassLabels& labels) {
  SILPAN_RETURN_IF_ERROR(CheckLabels(logits, labels));
  std::vector<double> probs(logits.channels());
  double total = 0.0;
  std::int64_t valid = 0;
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    const int label = labels.labels[i];
    if (label == kIgnoreLabel) continue;
    const double log_norm = SoftmaxAt(logits, i, probs);
    total += log_norm - logits.channel(label)[i];
    ++valid;
  }
  return valid == 0 ? 0.0 : total / valid;
}

absl::StatusOr<DenseGrid3> PixelCrossEntropyGrad(const DenseGrid3& logits,
                                                 const ClassLabels& labels) {
  SILPAN_RETURN_IF_ERROR(CheckLabels(logits, labels));
  DenseGrid3 grad(logits.channels(), logits.height(), logits.width());
  const auto valid = std::ranges::count_if(
      labels.labels, [](int l) { return l != kIgnoreLabel; });
  if (valid == 0) return grad;
  const double scale = 1.0 / static_cast<double>(valid);
  std::vector<double> probs(logits.channels());
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    const int label = labels.labels[i];
    if (label == kIgnoreLabel) continue;
    SoftmaxAt(logits, i, probs);
    for (int c = 0; c < logits.channels(); ++c) {
      grad.mutable_channel(c)[i] =
          (probs[c] - (c == label ? 1.0 : 0.0)) * scale;
    }
  }
  return grad;
}

absl::StatusOr<double> Mse(std::span<const double> pred,
                           std::span<const double> target) {
  if (pred.size() != target.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: ", pred.size(), " vs ", target.size()));
  }
  if (pred.empty()) return absl::InvalidArgumentError("empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    sum += d * d;
  }
  return sum / static_cast<double>(pred.size());
}

double CombineMaskLoss(const MaskLossTerms& terms,
                       const MaskLossWeights& weights) {
  return weights.cross_entropy * terms.cross_entropy +
         weights.soft_iou * terms.soft_iou +
         weights.silhouette * terms.silhouette;
}

}  // namespace silpan
