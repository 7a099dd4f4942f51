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


#ifndef SILPAN_CONFIG_H_
#define SILPAN_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "silpan/blend.h"
#include "silpan/fusion.h"
#include "silpan/losses.h"
#include "silpan/scoring.h"
#include "silpan/silhouette.h"
#include "silpan/synth.h"

namespace silpan {

// Every tunable in one place. Each field is reachable both as a key in a
// config file and as a --flag of the same name on the command line.
struct Config {
  double alpha = kDefaultAlpha;
  double eps = kDefaultDiceEps;
  double nms_iou = kDefaultNmsIou;
  double dup_iou = kDefaultDupIou;
  double score_min = 0.4;
  double keep_frac = 0.5;
  std::int64_t min_instance_area = 16;
  std::int64_t min_stuff_area = 4096;
  BlendParams blend;
  MaskLossWeights loss_weights;

  // Synthetic scenes.
  std::uint64_t seed = 0;
  int height = 128;
  int width = 128;
  int min_instances = 2;
  int max_instances = 6;
  std::string shapes = "mixed";
  int stuff_regions = 3;
  int thing_classes = 3;
  int stuff_classes = 3;
  double box_jitter = 0.0;
  double mask_flip_prob = 0.0;
  double score_noise = 0.0;
  bool tie_fcos_to_iou = false;

  FusionParams Fusion() const;
  absl::StatusOr<SceneSpec> Scene() const;
};

using ConfigTarget = std::variant<double*, int*, std::int64_t*,
                                  std::uint64_t*, bool*, std::string*>;

struct ConfigKey {
  std::string_view name;
  std::string_view help;
  ConfigTarget target;
};

// The schema, in documentation order. Targets point into `config`.
std::vector<ConfigKey> ConfigKeys(Config& config);

absl::Status ValidateConfig(const Config& config);

// Flat "key = value" text, one line per key, in schema order.
std::string ConfigToText(const Config& config);

// Applies a flat key/value file on top of `config`. '#' starts a comment,
// '_' and '-' are interchangeable in keys, unknown keys are an error.
absl::Status ApplyConfigText(std::string_view text, Config* config);
absl::Status ApplyConfigFile(const std::string& path, Config* config);

}  // namespace silpan

#endif  // SILPAN_CONFIG_H_
