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


#include "silpan/config.h"

#include <charconv>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "silpan/raster_io.h"
#include "silpan/status_macros.h"

namespace silpan {
namespace {

std::string FormatValue(const ConfigTarget& target) {
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return *p;
        } else if constexpr (std::is_same_v<T, bool>) {
          return *p ? "true" : "false";
        } else {
          char buf[32];
          auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), *p);
          return std::string(buf, end);
        }
      },
      target);
}

std::string CanonicalKey(std::string name) {
  for (char& c : name) {
    if (c == '_') c = '-';
  }
  return name;
}

}  // namespace

FusionParams Config::Fusion() const {
  FusionParams f;
  f.score_min = score_min;
  f.keep_frac = keep_frac;
  f.min_instance_area = min_instance_area;
  f.min_stuff_area = min_stuff_area;
  f.alpha = alpha;
  f.dup_iou = dup_iou;
  return f;
}

absl::StatusOr<SceneSpec> Config::Scene() const {
  SceneSpec s;
  s.seed = seed;
  s.height = height;
  s.width = width;
  s.min_instances = min_instances;
  s.max_instances = max_instances;
  SILPAN_ASSIGN_OR_RETURN(s.shapes, ParseShapeFamily(shapes));
  s.stuff_regions = stuff_regions;
  s.thing_classes = thing_classes;
  s.stuff_classes = stuff_classes;
  s.box_jitter = box_jitter;
  s.mask_flip_prob = mask_flip_prob;
  s.score_noise = score_noise;
  s.tie_fcos_to_iou = tie_fcos_to_iou;
  s.blend = blend;
  s.dice_eps = eps;
  s.alpha = alpha;
  SILPAN_RETURN_IF_ERROR(ValidateSceneSpec(s));
  return s;
}

std::vector<ConfigKey> ConfigKeys(Config& c) {
  return {
      {"alpha", "mask score weight on the detector score", &c.alpha},
      {"eps", "dice smoothing constant", &c.eps},
      {"nms-iou", "box IoU above which NMS suppresses", &c.nms_iou},
      {"dup-iou", "mask IoU at which two instances count as duplicates",
       &c.dup_iou},
      {"score-min", "minimum mask score admitted to fusion", &c.score_min},
      {"keep-frac", "minimum unoccluded fraction of an instance mask",
       &c.keep_frac},
      {"min-instance-area", "minimum claimed instance area (px)",
       &c.min_instance_area},
      {"min-stuff-area", "minimum stuff area at 640x480 (px)",
       &c.min_stuff_area},
      {"n-bases", "number of basis channels", &c.blend.n_bases},
      {"native-res", "attention map resolution", &c.blend.native_res},
      {"mask-res", "blend resolution", &c.blend.mask_res},
      {"samples-per-bin", "ROIAlign samples per bin side",
       &c.blend.samples_per_bin},
      {"mask-threshold", "probability at which a pixel joins the mask",
       &c.blend.mask_threshold},
      {"loss-w-ce", "cross-entropy weight", &c.loss_weights.cross_entropy},
      {"loss-w-iou", "soft IoU weight", &c.loss_weights.soft_iou},
      {"loss-w-silhouette", "silhouette loss weight",
       &c.loss_weights.silhouette},
      {"seed", "synthetic scene seed", &c.seed},
      {"height", "synthetic image height", &c.height},
      {"width", "synthetic image width", &c.width},
      {"min-instances", "fewest instances per scene", &c.min_instances},
      {"max-instances", "most instances per scene", &c.max_instances},
      {"shapes", "rectangles, ellipses or mixed", &c.shapes},
      {"stuff-regions", "number of stuff bands", &c.stuff_regions},
      {"thing-classes", "number of thing categories", &c.thing_classes},
      {"stuff-classes", "number of stuff categories", &c.stuff_classes},
      {"box-jitter", "uniform box coordinate noise (px)", &c.box_jitter},
      {"mask-flip-prob", "per-value basis sign flip probability",
       &c.mask_flip_prob},
      {"score-noise", "uniform detector score noise", &c.score_noise},
      {"tie-fcos-to-iou", "set detector scores to the true IoU",
       &c.tie_fcos_to_iou},
  };
}

absl::Status ValidateConfig(const Config& config) {
  if (!(config.eps > 0.0)) {
    return absl::InvalidArgumentError("eps must be positive");
  }
  if (!(config.nms_iou > 0.0 && config.nms_iou < 1.0)) {
    return absl::InvalidArgumentError("nms-iou must lie in (0, 1)");
  }
  SILPAN_RETURN_IF_ERROR(ValidateBlendParams(config.blend));
  SILPAN_RETURN_IF_ERROR(ValidateFusionParams(config.Fusion()));
  const MaskLossWeights& w = config.loss_weights;
  if (!(w.cross_entropy >= 0.0) || !(w.soft_iou >= 0.0) ||
      !(w.silhouette >= 0.0)) {
    return absl::InvalidArgumentError("loss weights must be non-negative");
  }
  return config.Scene().status();
}

std::string ConfigToText(const Config& config) {
  Config copy = config;
  std::string out;
  for (const ConfigKey& key : ConfigKeys(copy)) {
    absl::StrAppend(&out, std::string(key.name), " = ", FormatValue(key.target), "\n");
  }
  return out;
}

absl::Status ApplyConfigText(std::string_view text, Config* config) {
  std::istringstream in{std::string(text)};
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    return absl::InvalidArgumentError(absl::StrCat("config: ", e.what()));
  }
  // Parse into a scratch copy so a bad file leaves `config` untouched.
  Config scratch = *config;
  std::vector<ConfigKey> keys = ConfigKeys(scratch);
  for (const CLI::ConfigItem& item : items) {
    if (!item.parents.empty() && item.parents.front() != "default") {
      return absl::InvalidArgumentError(absl::StrCat(
          "config: sections are not supported ([", item.parents.front(), "])"));
    }
    const std::string name = CanonicalKey(item.name);
    auto it = std::ranges::find(keys, name, &ConfigKey::name);
    if (it == keys.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config: unknown key '", item.name, "'"));
    }
    if (item.inputs.size() != 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("config: key '", item.name, "' needs exactly one value"));
    }
    const std::string& value = item.inputs.front();
    const bool ok = std::visit(
        [&](auto* p) { return CLI::detail::lexical_conversion<
                           std::remove_pointer_t<decltype(p)>,
                           std::remove_pointer_t<decltype(p)>>({value}, *p); },
        it->target);
    if (!ok) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config: bad value '", value, "' for key '", item.name, "'"));
    }
  }
  *config = std::move(scratch);
  return absl::OkStatus();
}

absl::Status ApplyConfigFile(const std::string& path, Config* config) {
  SILPAN_ASSIGN_OR_RETURN(const std::string text, ReadFile(path));
  return ApplyConfigText(text, config);
}

}  // namespace silpan
