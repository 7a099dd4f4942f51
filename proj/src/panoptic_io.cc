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


#include "silpan/panoptic_io.h"

#include <set>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "silpan/status_macros.h"

namespace silpan {

using json = nlohmann::ordered_json;

std::array<std::uint8_t, 3> IdToRgb(SegmentId id) {
  return {static_cast<std::uint8_t>(id & 0xff),
          static_cast<std::uint8_t>((id >> 8) & 0xff),
          static_cast<std::uint8_t>((id >> 16) & 0xff)};
}

SegmentId RgbToId(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<SegmentId>(r) + 256u * g + 65536u * b;
}

absl::StatusOr<PanopticFileBundle> EncodePanoptic(
    const PanopticResult& result) {
  SILPAN_RETURN_IF_ERROR(ValidatePanoptic(result));
  PanopticFileBundle bundle;
  bundle.raster = Raster8{result.map.height(), result.map.width(), 3, {}};
  bundle.raster.pixels.resize(result.map.size() * 3);
  auto ids = result.map.ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto rgb = IdToRgb(ids[i]);
    bundle.raster.pixels[3 * i] = rgb[0];
    bundle.raster.pixels[3 * i + 1] = rgb[1];
    bundle.raster.pixels[3 * i + 2] = rgb[2];
  }
  for (const auto& [id, info] : result.table) {
    bundle.segments.push_back({id, info.category_id, info.is_thing, info.area});
  }
  return bundle;
}

absl::StatusOr<PanopticResult> DecodePanoptic(
    const PanopticFileBundle& bundle) {
  const Raster8& r = bundle.raster;
  if (r.channels != 3) {
    return absl::InvalidArgumentError("panoptic raster must be RGB");
  }
  if (r.height < 0 || r.width < 0 ||
      r.pixels.size() != static_cast<std::size_t>(r.height) * r.width * 3) {
    return absl::InvalidArgumentError("malformed panoptic raster");
  }
  PanopticResult result;
  result.map = PanopticLabelMap(r.height, r.width);
  auto ids = result.map.mutable_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    ids[i] = RgbToId(r.pixels[3 * i], r.pixels[3 * i + 1], r.pixels[3 * i + 2]);
  }
  for (const auto& s : bundle.segments) {
    if (s.id == kVoidId || s.id > kMaxSegmentId) {
      return absl::InvalidArgumentError(
          absl::StrCat("metadata id ", s.id, " out of range"));
    }
    if (!result.table.emplace(s.id, SegmentInfo{s.category_id, s.is_thing,
                                                s.area})
             .second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate metadata id ", s.id));
    }
  }
  if (auto s = CheckIdsInTable(result.map, result.table); !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("orphan raster id: ", s.message()));
  }
  SILPAN_RETURN_IF_ERROR(ValidatePanoptic(result));
  return result;
}

std::string MetadataToJson(const PanopticFileBundle& bundle) {
  json segments = json::array();
  for (const auto& s : bundle.segments) {
    segments.push_back({{"id", s.id},
                        {"category_id", s.category_id},
                        {"is_thing", s.is_thing},
                        {"area", s.area}});
  }
  json doc = {{"height", bundle.raster.height},
              {"width", bundle.raster.width},
              {"segments", std::move(segments)}};
  return doc.dump(2) + "\n";
}

absl::StatusOr<std::vector<SegmentRecord>> MetadataFromJson(
    const std::string& text) {
  try {
    const json doc = json::parse(text);
    std::vector<SegmentRecord> out;
    for (const auto& s : doc.at("segments")) {
      out.push_back({s.at("id").get<SegmentId>(), s.at("category_id").get<int>(),
                     s.at("is_thing").get<bool>(),
                     s.at("area").get<std::int64_t>()});
    }
    return out;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad panoptic metadata: ", e.what()));
  }
}

absl::Status SaveBundle(const PanopticFileBundle& bundle,
                        const std::string& stem) {
  SILPAN_ASSIGN_OR_RETURN(const std::string png, EncodePng(bundle.raster));
  SILPAN_RETURN_IF_ERROR(WriteFile(stem + ".png", png));
  return WriteFile(stem + ".json", MetadataToJson(bundle));
}

absl::StatusOr<PanopticFileBundle> LoadBundle(const std::string& stem) {
  PanopticFileBundle bundle;
  SILPAN_ASSIGN_OR_RETURN(const std::string png, ReadFile(stem + ".png"));
  SILPAN_ASSIGN_OR_RETURN(bundle.raster, DecodePng(png));
  SILPAN_ASSIGN_OR_RETURN(const std::string meta, ReadFile(stem + ".json"));
  SILPAN_ASSIGN_OR_RETURN(bundle.segments, MetadataFromJson(meta));
  return bundle;
}

absl::Status SavePanoptic(const PanopticResult& result,
                          const std::string& stem) {
  SILPAN_ASSIGN_OR_RETURN(const PanopticFileBundle bundle,
                          EncodePanoptic(result));
  return SaveBundle(bundle, stem);
}

absl::StatusOr<PanopticResult> LoadPanoptic(const std::string& stem) {
  SILPAN_ASSIGN_OR_RETURN(const PanopticFileBundle bundle, LoadBundle(stem));
  return DecodePanoptic(bundle);
}

}  // namespace silpan
