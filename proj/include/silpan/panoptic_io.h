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


#ifndef SILPAN_PANOPTIC_IO_H_
#define SILPAN_PANOPTIC_IO_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "silpan/panoptic.h"
#include "silpan/raster_io.h"

namespace silpan {

// One entry of the metadata record that accompanies a label raster.
struct SegmentRecord {
  SegmentId id = kVoidId;
  int category_id = 0;
  bool is_thing = false;
  std::int64_t area = 0;

  bool operator==(const SegmentRecord&) const = default;
};

// Label raster (segment id = R + 256 G + 256^2 B) plus per-segment metadata.
struct PanopticFileBundle {
  Raster8 raster;
  std::vector<SegmentRecord> segments;

  bool operator==(const PanopticFileBundle&) const = default;
};

std::array<std::uint8_t, 3> IdToRgb(SegmentId id);
SegmentId RgbToId(std::uint8_t r, std::uint8_t g, std::uint8_t b);

absl::StatusOr<PanopticFileBundle> EncodePanoptic(const PanopticResult& result);

// Rejects non-RGB rasters, raster ids missing from the metadata, duplicate
// or void metadata ids, and areas that disagree with the raster.
absl::StatusOr<PanopticResult> DecodePanoptic(const PanopticFileBundle& bundle);

// {"height": H, "width": W, "segments": [{"id", "category_id", "is_thing",
// "area"}, ...]} with segments in ascending id order.
std::string MetadataToJson(const PanopticFileBundle& bundle);
absl::StatusOr<std::vector<SegmentRecord>> MetadataFromJson(
    const std::string& text);

// Writes / reads `<stem>.png` and `<stem>.json`.
absl::Status SaveBundle(const PanopticFileBundle& bundle,
                        const std::string& stem);
absl::StatusOr<PanopticFileBundle> LoadBundle(const std::string& stem);

absl::Status SavePanoptic(const PanopticResult& result,
                          const std::string& stem);
absl::StatusOr<PanopticResult> LoadPanoptic(const std::string& stem);

}  // namespace silpan

#endif  // SILPAN_PANOPTIC_IO_H_
