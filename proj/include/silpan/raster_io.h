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


#ifndef SILPAN_RASTER_IO_H_
#define SILPAN_RASTER_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "silpan/grid.h"

namespace silpan {

// 8-bit interleaved raster with 1 (gray) or 3 (RGB) channels.
struct Raster8 {
  int height = 0;
  int width = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  bool operator==(const Raster8&) const = default;
};

// PNG bytes. Output carries no timestamp chunk and uses a fixed zlib level,
// so equal rasters encode to equal bytes.
absl::StatusOr<std::string> EncodePng(const Raster8& raster);

// Accepts 8-bit gray or RGB PNGs only.
absl::StatusOr<Raster8> DecodePng(const std::string& bytes);

// Gray raster, 255 for set pixels.
Raster8 MaskToRaster(const BinaryMask& mask);
// Nonzero gray pixels are set.
absl::StatusOr<BinaryMask> RasterToMask(const Raster8& raster);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, const std::string& bytes);

}  // namespace silpan

#endif  // SILPAN_RASTER_IO_H_
