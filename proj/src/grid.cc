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


#include "silpan/grid.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"

namespace silpan {
namespace {

absl::Status CheckFinite(std::span<const double> data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite grid value at flat index ", i));
    }
  }
  return absl::OkStatus();
}

}  // namespace

DenseGrid2::DenseGrid2(int height, int width, double fill)
    : height_(height),
      width_(width),
      data_(static_cast<std::size_t>(std::max(height, 0)) *
                static_cast<std::size_t>(std::max(width, 0)),
            fill) {}

absl::StatusOr<DenseGrid2> DenseGrid2::FromData(int height, int width,
                                                std::vector<double> data) {
  if (height < 0 || width < 0) {
    return absl::InvalidArgumentError("negative grid dimension");
  }
  if (data.size() != static_cast<std::size_t>(height) * width) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid data length ", data.size(), " != ", height, "x",
                     width));
  }
  if (auto s = CheckFinite(data); !s.ok()) return s;
  DenseGrid2 grid;
  grid.height_ = height;
  grid.width_ = width;
  grid.data_ = std::move(data);
  return grid;
}

DenseGrid3::DenseGrid3(int channels, int height, int width, double fill)
    : channels_(channels),
      height_(height),
      width_(width),
      data_(static_cast<std::size_t>(std::max(channels, 0)) *
                static_cast<std::size_t>(std::max(height, 0)) *
                static_cast<std::size_t>(std::max(width, 0)),
            fill) {}

absl::StatusOr<DenseGrid3> DenseGrid3::FromData(int channels, int height,
                                                int width,
                                                std::vector<double> data) {
  if (channels < 0 || height < 0 || width < 0) {
    return absl::InvalidArgumentError("negative grid dimension");
  }
  if (data.size() != static_cast<std::size_t>(channels) * height * width) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid data length ", data.size(), " != ", channels, "x",
                     height, "x", width));
  }
  if (auto s = CheckFinite(data); !s.ok()) return s;
  DenseGrid3 grid;
  grid.channels_ = channels;
  grid.height_ = height;
  grid.width_ = width;
  grid.data_ = std::move(data);
  return grid;
}

DenseGrid2 DenseGrid3::ChannelGrid(int c) const {
  DenseGrid2 out(height_, width_);
  std::ranges::copy(channel(c), out.mutable_data().begin());
  return out;
}

double BBox::Area() const {
  return IsValid() ? (x1 - x0) * (y1 - y0) : 0.0;
}

bool BBox::IsValid() const {
  return std::isfinite(x0) && std::isfinite(y0) && std::isfinite(x1) &&
         std::isfinite(y1) && x1 > x0 && y1 > y0;
}

absl::Status ValidateBox(const BBox& box) {
  if (!box.IsValid()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid box [", box.x0, ", ", box.y0, ", ", box.x1,
                     ", ", box.y1, "]"));
  }
  return absl::OkStatus();
}

PixelRect PixelRect::Intersect(const PixelRect& other) const {
  PixelRect r{std::max(x0, other.x0), std::max(y0, other.y0),
              std::min(x1, other.x1), std::min(y1, other.y1)};
  if (r.empty()) return PixelRect{};
  return r;
}

PixelRect RasterizeBox(const BBox& box) {
  return PixelRect{static_cast<int>(std::floor(box.x0)),
                   static_cast<int>(std::floor(box.y0)),
                   static_cast<int>(std::ceil(box.x1)),
                   static_cast<int>(std::ceil(box.y1))};
}

BinaryMask::BinaryMask(int height, int width)
    : height_(height),
      width_(width),
      bits_(static_cast<std::size_t>(std::max(height, 0)) *
                static_cast<std::size_t>(std::max(width, 0)),
            0) {}

std::int64_t BinaryMask::Count() const {
  return std::count(bits_.begin(), bits_.end(), std::uint8_t{1});
}

DenseGrid2 MaskToGrid(const BinaryMask& mask) {
  DenseGrid2 grid(mask.height(), mask.width());
  auto out = grid.mutable_data();
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask.Get(i) ? 1.0 : 0.0;
  return grid;
}

BinaryMask ThresholdGrid(const DenseGrid2& grid, double threshold) {
  BinaryMask mask(grid.height(), grid.width());
  auto data = grid.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i] >= threshold) mask.Set(i);
  }
  return mask;
}

}  // namespace silpan
