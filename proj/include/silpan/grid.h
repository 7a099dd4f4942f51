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

#ifndef SILPAN_GRID_H_
#define SILPAN_GRID_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace silpan {

// Row-major H x W field of finite doubles.
class DenseGrid2 {
 public:
  DenseGrid2() = default;
  DenseGrid2(int height, int width, double fill = 0.0);

  // Validates dimensions, length and finiteness.
  static absl::StatusOr<DenseGrid2> FromData(int height, int width,
                                             std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double at(int y, int x) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  double& at(int y, int x) {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> mutable_data() { return data_; }

  bool operator==(const DenseGrid2&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

// Channel-major C x H x W field of finite doubles.
class DenseGrid3 {
 public:
  DenseGrid3() = default;
  DenseGrid3(int channels, int height, int width, double fill = 0.0);

  static absl::StatusOr<DenseGrid3> FromData(int channels, int height,
                                             int width,
                                             std::vector<double> data);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(height_) * width_;
  }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double at(int c, int y, int x) const {
    return data_[c * plane_size() + static_cast<std::size_t>(y) * width_ + x];
  }
  double& at(int c, int y, int x) {
    return data_[c * plane_size() + static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<const double> channel(int c) const {
    return std::span<const double>(data_).subspan(c * plane_size(),
                                                  plane_size());
  }
  std::span<double> mutable_channel(int c) {
    return std::span<double>(data_).subspan(c * plane_size(), plane_size());
  }
  DenseGrid2 ChannelGrid(int c) const;

  std::span<const double> data() const { return data_; }
  std::span<double> mutable_data() { return data_; }

  bool operator==(const DenseGrid3&) const = default;

 private:
  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

// Axis-aligned box in continuous pixel coordinates. Pixel (y, x) covers
// [x, x+1) x [y, y+1); its center is at (x + 0.5, y + 0.5).
struct BBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double Area() const;
  bool IsValid() const;

  bool operator==(const BBox&) const = default;
};

absl::Status ValidateBox(const BBox& box);

// Half-open integer pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  PixelRect Intersect(const PixelRect& other) const;

  bool operator==(const PixelRect&) const = default;
};

// floor(x0), floor(y0), ceil(x1), ceil(y1).
PixelRect RasterizeBox(const BBox& box);

// One byte per pixel (0 or 1), row-major.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return bits_.size(); }

  bool Get(int y, int x) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void Set(int y, int x, bool value = true) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
  }
  bool Get(std::size_t index) const { return bits_[index] != 0; }
  void Set(std::size_t index, bool value = true) {
    bits_[index] = value ? 1 : 0;
  }

  std::int64_t Count() const;
  std::span<const std::uint8_t> bits() const { return bits_; }

  bool operator==(const BinaryMask&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> bits_;
};

// 0.0 / 1.0 grid with the mask's dimensions.
DenseGrid2 MaskToGrid(const BinaryMask& mask);

// Pixels with value >= threshold.
BinaryMask ThresholdGrid(const DenseGrid2& grid, double threshold);

}  // namespace silpan

#endif  // SILPAN_GRID_H_
