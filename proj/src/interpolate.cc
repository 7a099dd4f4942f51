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


#include "silpan/interpolate.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "silpan/status_macros.h"

namespace silpan {
namespace {

absl::Status CheckOutputSize(int h, int w) {
  if (h < 1 || w < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("output size must be >= 1, got ", h, "x", w));
  }
  return absl::OkStatus();
}

// Source index sampled by output pixel `i` when mapping `in` pixels onto
// `out` pixels.
double SourceIndex(int i, int in, int out) {
  return (i + 0.5) * static_cast<double>(in) / out - 0.5;
}

}  // namespace

double SamplePlane(std::span<const double> plane, int height, int width,
                   double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(height - 1));
  const int x0 = static_cast<int>(x);
  const int y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, width - 1);
  const int y1 = std::min(y0 + 1, height - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double* row0 = plane.data() + static_cast<std::size_t>(y0) * width;
  const double* row1 = plane.data() + static_cast<std::size_t>(y1) * width;
  const double top = row0[x0] + fx * (row0[x1] - row0[x0]);
  const double bottom = row1[x0] + fx * (row1[x1] - row1[x0]);
  return top + fy * (bottom - top);
}

absl::StatusOr<double> BilinearSample(const DenseGrid2& grid, double x,
                                      double y) {
  if (grid.empty()) {
    return absl::InvalidArgumentError("cannot sample an empty grid");
  }
  if (!std::isfinite(x) || !std::isfinite(y)) {
    return absl::InvalidArgumentError("sample coordinates must be finite");
  }
  return SamplePlane(grid.data(), grid.height(), grid.width(), x, y);
}

absl::StatusOr<DenseGrid3> RoiAlignCrop(const DenseGrid3& grid,
                                        const BBox& box, int out_h, int out_w,
                                        int samples_per_bin) {
  SILPAN_RETURN_IF_ERROR(ValidateBox(box));
  SILPAN_RETURN_IF_ERROR(CheckOutputSize(out_h, out_w));
  if (samples_per_bin < 1) {
    return absl::InvalidArgumentError("samples_per_bin must be >= 1");
  }
  if (grid.empty()) {
    return absl::InvalidArgumentError("cannot crop an empty grid");
  }
  const double bin_w = box.width() / out_w;
  const double bin_h = box.height() / out_h;
  const int s = samples_per_bin;
  const double inv_count = 1.0 / (s * s);

  // Sample positions are shared by all channels; precompute them in index
  // space.
  std::vector<double> xs(static_cast<std::size_t>(out_w) * s);
  std::vector<double> ys(static_cast<std::size_t>(out_h) * s);
  for (int j = 0; j < out_w; ++j) {
    for (int k = 0; k < s; ++k) {
      xs[j * s + k] = box.x0 + j * bin_w + (k + 0.5) * bin_w / s - 0.5;
    }
  }
  for (int i = 0; i < out_h; ++i) {
    for (int k = 0; k < s; ++k) {
      ys[i * s + k] = box.y0 + i * bin_h + (k + 0.5) * bin_h / s - 0.5;
    }
  }

  DenseGrid3 out(grid.channels(), out_h, out_w);
  for (int c = 0; c < grid.channels(); ++c) {
    auto plane = grid.channel(c);
    for (int i = 0; i < out_h; ++i) {
      for (int j = 0; j < out_w; ++j) {
        double acc = 0.0;
        for (int ky = 0; ky < s; ++ky) {
          for (int kx = 0; kx < s; ++kx) {
            acc += SamplePlane(plane, grid.height(), grid.width(),
                               xs[j * s + kx], ys[i * s + ky]);
          }
        }
        out.at(c, i, j) = acc * inv_count;
      }
    }
  }
  return out;
}

absl::StatusOr<DenseGrid3> ResizeBilinear(const DenseGrid3& grid, int new_h,
                                          int new_w) {
  SILPAN_RETURN_IF_ERROR(CheckOutputSize(new_h, new_w));
  if (grid.empty()) {
    return absl::InvalidArgumentError("cannot resize an empty grid");
  }
  DenseGrid3 out(grid.channels(), new_h, new_w);
  for (int c = 0; c < grid.channels(); ++c) {
    auto plane = grid.channel(c);
    for (int i = 0; i < new_h; ++i) {
      const double y = SourceIndex(i, grid.height(), new_h);
      for (int j = 0; j < new_w; ++j) {
        out.at(c, i, j) = SamplePlane(plane, grid.height(), grid.width(),
                                      SourceIndex(j, grid.width(), new_w), y);
      }
    }
  }
  return out;
}

absl::StatusOr<DenseGrid2> ResizeBilinear(const DenseGrid2& grid, int new_h,
                                          int new_w) {
  SILPAN_ASSIGN_OR_RETURN(
      auto in, DenseGrid3::FromData(1, grid.height(), grid.width(),
                                    {grid.data().begin(), grid.data().end()}));
  SILPAN_ASSIGN_OR_RETURN(auto out, ResizeBilinear(in, new_h, new_w));
  return out.ChannelGrid(0);
}

absl::StatusOr<PastedMask> PasteMask(const DenseGrid2& mask_probs,
                                     const BBox& box, int image_h,
                                     int image_w) {
  SILPAN_RETURN_IF_ERROR(ValidateBox(box));
  if (image_h < 0 || image_w < 0) {
    return absl::InvalidArgumentError("negative image dimension");
  }
  if (mask_probs.empty()) {
    return absl::InvalidArgumentError("cannot paste an empty mask");
  }
  PastedMask result;
  result.probs = DenseGrid2(image_h, image_w);
  const PixelRect full = RasterizeBox(box);
  result.raster = full.Intersect(PixelRect{0, 0, image_w, image_h});
  if (result.raster.empty()) {
    result.outside_image = true;
    return result;
  }
  const int rh = full.height();
  const int rw = full.width();
  auto plane = mask_probs.data();
  for (int y = result.raster.y0; y < result.raster.y1; ++y) {
    const double sy = SourceIndex(y - full.y0, mask_probs.height(), rh);
    for (int x = result.raster.x0; x < result.raster.x1; ++x) {
      result.probs.at(y, x) =
          SamplePlane(plane, mask_probs.height(), mask_probs.width(),
                      SourceIndex(x - full.x0, mask_probs.width(), rw), sy);
    }
  }
  return result;
}

}  // namespace silpan
