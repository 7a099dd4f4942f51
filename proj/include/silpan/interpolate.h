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


#ifndef SILPAN_INTERPOLATE_H_
#define SILPAN_INTERPOLATE_H_

#include <span>

#include "absl/status/statusor.h"
#include "silpan/grid.h"

namespace silpan {

// Sampling conventions shared by every kernel in this header.
//
// BilinearSample works in *index space*: pixel (row y, column x) sits at the
// integer point (x, y). Queries outside [0, width-1] x [0, height-1] are
// clamped to the border pixel centers.
//
// Boxes are in *continuous space* where pixel x spans [x, x+1), so the index
// of a continuous coordinate u is u - 0.5 (half-pixel centers, corners not
// aligned). RoiAlignCrop, ResizeBilinear and PasteMask all use this mapping.

inline constexpr int kDefaultSamplesPerBin = 2;

absl::StatusOr<double> BilinearSample(const DenseGrid2& grid, double x,
                                      double y);

// Unchecked sampler over one row-major plane; caller guarantees a non-empty
// plane of height * width values and finite coordinates.
double SamplePlane(std::span<const double> plane, int height, int width,
                   double x, double y);

// Averages samples_per_bin^2 regularly spaced bilinear samples inside each of
// the out_h x out_w bins tiling `box`. Channels are cropped independently.
absl::StatusOr<DenseGrid3> RoiAlignCrop(
    const DenseGrid3& grid, const BBox& box, int out_h, int out_w,
    int samples_per_bin = kDefaultSamplesPerBin);

// Output pixel i samples source index (i + 0.5) * in / out - 0.5.
absl::StatusOr<DenseGrid3> ResizeBilinear(const DenseGrid3& grid, int new_h,
                                          int new_w);
absl::StatusOr<DenseGrid2> ResizeBilinear(const DenseGrid2& grid, int new_h,
                                          int new_w);

struct PastedMask {
  DenseGrid2 probs;     // image_h x image_w, zero outside `raster`
  PixelRect raster;     // RasterizeBox(box) clipped to the image
  bool outside_image = false;
};

// Resizes `mask_probs` to the full RasterizeBox(box) extent and writes the
// part that falls inside the image. A box that misses the image entirely is
// not an error: the result is all zeros with outside_image set.
absl::StatusOr<PastedMask> PasteMask(const DenseGrid2& mask_probs,
                                     const BBox& box, int image_h,
                                     int image_w);

}  // namespace silpan

#endif  // SILPAN_INTERPOLATE_H_
