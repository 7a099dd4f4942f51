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


#include "silpan/raster_io.h"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "absl/strings/str_cat.h"

namespace silpan {
namespace {

constexpr int kZlibLevel = 6;

struct ReadCursor {
  const std::string* bytes;
  std::size_t offset;
};

void AppendToString(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), length);
}

void FlushNothing(png_structp) {}

void ReadFromCursor(png_structp png, png_bytep data, png_size_t length) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->offset + length > cursor->bytes->size()) {
    png_error(png, "truncated PNG stream");
  }
  std::memcpy(data, cursor->bytes->data() + cursor->offset, length);
  cursor->offset += length;
}

// libpng reports errors with longjmp; the two functions below keep only
// trivially destructible locals between setjmp and the libpng calls.
bool WritePngRaw(const Raster8& raster, std::string* out,
                 char* error, std::size_t error_size) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) {
    std::snprintf(error, error_size, "png_create_write_struct failed");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::snprintf(error, error_size, "libpng write error");
    return false;
  }
  png_set_write_fn(png, out, AppendToString, FlushNothing);
  png_set_compression_level(png, kZlibLevel);
  png_set_IHDR(png, info, raster.width, raster.height, 8,
               raster.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride =
      static_cast<std::size_t>(raster.width) * raster.channels;
  for (int y = 0; y < raster.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(raster.pixels.data() + y * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

bool ReadPngRaw(ReadCursor* cursor, Raster8* raster, char* error,
                std::size_t error_size) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) {
    std::snprintf(error, error_size, "png_create_read_struct failed");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::snprintf(error, error_size, "malformed PNG raster");
    return false;
  }
  png_set_read_fn(png, cursor, ReadFromCursor);
  png_read_info(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth != 8 || (color_type != PNG_COLOR_TYPE_RGB &&
                         color_type != PNG_COLOR_TYPE_GRAY)) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::snprintf(error, error_size,
                  "unsupported PNG layout (bit depth %d, color type %d)",
                  bit_depth, color_type);
    return false;
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  raster->width = static_cast<int>(png_get_image_width(png, info));
  raster->height = static_cast<int>(png_get_image_height(png, info));
  raster->channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  const std::size_t stride = png_get_rowbytes(png, info);
  raster->pixels.resize(stride * raster->height);
  for (int y = 0; y < raster->height; ++y) {
    png_read_row(png, raster->pixels.data() + y * stride, nullptr);
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

}  // namespace

absl::StatusOr<std::string> EncodePng(const Raster8& raster) {
  if (raster.channels != 1 && raster.channels != 3) {
    return absl::InvalidArgumentError("raster must have 1 or 3 channels");
  }
  if (raster.height < 1 || raster.width < 1) {
    return absl::InvalidArgumentError("raster must be non-empty");
  }
  if (raster.pixels.size() != static_cast<std::size_t>(raster.height) *
                                  raster.width * raster.channels) {
    return absl::InvalidArgumentError("raster pixel count mismatch");
  }
  std::string out;
  char error[128] = {0};
  if (!WritePngRaw(raster, &out, error, sizeof(error))) {
    return absl::InternalError(error);
  }
  return out;
}

absl::StatusOr<Raster8> DecodePng(const std::string& bytes) {
  if (bytes.size() < 8 ||
      png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0) {
    return absl::InvalidArgumentError("not a PNG stream");
  }
  ReadCursor cursor{&bytes, 0};
  Raster8 raster;
  char error[128] = {0};
  if (!ReadPngRaw(&cursor, &raster, error, sizeof(error))) {
    return absl::InvalidArgumentError(error);
  }
  return raster;
}

Raster8 MaskToRaster(const BinaryMask& mask) {
  Raster8 r{mask.height(), mask.width(), 1, {}};
  r.pixels.resize(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    r.pixels[i] = mask.Get(i) ? 255 : 0;
  }
  return r;
}

absl::StatusOr<BinaryMask> RasterToMask(const Raster8& raster) {
  if (raster.channels != 1) {
    return absl::InvalidArgumentError("mask raster must be single-channel");
  }
  BinaryMask mask(raster.height, raster.width);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask.Set(i, raster.pixels[i] != 0);
  }
  return mask;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("read failed: ", path));
  return ss.str();
}

absl::Status WriteFile(const std::string& path, const std::string& bytes) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) {
      return absl::PermissionDeniedError(
          absl::StrCat("cannot create directory for ", path));
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace silpan
