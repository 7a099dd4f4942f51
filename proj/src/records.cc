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


#include "silpan/records.h"

#include <bit>
#include <cstring>
#include <filesystem>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "silpan/raster_io.h"
#include "silpan/status_macros.h"

namespace silpan {

using json = nlohmann::ordered_json;

namespace {

constexpr char kGridMagic[8] = {'S', 'P', 'G', 'R', 'I', 'D', '0', '1'};
constexpr std::size_t kGridHeaderSize = 8 + 3 * 4;

void PutLe(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

std::uint64_t GetLe(const std::string& in, std::size_t offset, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i]))
         << (8 * i);
  }
  return v;
}

json RecordToJson(const InstanceRecord& r) {
  const BBox& b = r.detection.box;
  json j = {{"box", {b.x0, b.y0, b.x1, b.y1}},
            {"class_id", r.detection.class_id},
            {"fcos_score", r.detection.fcos_score},
            {"iou_score", r.iou_score},
            {"silhouette_score", r.silhouette_score}};
  if (r.mask_score) j["mask_score"] = *r.mask_score;
  if (!r.mask_path.empty()) j["mask"] = r.mask_path;
  if (!r.detection.attention.empty()) j["attention"] = r.detection.attention;
  return j;
}

InstanceRecord RecordFromJson(const json& j) {
  InstanceRecord r;
  const auto box = j.at("box").get<std::vector<double>>();
  if (box.size() != 4) throw std::invalid_argument("box needs 4 coordinates");
  r.detection.box = BBox{box[0], box[1], box[2], box[3]};
  r.detection.class_id = j.at("class_id").get<int>();
  r.detection.fcos_score = j.at("fcos_score").get<double>();
  r.iou_score = j.value("iou_score", r.detection.fcos_score);
  r.silhouette_score = j.value("silhouette_score", 1.0);
  if (j.contains("mask_score")) r.mask_score = j.at("mask_score").get<double>();
  if (j.contains("attention")) {
    r.detection.attention = j.at("attention").get<std::vector<double>>();
  }
  r.mask_path = j.value("mask", std::string());
  return r;
}

}  // namespace

std::string EncodeGrid(const DenseGrid3& grid) {
  std::string out(kGridMagic, sizeof(kGridMagic));
  PutLe(out, static_cast<std::uint32_t>(grid.channels()), 4);
  PutLe(out, static_cast<std::uint32_t>(grid.height()), 4);
  PutLe(out, static_cast<std::uint32_t>(grid.width()), 4);
  out.reserve(out.size() + grid.size() * 8);
  for (double v : grid.data()) PutLe(out, std::bit_cast<std::uint64_t>(v), 8);
  return out;
}

absl::StatusOr<DenseGrid3> DecodeGrid(const std::string& bytes) {
  if (bytes.size() < kGridHeaderSize ||
      std::memcmp(bytes.data(), kGridMagic, sizeof(kGridMagic)) != 0) {
    return absl::InvalidArgumentError("not a grid file");
  }
  const auto c = GetLe(bytes, 8, 4);
  const auto h = GetLe(bytes, 12, 4);
  const auto w = GetLe(bytes, 16, 4);
  const std::uint64_t count = c * h * w;
  if (c > (1u << 20) || h > (1u << 20) || w > (1u << 20) ||
      bytes.size() != kGridHeaderSize + count * 8) {
    return absl::InvalidArgumentError("grid file size does not match header");
  }
  std::vector<double> data(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    data[i] = std::bit_cast<double>(GetLe(bytes, kGridHeaderSize + 8 * i, 8));
  }
  return DenseGrid3::FromData(static_cast<int>(c), static_cast<int>(h),
                              static_cast<int>(w), std::move(data));
}

absl::Status SaveGrid(const DenseGrid3& grid, const std::string& path) {
  return WriteFile(path, EncodeGrid(grid));
}

absl::StatusOr<DenseGrid3> LoadGrid(const std::string& path) {
  SILPAN_ASSIGN_OR_RETURN(const std::string bytes, ReadFile(path));
  return DecodeGrid(bytes);
}

std::string CategoriesToJson(const CategoryRegistry& registry) {
  json cats = json::array();
  for (const auto& c : registry.categories()) {
    cats.push_back({{"id", c.id}, {"name", c.name}, {"is_thing", c.is_thing}});
  }
  return json{{"categories", std::move(cats)}}.dump(2) + "\n";
}

absl::StatusOr<CategoryRegistry> CategoriesFromJson(const std::string& text) {
  std::vector<Category> cats;
  try {
    const json doc = json::parse(text);
    for (const auto& c : doc.at("categories")) {
      cats.push_back({c.at("id").get<int>(), c.value("name", std::string()),
                      c.at("is_thing").get<bool>()});
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad categories file: ", e.what()));
  }
  return CategoryRegistry::Create(std::move(cats));
}

// One instance per line; attention vectors make indented output unwieldy.
std::string InstanceFileToJson(const InstanceFile& file) {
  const json image = {{"height", file.height}, {"width", file.width}};
  std::string out = absl::StrCat("{\n  \"image\": ", image.dump(),
                                 ",\n  \"instances\": [");
  for (std::size_t i = 0; i < file.records.size(); ++i) {
    absl::StrAppend(&out, i == 0 ? "\n    " : ",\n    ",
                    RecordToJson(file.records[i]).dump());
  }
  absl::StrAppend(&out, file.records.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return out;
}

absl::StatusOr<InstanceFile> InstanceFileFromJson(const std::string& text) {
  InstanceFile file;
  try {
    const json doc = json::parse(text);
    file.height = doc.at("image").at("height").get<int>();
    file.width = doc.at("image").at("width").get<int>();
    for (const auto& j : doc.at("instances")) {
      file.records.push_back(RecordFromJson(j));
    }
  } catch (const std::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad instance file: ", e.what()));
  }
  for (const auto& r : file.records) {
    SILPAN_RETURN_IF_ERROR(ValidateBox(r.detection.box));
  }
  return file;
}

absl::Status SaveInstances(const std::vector<ScoredInstance>& instances,
                           int height, int width, const std::string& dir) {
  InstanceFile file{height, width, {}};
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const ScoredInstance& inst = instances[i];
    InstanceRecord r{inst.detection, inst.iou_score, inst.silhouette_score,
                     inst.mask_score, absl::StrFormat("mask_%04d.png", i)};
    SILPAN_ASSIGN_OR_RETURN(const std::string png,
                            EncodePng(MaskToRaster(inst.mask.binary)));
    SILPAN_RETURN_IF_ERROR(
        WriteFile((std::filesystem::path(dir) / r.mask_path).string(), png));
    file.records.push_back(std::move(r));
  }
  return WriteFile((std::filesystem::path(dir) / "instances.json").string(),
                   InstanceFileToJson(file));
}

absl::StatusOr<std::vector<ScoredInstance>> LoadInstances(
    const std::string& json_path, double alpha) {
  SILPAN_ASSIGN_OR_RETURN(const std::string text, ReadFile(json_path));
  SILPAN_ASSIGN_OR_RETURN(const InstanceFile file, InstanceFileFromJson(text));
  const auto base = std::filesystem::path(json_path).parent_path();
  std::vector<ScoredInstance> out;
  for (const auto& r : file.records) {
    if (r.mask_path.empty()) {
      return absl::InvalidArgumentError("instance record without a mask");
    }
    SILPAN_ASSIGN_OR_RETURN(const std::string png,
                            ReadFile((base / r.mask_path).string()));
    SILPAN_ASSIGN_OR_RETURN(const Raster8 raster, DecodePng(png));
    SILPAN_ASSIGN_OR_RETURN(BinaryMask binary, RasterToMask(raster));
    if (binary.height() != file.height || binary.width() != file.width) {
      return absl::InvalidArgumentError(
          absl::StrCat("mask ", r.mask_path, " does not match image size"));
    }
    InstanceMask mask{MaskToGrid(binary), std::move(binary), r.detection.box};
    SILPAN_ASSIGN_OR_RETURN(
        ScoredInstance inst,
        MakeScoredInstance(r.detection, std::move(mask), r.iou_score,
                           r.silhouette_score, alpha));
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace silpan
