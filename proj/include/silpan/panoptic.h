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


#ifndef SILPAN_PANOPTIC_H_
#define SILPAN_PANOPTIC_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace silpan {

using SegmentId = std::uint32_t;

// Id 0 marks void (unannotated / unassigned) pixels.
inline constexpr SegmentId kVoidId = 0;

// Ids must stay below 256^3 to fit the RGB raster encoding.
inline constexpr SegmentId kMaxSegmentId = (1u << 24) - 1;

class PanopticLabelMap {
 public:
  PanopticLabelMap() = default;
  PanopticLabelMap(int height, int width);  // all void

  static absl::StatusOr<PanopticLabelMap> FromIds(int height, int width,
                                                  std::vector<SegmentId> ids);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return ids_.size(); }

  SegmentId at(int y, int x) const {
    return ids_[static_cast<std::size_t>(y) * width_ + x];
  }
  SegmentId& at(int y, int x) {
    return ids_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const SegmentId> ids() const { return ids_; }
  std::span<SegmentId> mutable_ids() { return ids_; }

  bool operator==(const PanopticLabelMap&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<SegmentId> ids_;
};

struct SegmentInfo {
  int category_id = 0;
  bool is_thing = false;
  std::int64_t area = 0;

  bool operator==(const SegmentInfo&) const = default;
};

// Ordered so that iteration (and everything serialized from it) is
// deterministic.
using SegmentTable = std::map<SegmentId, SegmentInfo>;

struct PanopticResult {
  PanopticLabelMap map;
  SegmentTable table;

  bool operator==(const PanopticResult&) const = default;
};

// Every nonzero id in `map` appears in `table`.
absl::Status CheckIdsInTable(const PanopticLabelMap& map,
                             const SegmentTable& table);

// CheckIdsInTable plus: table areas equal pixel counts, ids in range.
absl::Status ValidatePanoptic(const PanopticResult& result);

// Pixel count per nonzero id.
std::map<SegmentId, std::int64_t> CountAreas(const PanopticLabelMap& map);

struct Category {
  int id = 0;
  std::string name;
  bool is_thing = false;

  bool operator==(const Category&) const = default;
};

// Known categories, kept sorted by id.
class CategoryRegistry {
 public:
  CategoryRegistry() = default;
  static absl::StatusOr<CategoryRegistry> Create(
      std::vector<Category> categories);

  std::span<const Category> categories() const { return categories_; }
  std::optional<Category> Find(int id) const;
  // Index of `id` in categories(), or -1.
  int IndexOf(int id) const;

  std::vector<int> ThingIds() const;
  // Stuff ids in ascending order; stuff probability channel k maps to the
  // k-th entry.
  std::vector<int> StuffIds() const;

  bool operator==(const CategoryRegistry&) const = default;

 private:
  std::vector<Category> categories_;
};

// Fails if any segment references a category the registry doesn't know, or
// disagrees with it on thing/stuff.
absl::Status CheckCategories(const PanopticResult& result,
                             const CategoryRegistry& registry);

}  // namespace silpan

#endif  // SILPAN_PANOPTIC_H_
