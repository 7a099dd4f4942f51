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


#include "silpan/panoptic.h"

#include <algorithm>
#include <utility>

#include "absl/strings/str_cat.h"

namespace silpan {

PanopticLabelMap::PanopticLabelMap(int height, int width)
    : height_(height),
      width_(width),
      ids_(static_cast<std::size_t>(std::max(height, 0)) *
               static_cast<std::size_t>(std::max(width, 0)),
           kVoidId) {}

absl::StatusOr<PanopticLabelMap> PanopticLabelMap::FromIds(
    int height, int width, std::vector<SegmentId> ids) {
  if (height < 0 || width < 0) {
    return absl::InvalidArgumentError("negative label map dimension");
  }
  if (ids.size() != static_cast<std::size_t>(height) * width) {
    return absl::InvalidArgumentError(
        absl::StrCat("label map length ", ids.size(), " != ", height, "x",
                     width));
  }
  PanopticLabelMap map;
  map.height_ = height;
  map.width_ = width;
  map.ids_ = std::move(ids);
  return map;
}

absl::Status CheckIdsInTable(const PanopticLabelMap& map,
                             const SegmentTable& table) {
  SegmentId last_checked = kVoidId;
  for (SegmentId id : map.ids()) {
    if (id == kVoidId || id == last_checked) continue;
    if (!table.contains(id)) {
      return absl::FailedPreconditionError(
          absl::StrCat("segment id ", id, " missing from segment table"));
    }
    last_checked = id;
  }
  return absl::OkStatus();
}

std::map<SegmentId, std::int64_t> CountAreas(const PanopticLabelMap& map) {
  std::map<SegmentId, std::int64_t> areas;
  SegmentId run_id = kVoidId;
  std::int64_t run = 0;
  for (SegmentId id : map.ids()) {
    if (id == run_id) {
      ++run;
      continue;
    }
    if (run_id != kVoidId) areas[run_id] += run;
    run_id = id;
    run = 1;
  }
  if (run_id != kVoidId) areas[run_id] += run;
  return areas;
}

absl::Status ValidatePanoptic(const PanopticResult& result) {
  if (auto s = CheckIdsInTable(result.map, result.table); !s.ok()) return s;
  const auto areas = CountAreas(result.map);
  for (const auto& [id, info] : result.table) {
    if (id == kVoidId || id > kMaxSegmentId) {
      return absl::FailedPreconditionError(
          absl::StrCat("segment id ", id, " out of range"));
    }
    auto it = areas.find(id);
    const std::int64_t count = it == areas.end() ? 0 : it->second;
    if (count != info.area) {
      return absl::FailedPreconditionError(
          absl::StrCat("segment ", id, " area ", info.area,
                       " != pixel count ", count));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<CategoryRegistry> CategoryRegistry::Create(
    std::vector<Category> categories) {
  std::ranges::sort(categories, {}, &Category::id);
  for (std::size_t i = 1; i < categories.size(); ++i) {
    if (categories[i].id == categories[i - 1].id) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate category id ", categories[i].id));
    }
  }
  CategoryRegistry registry;
  registry.categories_ = std::move(categories);
  return registry;
}

int CategoryRegistry::IndexOf(int id) const {
  auto it = std::ranges::lower_bound(categories_, id, {}, &Category::id);
  if (it == categories_.end() || it->id != id) return -1;
  return static_cast<int>(it - categories_.begin());
}

std::optional<Category> CategoryRegistry::Find(int id) const {
  const int index = IndexOf(id);
  if (index < 0) return std::nullopt;
  return categories_[index];
}

std::vector<int> CategoryRegistry::ThingIds() const {
  std::vector<int> ids;
  for (const auto& c : categories_) {
    if (c.is_thing) ids.push_back(c.id);
  }
  return ids;
}

std::vector<int> CategoryRegistry::StuffIds() const {
  std::vector<int> ids;
  for (const auto& c : categories_) {
    if (!c.is_thing) ids.push_back(c.id);
  }
  return ids;
}

absl::Status CheckCategories(const PanopticResult& result,
                             const CategoryRegistry& registry) {
  for (const auto& [id, info] : result.table) {
    auto category = registry.Find(info.category_id);
    if (!category) {
      return absl::NotFoundError(absl::StrCat(
          "segment ", id, " has unknown category ", info.category_id));
    }
    if (category->is_thing != info.is_thing) {
      return absl::FailedPreconditionError(
          absl::StrCat("segment ", id, " thing flag disagrees with category ",
                       info.category_id));
    }
  }
  return absl::OkStatus();
}

}  // namespace silpan
