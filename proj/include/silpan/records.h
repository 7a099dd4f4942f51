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


#ifndef SILPAN_RECORDS_H_
#define SILPAN_RECORDS_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "silpan/grid.h"
#include "silpan/panoptic.h"
#include "silpan/scoring.h"

namespace silpan {

// Binary grid file: 8-byte magic "SPGRID01", then channels, height, width as
// little-endian uint32, then channel-major IEEE-754 float64 values, little
// endian.
std::string EncodeGrid(const DenseGrid3& grid);
absl::StatusOr<DenseGrid3> DecodeGrid(const std::string& bytes);
absl::Status SaveGrid(const DenseGrid3& grid, const std::string& path);
absl::StatusOr<DenseGrid3> LoadGrid(const std::string& path);

// {"categories": [{"id", "name", "is_thing"}, ...]}
std::string CategoriesToJson(const CategoryRegistry& registry);
absl::StatusOr<CategoryRegistry> CategoriesFromJson(const std::string& text);

// Detection / instance interchange record. `attention` and `mask` are
// optional; missing iou_score defaults to fcos_score and missing
// silhouette_score to 1.
struct InstanceRecord {
  Detection detection;
  double iou_score = 0.0;
  double silhouette_score = 1.0;
  std::optional<double> mask_score;
  std::string mask_path;  // gray PNG, relative to the record file
};

struct InstanceFile {
  int height = 0;
  int width = 0;
  std::vector<InstanceRecord> records;
};

std::string InstanceFileToJson(const InstanceFile& file);
absl::StatusOr<InstanceFile> InstanceFileFromJson(const std::string& text);

// Writes `<dir>/instances.json` and one `<dir>/mask_NNNN.png` per instance.
absl::Status SaveInstances(const std::vector<ScoredInstance>& instances,
                           int height, int width, const std::string& dir);

// Reads an instance file and the masks it references. Mask probabilities
// are reconstructed as 0/1 from the binary rasters.
absl::StatusOr<std::vector<ScoredInstance>> LoadInstances(
    const std::string& json_path, double alpha);

}  // namespace silpan

#endif  // SILPAN_RECORDS_H_
