// Copyright 2026 The roofseg Authors.
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

// Plain-text interchange formats. All files allow '#' comment lines and
// blank lines anywhere; floats are written in shortest round-trip form.
//
//   cloud         pointcloud v1 N=<n> [labeled]
//                 x y z [instance_id semantic]          (N records)
//   predictions   predictions v1 N=<n> D=<d>
//                 semantic dx dy dz f_1 ... f_D         (N records)
//   segmentation  segmentation v1 N=<n> M=<m>
//                 instance_id                           (N records, -1 = none)
//   manifest      <building_id> <relative_path> <train|test>

#pragma once

#include "roofseg/common.hpp"
#include "roofseg/features.hpp"
#include "roofseg/synthgen.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace roofseg {

namespace fs = std::filesystem;

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const fs::path& path, const std::string& contents);

std::string format_cloud(const PointCloud& cloud);
PointCloud parse_cloud(std::istream& in, const std::string& source = "<stream>");
void save_cloud(const PointCloud& cloud, const fs::path& path);
PointCloud load_cloud(const fs::path& path);

std::string format_predictions(const PredictionSet& pred);
PredictionSet parse_predictions(std::istream& in, const std::string& source = "<stream>");
void save_predictions(const PredictionSet& pred, const fs::path& path);
PredictionSet load_predictions(const fs::path& path);

std::string format_segmentation(const std::vector<int>& labels);
/// Per-point ids; validates ids against the header's M.
std::vector<int> parse_segmentation(std::istream& in, const std::string& source = "<stream>");
void save_segmentation(const std::vector<int>& labels, const fs::path& path);
std::vector<int> load_segmentation(const fs::path& path);

struct ManifestEntry {
  std::string building_id;
  std::string relative_path;
  bool test = false;
};

std::string format_manifest(const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::string& source = "<stream>");
std::vector<ManifestEntry> load_manifest(const fs::path& path);

/// "x y z r g b" per point, one color per instance (grey for -1).
std::string format_colored(std::span<const Point3> points, const std::vector<int>& labels);

}  // namespace roofseg
