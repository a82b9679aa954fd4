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

// Dataset-level operations behind the roofseg command-line tool.

#pragma once

#include "roofseg/config.hpp"
#include "roofseg/io.hpp"
#include "roofseg/metrics.hpp"
#include "roofseg/pipeline.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace roofseg {

struct FamilyWeight {
  RoofFamily family;
  double weight = 1.0;
};

/// "gable:1,hip:2" (weights optional, default 1) or "all".
std::vector<FamilyWeight> parse_family_mix(std::string_view text);

/// Zero-padded id of the i-th synthesized building, e.g. "b00007".
std::string building_id(std::size_t index);

/// Per-building seed derived from the run seed and the building id.
std::uint64_t building_seed(std::uint64_t base, std::string_view id);

/// True for buildings in the held-out split (every 11th, starting at 0).
inline bool is_test_index(std::size_t index) { return index % 11 == 0; }

/// One labeled synthetic building in world units. `noise_sigma` defaults to
/// default_noise_sigma(spec); semantic labels are derived with k_boundary.
PointCloud synth_building(RoofFamily family, std::uint64_t seed, const PipelineConfig& cfg,
                          std::optional<double> noise_sigma = std::nullopt);

struct SynthOptions {
  fs::path out_dir;
  std::size_t n_buildings = 0;
  std::vector<FamilyWeight> mix;  // empty = every family, equal weights
  std::optional<double> noise_sigma;
};

/// Writes `<id>.cloud` per building and `manifest.txt`; returns the manifest.
std::vector<ManifestEntry> cmd_synth(const SynthOptions& opts, const PipelineConfig& cfg);

/// Predictions for `cloud` from the configured oracle or handcrafted
/// provider, in the cloud's own frame. Oracle requires ground truth.
PredictionSet make_predictions(const PointCloud& cloud, const PipelineConfig& cfg,
                               std::string_view id);

/// Loads or computes predictions according to cfg.provider and segments.
/// A file provider whose path is a directory reads `<dir>/<id>.pred`.
SegmentResult segment_cloud(const PointCloud& cloud, const PipelineConfig& cfg,
                            std::string_view id);

struct SegmentJob {
  fs::path cloud;
  fs::path out;
  std::optional<fs::path> colored;
};

/// Segments every job (concurrently up to cfg.jobs) and writes the outputs.
std::vector<SegmentResult> cmd_segment(const std::vector<SegmentJob>& jobs,
                                       const PipelineConfig& cfg);

/// Writes the configured provider's predictions for one cloud.
void cmd_predict(const fs::path& cloud, const fs::path& out, const PipelineConfig& cfg);

struct EvalRow {
  std::string id;
  MetricsReport report;
};

struct EvalReport {
  std::vector<EvalRow> rows;  // sorted by id
  MetricsReport aggregate;
};

/// Pairs segmentation and ground-truth cloud files by file stem. Throws
/// FormatError when the two sets of stems differ.
EvalReport cmd_eval(const std::vector<fs::path>& pred_files, const std::vector<fs::path>& gt_files,
                    std::size_t jobs = 1);

/// key=value lines (one per building, then the aggregate) followed by a
/// tab-separated table.
std::string format_eval_report(const EvalReport& report);

enum class Method { Ours, Ransac, RegionGrowing };

std::string_view to_string(Method m);
/// Comma-separated list of ours, ransac, region_growing.
std::vector<Method> parse_methods(std::string_view text);

/// Segments one labeled cloud with `method` and evaluates it against its
/// ground truth. Baselines run on the normalized cloud. A method that finds
/// no instance scores as an empty prediction.
MetricsReport run_method(Method method, const PointCloud& cloud, const PipelineConfig& cfg,
                         std::string_view id);

enum class Split { All, Train, Test };
Split parse_split(std::string_view text);

struct CompareTable {
  std::vector<Method> methods;
  std::vector<MetricsReport> aggregate;          // per method
  std::vector<std::vector<EvalRow>> per_building;  // per method, sorted by id
};

CompareTable cmd_compare(const fs::path& dataset_dir, const std::vector<Method>& methods,
                         const PipelineConfig& cfg, Split split = Split::All);

/// "Method  Cov  WCov  mPrec  mRec" rows, tab-separated, fixed 4 decimals.
std::string format_compare_table(const CompareTable& table);

/// Paths of all files in `dir` with the given extension, sorted.
std::vector<fs::path> list_files(const fs::path& dir, std::string_view extension);

}  // namespace roofseg
