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

#pragma once

#include "roofseg/baselines.hpp"
#include "roofseg/cluster.hpp"
#include "roofseg/features.hpp"
#include "roofseg/gtlabel.hpp"
#include "roofseg/refine.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace roofseg {

enum class ProviderKind { Oracle, Handcrafted, File };

struct Provider {
  ProviderKind kind = ProviderKind::Oracle;
  std::string path;  // File only

  static Provider parse(std::string_view text);  // oracle | handcrafted | file:<path>
  std::string to_string() const;
};

/// Every tunable of the command-line pipeline. Serialized as `key = value`
/// lines; see config_keys() for the accepted keys.
struct PipelineConfig {
  ClusterParams cluster;
  RefineWeights refine;
  NoiseSpec noise;  // seed is derived per building from `seed`
  std::size_t k_boundary = kDefaultBoundaryK;
  Provider provider;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;  // 0 = hardware concurrency
  std::size_t embed_dim = kDefaultEmbedDim;
  std::size_t handcrafted_k = 16;
  bool boundary_aware = true;
  bool accelerated = true;
  RansacParams ransac;
  RegionGrowParams region_grow;
  std::size_t n_points = 2048;
  double clutter_fraction = 0.0;
};

/// Throws InvalidConfig naming the offending key.
void validate(const PipelineConfig& cfg);

const std::vector<std::string>& config_keys();

/// Sets one key from its textual value. Throws InvalidConfig for unknown
/// keys and unparsable values; does not run validate().
void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value);

/// Parses `key = value` lines on top of `base`, then validates.
PipelineConfig parse_config(std::istream& in, const std::string& source = "<stream>",
                            PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});
std::string format_config(const PipelineConfig& cfg);

/// Exit status for a failed command: 2 bad input, 3 algorithmic, 4 IO.
int exit_code(ErrorKind kind);

}  // namespace roofseg
