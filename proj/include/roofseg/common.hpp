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

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace roofseg {

using Point3 = Eigen::Vector3d;
using Vec3 = Eigen::Vector3d;
using Index = std::int64_t;

/// Per-point class predicted by the classification head or derived from
/// ground truth. The integer values are part of the file formats.
enum class Semantic : std::uint8_t { NonRoof = 0, Boundary = 1, Plane = 2 };

std::string_view to_string(Semantic s);

enum class ErrorKind {
  DegenerateInput,
  InvalidSpec,
  MissingGroundTruth,
  EmptyInstance,
  LabelOutOfRange,
  LengthMismatch,
  NoInstances,
  TooManyInstances,
  FormatError,
  NoClusters,
  BothEmpty,
  EmptyGroundTruth,
  EmptyList,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A partition of point indices into plane instances plus the points that
/// were not assigned to any instance.
struct Segmentation {
  std::vector<std::vector<Index>> clusters;
  std::vector<Index> unassigned;

  std::size_t num_points() const;

  /// Dense per-point labels of length n: cluster position, or -1.
  std::vector<int> to_labels(std::size_t n) const;

  /// Inverse of to_labels. Label values are compacted in order of the
  /// smallest point index carrying them; negative labels become unassigned.
  static Segmentation from_labels(const std::vector<int>& labels);
};

/// True when both segmentations describe the same clusters in the same
/// order with identical membership, and the same unassigned set.
bool identical(const Segmentation& a, const Segmentation& b);

/// Set-level equality: the same clusters regardless of their order.
bool same_partition(const Segmentation& a, const Segmentation& b);

}  // namespace roofseg
