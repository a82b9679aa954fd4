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

#include "roofseg/common.hpp"
#include "roofseg/synthgen.hpp"

#include <vector>

namespace roofseg {

inline constexpr std::size_t kDefaultBoundaryK = 8;

/// Supervision derived from ground truth.
struct LabelSet {
  std::vector<Semantic> semantic;
  /// Vector from each roof point to its instance centroid; zero for non-roof.
  std::vector<Vec3> offset;
  std::vector<int> instance_id;

  std::size_t size() const { return semantic.size(); }
};

/// Number of instances referenced by the ground truth: the larger of the
/// face plane count and max(instance_id) + 1.
int instance_count(const GroundTruth& gt);

/// Arithmetic mean of each instance's points, indexed by instance id.
/// Throws EmptyInstance if some id in [0, instance_count) has no points.
std::vector<Point3> instance_centers(const PointCloud& cloud);

/// Labels roof points Boundary when any of their k nearest roof neighbors
/// (the point itself excluded, non-roof points excluded from the search)
/// carries a different instance id, Plane otherwise. Non-roof points are
/// NonRoof with a zero offset.
LabelSet derive_labels(const PointCloud& cloud,
                       std::size_t k_boundary = kDefaultBoundaryK);

/// Copies the derived semantics into cloud.gt->semantic.
void attach_labels(PointCloud& cloud, const LabelSet& labels);

}  // namespace roofseg
