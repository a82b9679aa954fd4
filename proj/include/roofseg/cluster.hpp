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
#include "roofseg/losses.hpp"

#include <span>
#include <vector>

namespace roofseg {

/// Parameters of the joint Euclidean / embedding space flood fill.
struct ClusterParams {
  double radius = 0.5;  ///< joint-space threshold r
  double w1 = 0.1;      ///< weight of the distance between shifted points
  double w2 = 0.9;      ///< weight of the embedding distance
  /// Clusters with size <= min_cluster_size are dissolved.
  std::size_t min_cluster_size = 100;
};

void validate(const ClusterParams& params);

/// p + offset, elementwise.
std::vector<Point3> shift_points(std::span<const Point3> points,
                                 std::span<const Vec3> offsets);

/// w1 * |p_i - p_j| + w2 * |f_i - f_j|. Both clustering routines evaluate
/// edges through this function so they agree bit-for-bit.
double joint_distance(std::span<const Point3> shifted, const RowMatrix& embeddings,
                      const ClusterParams& params, Index i, Index j);

/// Direct transcription of the flood fill: ascending seed scan, FIFO queue,
/// and a full scan of unvisited points for every dequeued point. O(N^2).
///
/// Output clusters are ordered by seed index, members ascending; points of
/// dissolved clusters are listed in `unassigned` (ascending).
Segmentation cluster_points(std::span<const Point3> shifted,
                            const RowMatrix& embeddings,
                            const ClusterParams& params);

/// Same result as cluster_points, with neighbor candidates drawn from a
/// kd-tree over the concatenated space [w1 * p, w2 * f]. Since
/// |(w1 dp, w2 df)| <= w1 |dp| + w2 |df|, every joint-space edge is inside
/// the radius-r ball of that space; candidates are then checked exactly.
Segmentation cluster_points_accelerated(std::span<const Point3> shifted,
                                        const RowMatrix& embeddings,
                                        const ClusterParams& params);

}  // namespace roofseg
