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

#include "roofseg/cluster.hpp"
#include "roofseg/features.hpp"
#include "roofseg/refine.hpp"

#include <span>
#include <vector>

namespace roofseg {

struct SegmentOptions {
  ClusterParams cluster;
  RefineWeights refine;
  /// When true only Plane points are clustered and the rest of the roof
  /// points are attached by refinement. When false every roof point
  /// (Plane and Boundary) is clustered and nothing is refined.
  bool boundary_aware = true;
  /// Use the kd-tree clustering (identical output, faster).
  bool accelerated = true;
};

struct SegmentResult {
  /// Over input point indices. NonRoof-classified points, and roof points
  /// left unclustered, are listed in `unassigned`.
  Segmentation segmentation;
  /// Clusters before refinement, over input point indices.
  Segmentation clustered;
  std::size_t n_plane = 0, n_boundary = 0, n_nonroof = 0;

  /// Per-point instance id, -1 for dropped or unassigned points.
  std::vector<int> labels() const;
};

/// Runs one building through classify-filter, shift, cluster and refine.
///
/// Points and predicted offsets share a frame (e.g. meters). Both are
/// mapped to the unit-radius frame of `points` before clustering so the
/// radius and weights are scale-free; embeddings are used as given.
///
/// Throws NoClusters (boundary-aware mode) when clustering finds nothing.
SegmentResult segment_building(std::span<const Point3> points, const PredictionSet& pred,
                               const SegmentOptions& options = {});

}  // namespace roofseg
