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
#include "roofseg/geom.hpp"
#include "roofseg/losses.hpp"

#include <span>
#include <vector>

namespace roofseg {

struct PatchSummary {
  PlaneModel plane;
  Eigen::RowVectorXd embed_center;
};

/// Plane fit over the cluster's original (unshifted) coordinates and the
/// mean embedding. Throws DegenerateInput when the plane fit fails.
PatchSummary summarize_patch(std::span<const Index> cluster,
                             std::span<const Point3> points,
                             const RowMatrix& embeddings);

/// Relative weights of the two terms of the assignment distance. The
/// defaults add plane distance and embedding distance unweighted.
struct RefineWeights {
  double plane = 1.0;
  double embedding = 1.0;
};

/// plane * D(p, plane_k) + embedding * |f - center_k|.
double assignment_distance(const Point3& p, const Eigen::RowVectorXd& f,
                           const PatchSummary& patch, const RefineWeights& w);

/// Assigns every unassigned point to the patch of minimum assignment
/// distance (ties to the lowest cluster index). Summaries are computed once
/// from the incoming clusters and never updated. Clusters whose plane fit is
/// degenerate are dropped first and their points join the unassigned set.
///
/// Throws NoClusters when no usable cluster exists.
Segmentation refine_boundaries(const Segmentation& seg, std::span<const Point3> points,
                               const RowMatrix& embeddings,
                               const RefineWeights& weights = {});

}  // namespace roofseg
