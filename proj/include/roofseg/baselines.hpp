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

#include <cstdint>
#include <span>
#include <vector>

namespace roofseg {

// Distances below are in the units of the input cloud; the defaults
// assume a normalized (unit radius) cloud.

struct RansacParams {
  double dist_thresh = 0.04;
  std::size_t min_points = 50;
  std::size_t iterations = 500;
  std::uint64_t seed = 0;
};

struct RegionGrowParams {
  double angle_thresh_deg = 15.0;
  double dist_thresh = 0.06;
  std::size_t k = 30;
  std::size_t min_points = 50;
};

void validate(const RansacParams& p);
void validate(const RegionGrowParams& p);

/// Indices from `candidates` whose distance to `plane` is <= thresh.
std::vector<Index> plane_inliers(std::span<const Point3> points,
                                 std::span<const Index> candidates,
                                 const PlaneModel& plane, double thresh);

/// Sequential RANSAC: per round, `iterations` three-point hypotheses over the
/// remaining points; the hypothesis with most inliers (first wins ties) is
/// extracted if it has at least min_points inliers, otherwise extraction stops.
Segmentation ransac_segment(std::span<const Point3> points, const RansacParams& params);

/// Normal-based region growing over the kNN graph. Seeds are taken in order
/// of ascending local fit residual; a neighbor joins when its normal is
/// within angle_thresh of the region plane and it lies within dist_thresh
/// of that plane. The region plane is refit after every 32 accepted points.
/// Regions smaller than min_points are left unassigned.
Segmentation region_grow_segment(std::span<const Point3> points,
                                 const RegionGrowParams& params);

inline constexpr std::size_t kRegionRefitInterval = 32;

}  // namespace roofseg
