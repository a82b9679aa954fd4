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

#include "roofseg/baselines.hpp"

#include "roofseg/random.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>

namespace roofseg {

void validate(const RansacParams& p) {
  if (!(p.dist_thresh > 0.0)) throw Error(ErrorKind::InvalidConfig, "ransac dist_thresh must be > 0");
  if (p.iterations < 1) throw Error(ErrorKind::InvalidConfig, "ransac iterations must be >= 1");
}

void validate(const RegionGrowParams& p) {
  if (!(p.angle_thresh_deg > 0.0 && p.angle_thresh_deg < 90.0))
    throw Error(ErrorKind::InvalidConfig, "region growing angle must lie in (0, 90)");
  if (!(p.dist_thresh > 0.0))
    throw Error(ErrorKind::InvalidConfig, "region growing dist_thresh must be > 0");
  if (p.k < 3) throw Error(ErrorKind::InvalidConfig, "region growing k must be >= 3");
}

std::vector<Index> plane_inliers(std::span<const Point3> points,
                                 std::span<const Index> candidates,
                                 const PlaneModel& plane, double thresh) {
  std::vector<Index> out;
  for (Index i : candidates)
    if (point_plane_distance(points[static_cast<std::size_t>(i)], plane) <= thresh)
      out.push_back(i);
  return out;
}

Segmentation ransac_segment(std::span<const Point3> points, const RansacParams& params) {
  validate(params);
  Segmentation seg;
  std::vector<Index> remaining(points.size());
  std::iota(remaining.begin(), remaining.end(), Index{0});
  Rng rng(derive_seed(params.seed, 0x5ac));

  const std::size_t min_points = std::max<std::size_t>(params.min_points, 3);
  while (remaining.size() >= min_points) {
    const std::size_t m = remaining.size();
    std::size_t best_count = 0;
    PlaneModel best;
    for (std::size_t it = 0; it < params.iterations; ++it) {
      const std::uint64_t a = rng.below(m);
      std::uint64_t b = rng.below(m), c = rng.below(m);
      if (a == b || a == c || b == c) continue;
      const Point3& pa = points[static_cast<std::size_t>(remaining[a])];
      const Point3& pb = points[static_cast<std::size_t>(remaining[b])];
      const Point3& pc = points[static_cast<std::size_t>(remaining[c])];
      const Vec3 cross = (pb - pa).cross(pc - pa);
      const double norm = cross.norm();
      if (!(norm > 1e-12 * (pb - pa).squaredNorm() + 1e-300)) continue;
      PlaneModel h;
      h.normal = canonical_normal_sign(cross / norm);
      h.offset = -h.normal.dot(pa);
      std::size_t count = 0;
      for (Index i : remaining)
        if (point_plane_distance(points[static_cast<std::size_t>(i)], h) <= params.dist_thresh)
          ++count;
      if (count > best_count) {
        best_count = count;
        best = h;
      }
    }
    if (best_count < min_points) break;
    auto inliers = plane_inliers(points, remaining, best, params.dist_thresh);
    std::vector<Index> rest;
    std::set_difference(remaining.begin(), remaining.end(), inliers.begin(),
                        inliers.end(), std::back_inserter(rest));
    seg.clusters.push_back(std::move(inliers));
    remaining = std::move(rest);
  }
  seg.unassigned = std::move(remaining);
  return seg;
}

Segmentation region_grow_segment(std::span<const Point3> points,
                                 const RegionGrowParams& params) {
  validate(params);
  const std::size_t n = points.size();
  Segmentation seg;
  if (n == 0) return seg;

  const SpatialIndex index(points);
  const NormalEstimate est = estimate_normals(points, index, params.k);
  const double cos_limit = std::cos(params.angle_thresh_deg * std::numbers::pi / 180.0);

  std::vector<Index> seeds;
  for (std::size_t i = 0; i < n; ++i)
    if (!est.degenerate[i]) seeds.push_back(static_cast<Index>(i));
  std::stable_sort(seeds.begin(), seeds.end(), [&](Index a, Index b) {
    return est.residuals[static_cast<std::size_t>(a)] < est.residuals[static_cast<std::size_t>(b)];
  });

  std::vector<char> used(n, 0);
  std::vector<Index> region;
  std::deque<Index> queue;
  for (Index seed : seeds) {
    if (used[static_cast<std::size_t>(seed)]) continue;
    const Point3& ps = points[static_cast<std::size_t>(seed)];
    PlaneModel plane;
    plane.normal = est.normals[static_cast<std::size_t>(seed)];
    plane.offset = -plane.normal.dot(ps);

    region.assign(1, seed);
    used[static_cast<std::size_t>(seed)] = 1;
    queue.assign(1, seed);
    std::size_t since_refit = 0;
    while (!queue.empty()) {
      const Index cur = queue.front();
      queue.pop_front();
      for (Index q : index.knn(points[static_cast<std::size_t>(cur)], params.k)) {
        const auto qi = static_cast<std::size_t>(q);
        if (used[qi] || est.degenerate[qi]) continue;
        if (std::abs(est.normals[qi].dot(plane.normal)) < cos_limit) continue;
        if (point_plane_distance(points[qi], plane) >= params.dist_thresh) continue;
        used[qi] = 1;
        region.push_back(q);
        queue.push_back(q);
        if (++since_refit == kRegionRefitInterval) {
          since_refit = 0;
          try {
            plane = fit_plane(points, region);
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::DegenerateInput) throw;
          }
        }
      }
    }
    std::sort(region.begin(), region.end());
    if (region.size() >= params.min_points)
      seg.clusters.push_back(region);
    else
      seg.unassigned.insert(seg.unassigned.end(), region.begin(), region.end());
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!used[i]) seg.unassigned.push_back(static_cast<Index>(i));
  std::sort(seg.unassigned.begin(), seg.unassigned.end());
  return seg;
}

}  // namespace roofseg
