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


#include "oracles.hpp"

#include "roofseg/baselines.hpp"
#include "roofseg/metrics.hpp"
#include "roofseg/random.hpp"
#include "roofseg/synthgen.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include <numeric>

namespace roofseg {
namespace {

std::vector<Point3> plane_points(Rng& rng, const Vec3& normal, double offset, std::size_t n, double noise = 0.0) {
  const Vec3 nrm = normal.normalized();
  const Vec3 u = nrm.unitOrthogonal(), v = nrm.cross(u);
  std::vector<Point3> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(-offset * nrm + rng.uniform(-1, 1) * u + rng.uniform(-1, 1) * v + rng.normal(0, noise) * nrm);
  return out;
}

TEST(PlaneInliers, MatchesLinearScan) {
  Rng rng(1);
  std::vector<Point3> p;
  for (int i = 0; i < 500; ++i) p.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.2, 0.2));
  std::vector<Index> cand;
  for (Index i = 0; i < 500; i += 2) cand.push_back(i);
  PlaneModel h;
  h.normal = Vec3(0.1, 0.0, 1.0).normalized();
  h.offset = 0.01;
  const auto got = plane_inliers(p, cand, h, 0.05);
  std::vector<Index> want;
  for (Index i : cand)
    if (std::abs(h.normal.dot(p[static_cast<std::size_t>(i)]) + h.offset) <= 0.05) want.push_back(i);
  EXPECT_EQ(got, want);
}

TEST(Ransac, SinglePlaneIsOneCluster) {
  Rng rng(2);
  const auto p = plane_points(rng, Vec3(0.3, -0.2, 1.0), 0.5, 400, 0.005);
  const Segmentation seg = ransac_segment(p, RansacParams{});
  ASSERT_EQ(seg.clusters.size(), 1u);
  EXPECT_EQ(seg.clusters[0].size(), 400u);
  EXPECT_TRUE(seg.unassigned.empty());
}

TEST(Ransac, TwoParallelPlanes) {
  Rng rng(3);
  auto p = plane_points(rng, Vec3::UnitZ(), 0.0, 300);
  const auto q = plane_points(rng, Vec3::UnitZ(), -0.5, 200);
  p.insert(p.end(), q.begin(), q.end());
  std::vector<int> gt(500, 0);
  std::fill(gt.begin() + 300, gt.end(), 1);
  const Segmentation seg = ransac_segment(p, RansacParams{});
  ASSERT_EQ(seg.clusters.size(), 2u);
  EXPECT_EQ(seg.clusters[0].size(), 300u);
  EXPECT_EQ(evaluate(seg, gt).cov, 1.0);
}

TEST(Ransac, DeterministicForSeed) {
  const PointCloud c = normalize(generate_building(random_roof_spec(RoofFamily::Hip, 4), 1500, 0.01));
  RansacParams params;
  params.seed = 17;
  const Segmentation a = ransac_segment(c.points, params), b = ransac_segment(c.points, params);
  EXPECT_TRUE(identical(a, b));
  std::size_t total = a.unassigned.size();
  for (const auto& cl : a.clusters) total += cl.size();
  EXPECT_EQ(total, c.size());
}

TEST(Ransac, ClustersAreInliersOfTheirFit) {
  const PointCloud c = normalize(generate_building(random_roof_spec(RoofFamily::Gable, 5), 1200, 0.0));
  RansacParams params;
  const Segmentation seg = ransac_segment(c.points, params);
  ASSERT_FALSE(seg.clusters.empty());
  for (const auto& cl : seg.clusters) {
    EXPECT_GE(cl.size(), params.min_points);
    EXPECT_TRUE(std::is_sorted(cl.begin(), cl.end()));
  }
}

TEST(Ransac, TooFewPoints) {
  Rng rng(6);
  const auto p = plane_points(rng, Vec3::UnitZ(), 0.0, 20);
  const Segmentation seg = ransac_segment(p, RansacParams{});
  EXPECT_TRUE(seg.clusters.empty());
  EXPECT_EQ(seg.unassigned.size(), 20u);
  RansacParams bad;
  bad.dist_thresh = 0.0;
  EXPECT_THROW(ransac_segment(p, bad), Error);
}

TEST(RegionGrow, SinglePlane) {
  Rng rng(7);
  const auto p = plane_points(rng, Vec3(0.0, 0.4, 1.0), 0.2, 600);
  const Segmentation seg = region_grow_segment(p, RegionGrowParams{});
  ASSERT_EQ(seg.clusters.size(), 1u);
  EXPECT_EQ(seg.clusters[0].size(), 600u);
}

TEST(RegionGrow, GableSplitsAtRidge) {
  const PointCloud c = normalize(generate_building(random_roof_spec(RoofFamily::Gable, 8), 2048, 0.0));
  const Segmentation seg = region_grow_segment(c.points, RegionGrowParams{});
  ASSERT_EQ(seg.clusters.size(), 2u);
  const MetricsReport r = evaluate(seg, c.gt->instance_id);
  EXPECT_GT(r.cov, 0.9);
  EXPECT_EQ(r.mrec, 1.0);
  // Unassigned points lie in a band along the ridge.
  for (Index i : seg.unassigned) {
    const Point3& x = c.points[static_cast<std::size_t>(i)];
    const double d0 = point_plane_distance(x, c.gt->face_planes[0]);
    const double d1 = point_plane_distance(x, c.gt->face_planes[1]);
    EXPECT_LT(std::max(d0, d1), 0.2);
  }
}

TEST(RegionGrow, DeterministicAndComplete) {
  const PointCloud c = normalize(generate_building(random_roof_spec(RoofFamily::CrossGable, 9), 1500, 0.01));
  const Segmentation a = region_grow_segment(c.points, RegionGrowParams{});
  EXPECT_TRUE(identical(a, region_grow_segment(c.points, RegionGrowParams{})));
  std::vector<int> seen(c.size(), 0);
  for (const auto& cl : a.clusters)
    for (Index i : cl) ++seen[static_cast<std::size_t>(i)];
  for (Index i : a.unassigned) ++seen[static_cast<std::size_t>(i)];
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(RegionGrow, EmptyAndInvalid) {
  EXPECT_TRUE(region_grow_segment({}, RegionGrowParams{}).clusters.empty());
  RegionGrowParams bad;
  bad.angle_thresh_deg = 90.0;
  EXPECT_THROW(region_grow_segment({}, bad), Error);
  bad = RegionGrowParams{};
  bad.k = 2;
  EXPECT_THROW(region_grow_segment({}, bad), Error);
}

}  // namespace
}  // namespace roofseg
