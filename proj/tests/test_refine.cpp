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

#include "roofseg/features.hpp"
#include "roofseg/refine.hpp"
#include "roofseg/random.hpp"

#include <gtest/gtest.h>

namespace roofseg {
namespace {

std::vector<Point3> flat_patch(Rng& rng, double z, double x0, std::size_t n) {
  std::vector<Point3> p;
  for (std::size_t i = 0; i < n; ++i) p.emplace_back(x0 + rng.uniform(0, 1), rng.uniform(0, 1), z);
  return p;
}

TEST(Refine, SummarizePatch) {
  Rng rng(1);
  const std::vector<Point3> p = flat_patch(rng, 2.0, 0.0, 50);
  RowMatrix f = RowMatrix::Zero(50, 2);
  f.col(0).setConstant(3.0);
  f(0, 1) = 50.0;
  const std::vector<Index> all = [] {
    std::vector<Index> v(50);
    for (Index i = 0; i < 50; ++i) v[static_cast<std::size_t>(i)] = i;
    return v;
  }();
  const PatchSummary s = summarize_patch(all, p, f);
  EXPECT_NEAR(s.embed_center(0), 3.0, 1e-15);
  EXPECT_NEAR(s.embed_center(1), 1.0, 1e-15);
  EXPECT_NEAR(point_plane_distance(Point3(7, -3, 2), s.plane), 0.0, 1e-12);
  EXPECT_NEAR(point_plane_distance(Point3(0, 0, 5), s.plane), 3.0, 1e-12);
  EXPECT_NEAR(assignment_distance(Point3(0, 0, 5), Eigen::RowVector2d(3, 5), s, {2.0, 0.5}), 2.0 * 3 + 0.5 * 4,
              1e-12);
}

TEST(Refine, NoiseFreeGableRecoversPartition) {
  for (RoofFamily f : kAllFamilies) {
    const PointCloud c = normalize(generate_building(random_roof_spec(f, 21), 2048, 0.0));
    const LabelSet l = derive_labels(c);
    const PredictionSet p = oracle_predictions(c, l, NoiseSpec{});
    Segmentation seg;
    seg.clusters.resize(static_cast<std::size_t>(c.gt->num_instances()));
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (l.semantic[i] == Semantic::Plane)
        seg.clusters[static_cast<std::size_t>(l.instance_id[i])].push_back(static_cast<Index>(i));
      else
        seg.unassigned.push_back(static_cast<Index>(i));
    }
    ASSERT_FALSE(seg.unassigned.empty());
    const Segmentation out = refine_boundaries(seg, c.points, p.embedding);
    EXPECT_TRUE(out.unassigned.empty());
    EXPECT_TRUE(same_partition(out, Segmentation::from_labels(c.gt->instance_id))) << to_string(f);
  }
}

TEST(Refine, TiesGoToLowestCluster) {
  Rng rng(2);
  std::vector<Point3> p = flat_patch(rng, 0.0, 0.0, 20);
  const auto q = flat_patch(rng, 0.0, 5.0, 20);
  p.insert(p.end(), q.begin(), q.end());
  p.emplace_back(2.5, 0.5, 0.0);
  const RowMatrix f = RowMatrix::Zero(41, 3);
  Segmentation seg;
  seg.clusters.resize(2);
  for (Index i = 0; i < 20; ++i) seg.clusters[1].push_back(i);
  for (Index i = 20; i < 40; ++i) seg.clusters[0].push_back(i);
  seg.unassigned = {40};
  const Segmentation out = refine_boundaries(seg, p, f);
  ASSERT_EQ(out.clusters.size(), 2u);
  EXPECT_EQ(out.clusters[0].back(), 40);
  EXPECT_EQ(out.clusters[1].size(), 20u);
}

TEST(Refine, WeightsSelectTheCue) {
  // Point 40 lies on plane A but carries the embedding of patch B.
  Rng rng(3);
  std::vector<Point3> p = flat_patch(rng, 0.0, 0.0, 20);
  const auto q = flat_patch(rng, 1.0, 0.0, 20);
  p.insert(p.end(), q.begin(), q.end());
  p.emplace_back(0.5, 0.5, 0.0);
  RowMatrix f = RowMatrix::Zero(41, 2);
  for (Index i = 20; i < 41; ++i) f(i, 1) = 1.0;
  Segmentation seg;
  seg.clusters.resize(2);
  for (Index i = 0; i < 40; ++i) seg.clusters[static_cast<std::size_t>(i / 20)].push_back(i);
  seg.unassigned = {40};
  EXPECT_EQ(refine_boundaries(seg, p, f, {1.0, 0.0}).to_labels(41)[40], 0);
  EXPECT_EQ(refine_boundaries(seg, p, f, {0.0, 1.0}).to_labels(41)[40], 1);
}

TEST(Refine, DegenerateClusterIsReassigned) {
  Rng rng(4);
  std::vector<Point3> p = flat_patch(rng, 0.0, 0.0, 30);
  for (int i = 0; i < 5; ++i) p.emplace_back(0.1 * i, 0.2, 0.0);  // collinear
  const RowMatrix f = RowMatrix::Zero(35, 2);
  Segmentation seg;
  seg.clusters.resize(2);
  for (Index i = 0; i < 30; ++i) seg.clusters[0].push_back(i);
  for (Index i = 30; i < 35; ++i) seg.clusters[1].push_back(i);
  const Segmentation out = refine_boundaries(seg, p, f);
  ASSERT_EQ(out.clusters.size(), 1u);
  EXPECT_EQ(out.clusters[0].size(), 35u);
}

TEST(Refine, Errors) {
  Rng rng(5);
  const std::vector<Point3> p = flat_patch(rng, 0.0, 0.0, 10);
  const RowMatrix f = RowMatrix::Zero(10, 2);
  Segmentation none;
  none.unassigned = {0, 1, 2};
  try {
    refine_boundaries(none, p, f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoClusters);
  }
  Segmentation collinear;
  collinear.clusters = {{0, 1}};
  EXPECT_THROW(refine_boundaries(collinear, p, f), Error);
  Segmentation ok;
  ok.clusters = {{0, 1, 2, 3, 4}};
  try {
    refine_boundaries(ok, p, RowMatrix::Zero(9, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
  }
  EXPECT_THROW(refine_boundaries(ok, p, f, {-1.0, 1.0}), Error);
}

}  // namespace
}  // namespace roofseg
