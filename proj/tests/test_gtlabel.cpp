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

#include "roofseg/gtlabel.hpp"
#include "roofseg/random.hpp"

#include <gtest/gtest.h>

namespace roofseg {
namespace {

PointCloud labeled(std::vector<Point3> pts, std::vector<int> ids) {
  PointCloud c;
  c.points = std::move(pts);
  c.gt = GroundTruth{};
  c.gt->instance_id = std::move(ids);
  return c;
}

TEST(Centers, Examples) {
  const PointCloud c = labeled({{0, 0, 0}, {2, 0, 0}, {5, 5, 5}}, {0, 0, 1});
  const auto centers = instance_centers(c);
  ASSERT_EQ(centers.size(), 2u);
  EXPECT_EQ(centers[0], Point3(1, 0, 0));
  EXPECT_EQ(centers[1], Point3(5, 5, 5));
}

TEST(Centers, EmptyInstanceRejected) {
  const PointCloud c = labeled({{0, 0, 0}, {1, 1, 1}}, {0, 2});
  try {
    instance_centers(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyInstance);
  }
}

TEST(Centers, PyramidFacesEquidistantFromApexAxis) {
  RoofSpec spec;
  spec.family = RoofFamily::Pyramid;
  spec.width = spec.depth = 10.0;
  spec.seed = 3;
  const PointCloud c = generate_building(spec, 20000, 0.0);
  const auto centers = instance_centers(c);
  // The apex axis is the vertical line through the footprint center.
  Vec3 mid = Vec3::Zero();
  for (const auto& p : centers) mid += p;
  mid /= 4.0;
  std::vector<double> r;
  for (const auto& p : centers) r.push_back(std::hypot(p.x() - mid.x(), p.y() - mid.y()));
  for (double v : r) EXPECT_NEAR(v, r[0], 0.03 * r[0]);
}

TEST(Labels, SingleInstanceHasNoBoundary) {
  Rng rng(1);
  std::vector<Point3> pts;
  for (int i = 0; i < 300; ++i) pts.emplace_back(rng.uniform(0, 1), rng.uniform(0, 1), 0);
  const LabelSet l = derive_labels(labeled(pts, std::vector<int>(300, 0)));
  for (Semantic s : l.semantic) EXPECT_EQ(s, Semantic::Plane);
}

TEST(Labels, OffsetsPointAtCenters) {
  for (RoofFamily f : kAllFamilies) {
    PointCloud c = generate_building(random_roof_spec(f, 5), 1500, 0.05);
    c = add_nonroof_clutter(c, 0.1, 2);
    const LabelSet l = derive_labels(c);
    const auto centers = instance_centers(c);
    std::vector<Vec3> sum(centers.size(), Vec3::Zero());
    std::vector<std::size_t> count(centers.size(), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const int id = c.gt->instance_id[i];
      EXPECT_EQ(l.instance_id[i], id);
      if (id < 0) {
        EXPECT_EQ(l.semantic[i], Semantic::NonRoof);
        EXPECT_EQ(l.offset[i], Vec3::Zero());
        continue;
      }
      EXPECT_NE(l.semantic[i], Semantic::NonRoof);
      EXPECT_NEAR((c.points[i] + l.offset[i] - centers[static_cast<std::size_t>(id)]).norm(), 0.0, 1e-9);
      sum[static_cast<std::size_t>(id)] += l.offset[i];
      ++count[static_cast<std::size_t>(id)];
    }
    for (std::size_t k = 0; k < sum.size(); ++k) EXPECT_LE(sum[k].norm(), 1e-6 * static_cast<double>(count[k]));
  }
}

TEST(Labels, BoundaryMatchesExhaustiveOracle) {
  for (RoofFamily f : kAllFamilies)
    for (std::size_t k : {2u, 5u, 8u, 16u}) {
      PointCloud c = generate_building(random_roof_spec(f, 100 + k), 1200, k % 2 ? 0.0 : 0.05);
      if (k == 8) c = add_nonroof_clutter(c, 0.3, 1);
      const LabelSet l = derive_labels(c, k);
      const auto expect = oracle::boundary_flags(c.points, c.gt->instance_id, k);
      for (std::size_t i = 0; i < c.size(); ++i)
        ASSERT_EQ(l.semantic[i] == Semantic::Boundary, expect[i]) << to_string(f) << " k=" << k << " i=" << i;
    }
}

TEST(Labels, ClutterDoesNotChangeRoofLabels) {
  const PointCloud c = generate_building(random_roof_spec(RoofFamily::Hip, 6), 1500, 0.05);
  const LabelSet before = derive_labels(c);
  const LabelSet after = derive_labels(add_nonroof_clutter(c, 0.5, 3));
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(before.semantic[i], after.semantic[i]);
}

TEST(Labels, MonotoneInK) {
  const PointCloud c = generate_building(random_roof_spec(RoofFamily::CrossGable, 7), 2048, 0.05);
  LabelSet prev = derive_labels(c, 2);
  for (std::size_t k = 3; k <= 20; ++k) {
    const LabelSet cur = derive_labels(c, k);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (prev.semantic[i] == Semantic::Boundary) EXPECT_EQ(cur.semantic[i], Semantic::Boundary);
    prev = cur;
  }
}

TEST(Labels, InvariantUnderIdPermutation) {
  PointCloud c = generate_building(random_roof_spec(RoofFamily::MansardLike, 8), 1500, 0.05);
  const LabelSet base = derive_labels(c);
  const std::vector<int> perm = {2, 0, 3, 1};
  for (int& id : c.gt->instance_id) id = perm[static_cast<std::size_t>(id)];
  const LabelSet permuted = derive_labels(c);
  EXPECT_EQ(base.semantic, permuted.semantic);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR((base.offset[i] - permuted.offset[i]).norm(), 0.0, 1e-12);
}

TEST(Labels, Errors) {
  PointCloud c;
  c.points = {{0, 0, 0}};
  try {
    derive_labels(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingGroundTruth);
  }
  const PointCloud ok = labeled({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {0, 0, 0});
  EXPECT_THROW(derive_labels(ok, 1), Error);
}

TEST(Labels, AttachStoresSemantics) {
  PointCloud c = generate_building(random_roof_spec(RoofFamily::Gable, 9), 500, 0.0);
  const LabelSet l = derive_labels(c);
  attach_labels(c, l);
  EXPECT_EQ(c.gt->semantic, l.semantic);
}

}  // namespace
}  // namespace roofseg
