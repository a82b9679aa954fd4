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
#include "roofseg/kdtree.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace roofseg {

/// Plane in Hessian normal form: {q : normal . q + offset = 0}.
struct PlaneModel {
  Vec3 normal{0.0, 0.0, 1.0};
  double offset = 0.0;
  double rms_residual = 0.0;

  double signed_distance(const Point3& p) const {
    return normal.dot(p) + offset;
  }
};

/// Total least squares plane through the centroid. The normal is the
/// eigenvector of the smallest covariance eigenvalue.
///
/// Throws Error(DegenerateInput) for fewer than three points or when the
/// points are collinear (second covariance eigenvalue is zero relative to
/// the point spread).
PlaneModel fit_plane(std::span<const Point3> points);

/// Fits the subset `indices` of `points`.
PlaneModel fit_plane(std::span<const Point3> points,
                     std::span<const Index> indices);

double point_plane_distance(const Point3& p, const PlaneModel& plane);

/// Flips `n` so that z >= 0, ties resolved by y >= 0 then x >= 0.
Vec3 canonical_normal_sign(const Vec3& n);

/// Immutable 3D index answering kNN and radius queries.
class SpatialIndex {
 public:
  explicit SpatialIndex(std::span<const Point3> points);

  std::size_t size() const { return tree_.size(); }

  /// min(k, size()) nearest indices, ascending by distance, ties by index.
  std::vector<Index> knn(const Point3& query, std::size_t k) const;

  /// Indices within `radius` (inclusive), ascending by index.
  std::vector<Index> radius(const Point3& query, double radius) const;

 private:
  KdTree tree_;
};

struct NormalEstimate {
  std::vector<Vec3> normals;
  /// 1 where the neighborhood was degenerate; the normal is then zero.
  std::vector<std::uint8_t> degenerate;
  /// rms residual of each local fit (0 for degenerate neighborhoods).
  std::vector<double> residuals;
};

/// Per-point normal from the plane fit over the point's k nearest
/// neighbors (the point itself included), sign-normalized.
NormalEstimate estimate_normals(std::span<const Point3> points, std::size_t k);

/// Same, reusing a prebuilt index over `points`.
NormalEstimate estimate_normals(std::span<const Point3> points,
                                const SpatialIndex& index, std::size_t k);

}  // namespace roofseg
