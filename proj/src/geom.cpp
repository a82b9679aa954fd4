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

#include "roofseg/geom.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace roofseg {

namespace {

// Relative eigenvalue threshold below which the point spread is treated as
// one-dimensional.
constexpr double kCollinearTol = 1e-12;

template <typename Get>
PlaneModel fit_plane_impl(std::size_t n, Get&& get) {
  if (n < 3)
    throw Error(ErrorKind::DegenerateInput,
                "plane fit needs at least 3 points, got " + std::to_string(n));

  Vec3 centroid = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) centroid += get(i);
  centroid /= static_cast<double>(n);

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 d = get(i) - centroid;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  const Vec3 ev = solver.eigenvalues();  // ascending
  if (!(ev(2) > 0.0) || ev(1) <= kCollinearTol * ev(2))
    throw Error(ErrorKind::DegenerateInput, "points are collinear or coincident");

  PlaneModel plane;
  plane.normal = canonical_normal_sign(solver.eigenvectors().col(0).normalized());
  plane.offset = -plane.normal.dot(centroid);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = plane.normal.dot(get(i) - centroid);
    sum_sq += r * r;
  }
  plane.rms_residual = std::sqrt(sum_sq / static_cast<double>(n));
  return plane;
}

}  // namespace

PlaneModel fit_plane(std::span<const Point3> points) {
  return fit_plane_impl(points.size(),
                        [&](std::size_t i) -> const Point3& { return points[i]; });
}

PlaneModel fit_plane(std::span<const Point3> points,
                     std::span<const Index> indices) {
  return fit_plane_impl(indices.size(), [&](std::size_t i) -> const Point3& {
    return points[static_cast<std::size_t>(indices[i])];
  });
}

double point_plane_distance(const Point3& p, const PlaneModel& plane) {
  return std::abs(plane.signed_distance(p));
}

Vec3 canonical_normal_sign(const Vec3& n) {
  bool flip = false;
  if (n.z() != 0.0)
    flip = n.z() < 0.0;
  else if (n.y() != 0.0)
    flip = n.y() < 0.0;
  else
    flip = n.x() < 0.0;
  return flip ? Vec3(-n) : n;
}

SpatialIndex::SpatialIndex(std::span<const Point3> points) {
  std::vector<double> flat;
  flat.reserve(points.size() * 3);
  for (const auto& p : points) {
    flat.push_back(p.x());
    flat.push_back(p.y());
    flat.push_back(p.z());
  }
  tree_ = KdTree(std::move(flat), 3);
}

std::vector<Index> SpatialIndex::knn(const Point3& query, std::size_t k) const {
  const double q[3] = {query.x(), query.y(), query.z()};
  return tree_.knn(q, k);
}

std::vector<Index> SpatialIndex::radius(const Point3& query,
                                        double radius) const {
  const double q[3] = {query.x(), query.y(), query.z()};
  return tree_.radius(q, radius * radius);
}

NormalEstimate estimate_normals(std::span<const Point3> points, std::size_t k) {
  return estimate_normals(points, SpatialIndex(points), k);
}

NormalEstimate estimate_normals(std::span<const Point3> points,
                                const SpatialIndex& index, std::size_t k) {
  if (k < 3)
    throw Error(ErrorKind::InvalidConfig, "normal estimation needs k >= 3");
  NormalEstimate out;
  out.normals.assign(points.size(), Vec3::Zero());
  out.degenerate.assign(points.size(), 0);
  out.residuals.assign(points.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto nbrs = index.knn(points[i], k);
    try {
      const PlaneModel plane = fit_plane(points, nbrs);
      out.normals[i] = plane.normal;
      out.residuals[i] = plane.rms_residual;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateInput) throw;
      out.degenerate[i] = 1;
    }
  }
  return out;
}

}  // namespace roofseg
