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

#include "roofseg/cluster.hpp"

#include "roofseg/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace roofseg {

void validate(const ClusterParams& p) {
  if (!(p.radius > 0.0)) throw Error(ErrorKind::InvalidConfig, "cluster radius must be > 0");
  if (!(p.w1 >= 0.0) || !(p.w2 >= 0.0) || !(p.w1 + p.w2 > 0.0))
    throw Error(ErrorKind::InvalidConfig, "weights must be >= 0 with a positive sum");
  if (p.min_cluster_size < 1)
    throw Error(ErrorKind::InvalidConfig, "min cluster size must be >= 1");
}

std::vector<Point3> shift_points(std::span<const Point3> points,
                                 std::span<const Vec3> offsets) {
  if (points.size() != offsets.size())
    throw Error(ErrorKind::LengthMismatch,
                "points (" + std::to_string(points.size()) + ") and offsets (" +
                    std::to_string(offsets.size()) + ") differ in length");
  std::vector<Point3> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = points[i] + offsets[i];
  return out;
}

double joint_distance(std::span<const Point3> shifted, const RowMatrix& embeddings,
                      const ClusterParams& params, Index i, Index j) {
  const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
  const double de = (shifted[a] - shifted[b]).norm();
  double sq = 0.0;
  for (Eigen::Index d = 0; d < embeddings.cols(); ++d) {
    const double diff = embeddings(i, d) - embeddings(j, d);
    sq += diff * diff;
  }
  return params.w1 * de + params.w2 * std::sqrt(sq);
}

namespace {

void check_inputs(std::span<const Point3> shifted, const RowMatrix& embeddings,
                  const ClusterParams& params) {
  validate(params);
  if (static_cast<std::size_t>(embeddings.rows()) != shifted.size())
    throw Error(ErrorKind::LengthMismatch,
                "shifted points (" + std::to_string(shifted.size()) +
                    ") and embeddings (" + std::to_string(embeddings.rows()) +
                    ") differ in length");
}

// Appends `cluster` to `seg` when large enough, else to the unassigned set.
void emit(Segmentation& seg, std::vector<Index>& cluster, std::size_t min_size) {
  std::sort(cluster.begin(), cluster.end());
  if (cluster.size() > min_size)
    seg.clusters.push_back(std::move(cluster));
  else
    seg.unassigned.insert(seg.unassigned.end(), cluster.begin(), cluster.end());
  cluster.clear();
}

}  // namespace

Segmentation cluster_points(std::span<const Point3> shifted,
                            const RowMatrix& embeddings,
                            const ClusterParams& params) {
  check_inputs(shifted, embeddings, params);
  const auto n = static_cast<Index>(shifted.size());
  std::vector<char> visited(shifted.size(), 0);
  Segmentation seg;
  std::vector<Index> cluster;
  std::deque<Index> queue;
  for (Index i = 0; i < n; ++i) {
    if (visited[i]) continue;
    visited[i] = 1;
    queue.push_back(i);
    cluster.push_back(i);
    while (!queue.empty()) {
      const Index k = queue.front();
      queue.pop_front();
      for (Index j = 0; j < n; ++j) {
        if (visited[j]) continue;
        if (joint_distance(shifted, embeddings, params, j, k) < params.radius) {
          visited[j] = 1;
          queue.push_back(j);
          cluster.push_back(j);
        }
      }
    }
    emit(seg, cluster, params.min_cluster_size);
  }
  std::sort(seg.unassigned.begin(), seg.unassigned.end());
  return seg;
}

Segmentation cluster_points_accelerated(std::span<const Point3> shifted,
                                        const RowMatrix& embeddings,
                                        const ClusterParams& params) {
  check_inputs(shifted, embeddings, params);
  const std::size_t n = shifted.size();
  const auto dim_f = static_cast<std::size_t>(embeddings.cols());
  const std::size_t dim = 3 + dim_f;

  std::vector<double> joint(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = joint.data() + i * dim;
    for (int a = 0; a < 3; ++a) row[a] = params.w1 * shifted[i](a);
    for (std::size_t d = 0; d < dim_f; ++d)
      row[3 + d] = params.w2 * embeddings(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));
  }
  const KdTree tree(joint, dim);
  // Slack absorbs rounding in the scaled coordinates; candidates are
  // re-checked with joint_distance, so a wider ball only costs time.
  const double ball = params.radius * (1.0 + 1e-9) + 1e-12;
  const double ball_sq = ball * ball;

  std::vector<char> visited(n, 0);
  Segmentation seg;
  std::vector<Index> cluster, candidates;
  std::deque<Index> queue;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    visited[seed] = 1;
    queue.push_back(static_cast<Index>(seed));
    cluster.push_back(static_cast<Index>(seed));
    while (!queue.empty()) {
      const Index k = queue.front();
      queue.pop_front();
      candidates.clear();
      tree.radius_unsorted(tree.point(static_cast<std::size_t>(k)), ball_sq, candidates);
      for (Index j : candidates) {
        if (visited[j]) continue;
        if (joint_distance(shifted, embeddings, params, j, k) < params.radius) {
          visited[j] = 1;
          queue.push_back(j);
          cluster.push_back(j);
        }
      }
    }
    emit(seg, cluster, params.min_cluster_size);
  }
  std::sort(seg.unassigned.begin(), seg.unassigned.end());
  return seg;
}

}  // namespace roofseg
