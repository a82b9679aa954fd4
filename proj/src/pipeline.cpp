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

#include "roofseg/pipeline.hpp"

#include <algorithm>
#include <string>

namespace roofseg {

std::vector<int> SegmentResult::labels() const {
  return segmentation.to_labels(segmentation.num_points());
}

namespace {

Segmentation to_global(const Segmentation& local, std::span<const Index> global_of) {
  Segmentation out;
  for (const auto& c : local.clusters) {
    std::vector<Index> g;
    g.reserve(c.size());
    for (Index i : c) g.push_back(global_of[static_cast<std::size_t>(i)]);
    std::sort(g.begin(), g.end());
    out.clusters.push_back(std::move(g));
  }
  for (Index i : local.unassigned) out.unassigned.push_back(global_of[static_cast<std::size_t>(i)]);
  std::sort(out.unassigned.begin(), out.unassigned.end());
  return out;
}

RowMatrix gather_rows(const RowMatrix& m, std::span<const Index> rows) {
  RowMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = m.row(rows[r]);
  return out;
}

}  // namespace

SegmentResult segment_building(std::span<const Point3> points, const PredictionSet& pred,
                               const SegmentOptions& options) {
  validate(options.cluster);
  validate(pred);
  if (pred.size() != points.size())
    throw Error(ErrorKind::LengthMismatch,
                "cloud has " + std::to_string(points.size()) + " points, predictions " +
                    std::to_string(pred.size()));
  const std::size_t n = points.size();

  Vec3 centroid = Vec3::Zero();
  for (const auto& p : points) centroid += p;
  if (n > 0) centroid /= static_cast<double>(n);
  double radius = 0.0;
  for (const auto& p : points) radius = std::max(radius, (p - centroid).norm());
  const double scale = radius > 0.0 ? 1.0 / radius : 1.0;

  SegmentResult result;
  std::vector<Index> roof, to_cluster;
  for (std::size_t i = 0; i < n; ++i) {
    switch (pred.semantic[i]) {
      case Semantic::NonRoof: ++result.n_nonroof; continue;
      case Semantic::Boundary: ++result.n_boundary; break;
      case Semantic::Plane: ++result.n_plane; break;
    }
    roof.push_back(static_cast<Index>(i));
    if (!options.boundary_aware || pred.semantic[i] == Semantic::Plane)
      to_cluster.push_back(static_cast<Index>(i));
  }

  // Roof points in the normalized frame, and the clustered subset shifted.
  std::vector<Point3> roof_points(roof.size());
  for (std::size_t r = 0; r < roof.size(); ++r)
    roof_points[r] = (points[static_cast<std::size_t>(roof[r])] - centroid) * scale;
  std::vector<Point3> shifted(to_cluster.size());
  for (std::size_t c = 0; c < to_cluster.size(); ++c) {
    const auto i = static_cast<std::size_t>(to_cluster[c]);
    shifted[c] = (points[i] - centroid) * scale + pred.offset[i] * scale;
  }
  const RowMatrix cluster_embed = gather_rows(pred.embedding, to_cluster);

  const Segmentation local =
      options.accelerated ? cluster_points_accelerated(shifted, cluster_embed, options.cluster)
                          : cluster_points(shifted, cluster_embed, options.cluster);
  result.clustered = to_global(local, to_cluster);
  result.clustered.unassigned.clear();

  // Re-express the clusters over roof-local indices; every other roof point
  // is a refinement candidate.
  std::vector<Index> roof_pos(n, -1);
  for (std::size_t r = 0; r < roof.size(); ++r) roof_pos[static_cast<std::size_t>(roof[r])] = static_cast<Index>(r);
  Segmentation roof_seg;
  std::vector<char> taken(roof.size(), 0);
  for (const auto& c : result.clustered.clusters) {
    std::vector<Index> rc;
    for (Index g : c) {
      const Index r = roof_pos[static_cast<std::size_t>(g)];
      rc.push_back(r);
      taken[static_cast<std::size_t>(r)] = 1;
    }
    roof_seg.clusters.push_back(std::move(rc));
  }
  for (std::size_t r = 0; r < roof.size(); ++r)
    if (!taken[r]) roof_seg.unassigned.push_back(static_cast<Index>(r));

  if (options.boundary_aware) {
    const RowMatrix roof_embed = gather_rows(pred.embedding, roof);
    roof_seg = refine_boundaries(roof_seg, roof_points, roof_embed, options.refine);
  }
  result.segmentation = to_global(roof_seg, roof);
  for (std::size_t i = 0; i < n; ++i)
    if (pred.semantic[i] == Semantic::NonRoof)
      result.segmentation.unassigned.push_back(static_cast<Index>(i));
  std::sort(result.segmentation.unassigned.begin(), result.segmentation.unassigned.end());
  // Unassigned points that were clustered-but-dissolved are tracked too.
  for (Index i : local.unassigned)
    result.clustered.unassigned.push_back(to_cluster[static_cast<std::size_t>(i)]);
  std::sort(result.clustered.unassigned.begin(), result.clustered.unassigned.end());
  return result;
}

}  // namespace roofseg
