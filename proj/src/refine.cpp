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

#include "roofseg/refine.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace roofseg {

PatchSummary summarize_patch(std::span<const Index> cluster,
                             std::span<const Point3> points,
                             const RowMatrix& embeddings) {
  if (static_cast<std::size_t>(embeddings.rows()) != points.size())
    throw Error(ErrorKind::LengthMismatch, "points and embeddings differ in length");
  PatchSummary s;
  s.plane = fit_plane(points, cluster);
  s.embed_center = Eigen::RowVectorXd::Zero(embeddings.cols());
  for (Index i : cluster) s.embed_center += embeddings.row(i);
  s.embed_center /= static_cast<double>(cluster.size());
  return s;
}

double assignment_distance(const Point3& p, const Eigen::RowVectorXd& f,
                           const PatchSummary& patch, const RefineWeights& w) {
  return w.plane * point_plane_distance(p, patch.plane) +
         w.embedding * (f - patch.embed_center).norm();
}

Segmentation refine_boundaries(const Segmentation& seg, std::span<const Point3> points,
                               const RowMatrix& embeddings,
                               const RefineWeights& weights) {
  if (static_cast<std::size_t>(embeddings.rows()) != points.size())
    throw Error(ErrorKind::LengthMismatch, "points and embeddings differ in length");
  if (!(weights.plane >= 0.0) || !(weights.embedding >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "refine weights must be >= 0");

  Segmentation out;
  std::vector<PatchSummary> patches;
  std::vector<Index> pending = seg.unassigned;
  for (const auto& cluster : seg.clusters) {
    try {
      patches.push_back(summarize_patch(cluster, points, embeddings));
      out.clusters.push_back(cluster);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateInput) throw;
      pending.insert(pending.end(), cluster.begin(), cluster.end());
    }
  }
  if (patches.empty())
    throw Error(ErrorKind::NoClusters, "no planar patch available for refinement");

  for (Index i : pending) {
    const Point3& p = points[static_cast<std::size_t>(i)];
    const Eigen::RowVectorXd f = embeddings.row(i);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < patches.size(); ++k) {
      const double d = assignment_distance(p, f, patches[k], weights);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    out.clusters[best].push_back(i);
  }
  for (auto& c : out.clusters) std::sort(c.begin(), c.end());
  return out;
}

}  // namespace roofseg
