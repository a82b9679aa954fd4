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

#include "roofseg/gtlabel.hpp"

#include "roofseg/geom.hpp"

#include <algorithm>

namespace roofseg {

namespace {

const GroundTruth& require_gt(const PointCloud& cloud) {
  if (!cloud.gt)
    throw Error(ErrorKind::MissingGroundTruth, "cloud carries no ground truth");
  if (cloud.gt->instance_id.size() != cloud.size())
    throw Error(ErrorKind::LengthMismatch, "instance ids do not match point count");
  return *cloud.gt;
}

}  // namespace

int instance_count(const GroundTruth& gt) {
  int n = gt.num_instances();
  for (int id : gt.instance_id) n = std::max(n, id + 1);
  return n;
}

std::vector<Point3> instance_centers(const PointCloud& cloud) {
  const GroundTruth& gt = require_gt(cloud);
  const int n_inst = instance_count(gt);
  std::vector<Point3> sum(static_cast<std::size_t>(n_inst), Point3::Zero());
  std::vector<std::size_t> count(static_cast<std::size_t>(n_inst), 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const int id = gt.instance_id[i];
    if (id < 0) continue;
    sum[static_cast<std::size_t>(id)] += cloud.points[i];
    ++count[static_cast<std::size_t>(id)];
  }
  for (int id = 0; id < n_inst; ++id) {
    if (count[static_cast<std::size_t>(id)] == 0)
      throw Error(ErrorKind::EmptyInstance,
                  "instance " + std::to_string(id) + " has no points");
    sum[static_cast<std::size_t>(id)] /= static_cast<double>(count[static_cast<std::size_t>(id)]);
  }
  return sum;
}

LabelSet derive_labels(const PointCloud& cloud, std::size_t k_boundary) {
  const GroundTruth& gt = require_gt(cloud);
  if (k_boundary < 2)
    throw Error(ErrorKind::InvalidConfig, "k_boundary must be >= 2");
  const std::size_t n = cloud.size();

  LabelSet labels;
  labels.semantic.assign(n, Semantic::NonRoof);
  labels.offset.assign(n, Vec3::Zero());
  labels.instance_id = gt.instance_id;

  std::vector<Point3> roof_points;
  std::vector<std::size_t> roof_index;
  for (std::size_t i = 0; i < n; ++i) {
    if (gt.instance_id[i] < 0) continue;
    roof_points.push_back(cloud.points[i]);
    roof_index.push_back(i);
  }
  if (roof_points.empty()) return labels;

  const auto centers = instance_centers(cloud);
  const SpatialIndex index(roof_points);
  for (std::size_t r = 0; r < roof_points.size(); ++r) {
    const std::size_t i = roof_index[r];
    const int id = gt.instance_id[i];
    auto nbrs = index.knn(roof_points[r], k_boundary + 1);
    auto self = std::find(nbrs.begin(), nbrs.end(), static_cast<Index>(r));
    if (self != nbrs.end())
      nbrs.erase(self);
    else if (nbrs.size() > k_boundary)
      nbrs.pop_back();
    const bool boundary = std::any_of(nbrs.begin(), nbrs.end(), [&](Index j) {
      return gt.instance_id[roof_index[static_cast<std::size_t>(j)]] != id;
    });
    labels.semantic[i] = boundary ? Semantic::Boundary : Semantic::Plane;
    labels.offset[i] = centers[static_cast<std::size_t>(id)] - cloud.points[i];
  }
  return labels;
}

void attach_labels(PointCloud& cloud, const LabelSet& labels) {
  if (!cloud.gt) throw Error(ErrorKind::MissingGroundTruth, "cloud carries no ground truth");
  if (labels.size() != cloud.size())
    throw Error(ErrorKind::LengthMismatch, "label count does not match cloud");
  cloud.gt->semantic = labels.semantic;
}

}  // namespace roofseg
