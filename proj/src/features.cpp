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

#include "roofseg/features.hpp"

#include "roofseg/geom.hpp"
#include "roofseg/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace roofseg {

void validate(const PredictionSet& pred) {
  const std::size_t n = pred.semantic.size();
  if (pred.offset.size() != n || static_cast<std::size_t>(pred.embedding.rows()) != n)
    throw Error(ErrorKind::LengthMismatch, "prediction arrays differ in length");
  for (std::size_t i = 0; i < n; ++i) {
    if (!pred.offset[i].allFinite())
      throw Error(ErrorKind::FormatError, "non-finite offset at point " + std::to_string(i));
  }
  if (!pred.embedding.allFinite())
    throw Error(ErrorKind::FormatError, "non-finite embedding value");
}

void validate(const NoiseSpec& noise) {
  if (!(noise.offset_sigma >= 0.0) || !(noise.embedding_sigma >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "noise sigmas must be >= 0");
  if (!(noise.semantic_flip_rate >= 0.0 && noise.semantic_flip_rate < 0.5))
    throw Error(ErrorKind::InvalidConfig, "semantic flip rate must lie in [0, 0.5)");
  if (!(noise.boundary_noise_factor >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "boundary noise factor must be >= 0");
}

Eigen::RowVectorXd instance_code(int id, std::size_t dim) {
  Eigen::RowVectorXd code = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(dim));
  if (id >= 0 && static_cast<std::size_t>(id) < dim)
    code(id) = kOracleCodeDistance / std::numbers::sqrt2;
  return code;
}

PredictionSet oracle_predictions(const PointCloud& cloud, const LabelSet& labels,
                                 const NoiseSpec& noise, std::size_t embed_dim) {
  validate(noise);
  if (!cloud.gt) throw Error(ErrorKind::MissingGroundTruth, "oracle needs ground truth");
  const std::size_t n = cloud.size();
  if (labels.size() != n)
    throw Error(ErrorKind::LengthMismatch, "labels do not match the cloud");
  if (embed_dim < 1) throw Error(ErrorKind::InvalidConfig, "embed_dim must be >= 1");
  const int n_inst = instance_count(*cloud.gt);
  if (static_cast<std::size_t>(n_inst) > embed_dim)
    throw Error(ErrorKind::TooManyInstances,
                std::to_string(n_inst) + " instances exceed embed_dim " +
                    std::to_string(embed_dim));

  Vec3 centroid = Vec3::Zero();
  for (const auto& p : cloud.points) centroid += p;
  if (n > 0) centroid /= static_cast<double>(n);
  double radius = 0.0;
  for (const auto& p : cloud.points) radius = std::max(radius, (p - centroid).norm());

  const bool has_nonroof = std::any_of(labels.semantic.begin(), labels.semantic.end(),
                                       [](Semantic s) { return s == Semantic::NonRoof; });
  const double offset_std = noise.offset_sigma * radius;
  const double embed_std = noise.embedding_sigma * kOracleCodeDistance /
                           std::sqrt(static_cast<double>(embed_dim));

  // One stream per head.
  Rng flip_rng(derive_seed(noise.seed, 1));
  Rng offset_rng(derive_seed(noise.seed, 2));
  Rng embed_rng(derive_seed(noise.seed, 3));

  PredictionSet pred;
  pred.semantic.resize(n);
  pred.offset.resize(n);
  pred.embedding.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(embed_dim));
  for (std::size_t i = 0; i < n; ++i) {
    const Semantic truth = labels.semantic[i];
    Semantic s = truth;
    const double u = flip_rng.uniform();
    const std::uint64_t pick = flip_rng.below(2);
    if (u < noise.semantic_flip_rate) {
      if (has_nonroof) {
        // Uniform over the two other classes.
        const int others[3][2] = {{1, 2}, {0, 2}, {0, 1}};
        s = static_cast<Semantic>(others[static_cast<int>(truth)][pick]);
      } else {
        s = truth == Semantic::Boundary ? Semantic::Plane : Semantic::Boundary;
      }
    }
    pred.semantic[i] = s;

    const double factor = truth == Semantic::Boundary ? noise.boundary_noise_factor : 1.0;
    Vec3 off = labels.offset[i];
    for (int a = 0; a < 3; ++a) off(a) += factor * offset_std * offset_rng.normal();
    pred.offset[i] = off;

    auto row = pred.embedding.row(static_cast<Eigen::Index>(i));
    row = instance_code(labels.instance_id[i], embed_dim);
    for (Eigen::Index d = 0; d < row.size(); ++d)
      row(d) += factor * embed_std * embed_rng.normal();
  }
  return pred;
}

PredictionSet handcrafted_predictions(const PointCloud& cloud, std::size_t k,
                                      std::size_t embed_dim) {
  if (k < 3) throw Error(ErrorKind::InvalidConfig, "handcrafted provider needs k >= 3");
  if (embed_dim < 5)
    throw Error(ErrorKind::InvalidConfig, "handcrafted embeddings need embed_dim >= 5");
  const std::size_t n = cloud.size();
  const SpatialIndex index(cloud.points);
  const NormalEstimate normals = estimate_normals(cloud.points, index, k);
  const double cos_limit = std::cos(kHandcraftedBoundaryAngleDeg * std::numbers::pi / 180.0);

  PredictionSet pred;
  pred.semantic.assign(n, Semantic::Plane);
  pred.offset.assign(n, Vec3::Zero());
  pred.embedding = RowMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(embed_dim));
  for (std::size_t i = 0; i < n; ++i) {
    // Degenerate neighborhoods fall back to vertical and are flagged Boundary.
    const Vec3 nrm = normals.degenerate[i] ? Vec3(0.0, 0.0, 1.0) : normals.normals[i];
    const Point3& p = cloud.points[i];
    auto row = pred.embedding.row(static_cast<Eigen::Index>(i));
    row(0) = nrm.x();
    row(1) = nrm.y();
    row(2) = nrm.z();
    row(3) = nrm.dot(p);
    row(4) = p.z();

    // Max pairwise angle between unoriented neighbor normals.
    const auto nbrs = index.knn(p, k);
    bool spread = normals.degenerate[i] != 0;
    for (std::size_t a = 0; a < nbrs.size() && !spread; ++a) {
      const auto ia = static_cast<std::size_t>(nbrs[a]);
      if (normals.degenerate[ia]) continue;
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        const auto ib = static_cast<std::size_t>(nbrs[b]);
        if (normals.degenerate[ib]) continue;
        if (std::abs(normals.normals[ia].dot(normals.normals[ib])) < cos_limit) {
          spread = true;
          break;
        }
      }
    }
    if (spread) pred.semantic[i] = Semantic::Boundary;
  }
  return pred;
}

}  // namespace roofseg
