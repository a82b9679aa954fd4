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
#include "roofseg/gtlabel.hpp"
#include "roofseg/losses.hpp"
#include "roofseg/synthgen.hpp"

#include <cstdint>
#include <vector>

namespace roofseg {

inline constexpr std::size_t kDefaultEmbedDim = 64;

/// The three per-point network outputs, as plain data.
struct PredictionSet {
  std::vector<Semantic> semantic;
  std::vector<Vec3> offset;
  RowMatrix embedding;  // N x D

  std::size_t size() const { return semantic.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(embedding.cols()); }
};

/// Throws LengthMismatch / FormatError when arrays disagree or hold
/// non-finite values.
void validate(const PredictionSet& pred);

struct NoiseSpec {
  /// Per-axis offset noise std, as a fraction of the cloud radius.
  double offset_sigma = 0.0;
  /// Embedding noise magnitude as a fraction of the inter-code distance:
  /// each of the D components gets std embedding_sigma * distance / sqrt(D),
  /// so the expected squared noise norm is (embedding_sigma * distance)^2.
  double embedding_sigma = 0.0;
  double semantic_flip_rate = 0.0;
  /// Noise multiplier applied to Boundary points.
  double boundary_noise_factor = 2.0;
  std::uint64_t seed = 0;
};

void validate(const NoiseSpec& noise);

/// Distance between any two oracle instance codes. Codes are
/// (distance / sqrt 2) * e_i, i.e. sqrt(2) * margin.pull * e_i for the
/// default pull margin of 0.5.
inline constexpr double kOracleCodeDistance = 1.0;

/// Code vector of instance `id` in dimension `dim`.
Eigen::RowVectorXd instance_code(int id, std::size_t dim);

/// Simulates an ideal network from ground truth plus controlled noise.
/// Throws TooManyInstances when the instance count exceeds embed_dim.
PredictionSet oracle_predictions(const PointCloud& cloud, const LabelSet& labels,
                                 const NoiseSpec& noise,
                                 std::size_t embed_dim = kDefaultEmbedDim);

/// No-learning provider: embedding = [normal (3), normal . p, z, 0...],
/// zero offsets, Boundary where the kNN normal spread exceeds 20 degrees.
PredictionSet handcrafted_predictions(const PointCloud& cloud, std::size_t k,
                                      std::size_t embed_dim = kDefaultEmbedDim);

inline constexpr double kHandcraftedBoundaryAngleDeg = 20.0;

}  // namespace roofseg
