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

#include <Eigen/Core>

#include <vector>

namespace roofseg {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Loss value with its gradient, flattened row-major (point-major) over the
/// differentiable input.
struct LossValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

struct EmbeddingBatch {
  RowMatrix features;            // N x D
  std::vector<int> instance_id;  // points with a negative id are ignored
};

struct EmbeddingMargins {
  double pull = 0.5;
  double push = 1.5;
};

inline constexpr double kEmbeddingRegWeight = 0.001;
inline constexpr double kCosineEps = 1e-8;

/// Summed softmax cross-entropy over points. logits is N x C with C in {2, 3}.
LossValue classification_loss(const RowMatrix& logits, const std::vector<int>& labels);

/// Offset regression: sum_i |pred_i - gt_i| + (1 - cos(pred_i, gt_i)).
///
/// The direction term is one minus the cosine so that agreement lowers the
/// loss; the cosine term is dropped for a point when either vector is shorter
/// than kCosineEps. Gradient is with respect to pred.
LossValue offset_loss(const RowMatrix& pred, const RowMatrix& gt);

/// Hinged discriminative embedding loss
///   pull: mean_I mean_{i in I} max(0, |f_i - mu_I| - margin.pull)^2
///   push: mean_{A<B} max(0, 2 margin.push - |mu_A - mu_B|)^2
///   reg : mean_I |mu_I|
///   value = pull + push + 0.001 reg
/// Gradient is with respect to every embedding.
LossValue embedding_loss(const EmbeddingBatch& batch,
                         const EmbeddingMargins& margins = {});

/// The three terms separately, for inspection and tests.
struct EmbeddingTerms {
  double pull = 0.0, push = 0.0, reg = 0.0;
};
EmbeddingTerms embedding_terms(const EmbeddingBatch& batch,
                               const EmbeddingMargins& margins = {});

/// Unweighted sum; gradients are concatenated in argument order.
LossValue total_loss(const LossValue& cls, const LossValue& reg, const LossValue& emb);

}  // namespace roofseg
