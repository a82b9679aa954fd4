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

#include "roofseg/losses.hpp"

#include <cmath>
#include <map>
#include <string>

namespace roofseg {

LossValue classification_loss(const RowMatrix& logits,
                              const std::vector<int>& labels) {
  const Eigen::Index n = logits.rows(), c = logits.cols();
  if (c != 2 && c != 3)
    throw Error(ErrorKind::InvalidConfig,
                "classification expects 2 or 3 classes, got " + std::to_string(c));
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw Error(ErrorKind::LengthMismatch, "labels and logits differ in length");

  LossValue out;
  out.gradient = Eigen::VectorXd::Zero(n * c);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= c)
      throw Error(ErrorKind::LabelOutOfRange,
                  "label " + std::to_string(y) + " at point " + std::to_string(i));
    const auto row = logits.row(i);
    const double m = row.maxCoeff();
    double z = 0.0;
    for (Eigen::Index k = 0; k < c; ++k) z += std::exp(row(k) - m);
    const double log_z = m + std::log(z);
    out.value += log_z - row(y);
    for (Eigen::Index k = 0; k < c; ++k) {
      const double p = std::exp(row(k) - log_z);
      out.gradient(i * c + k) = p - (k == y ? 1.0 : 0.0);
    }
  }
  return out;
}

LossValue offset_loss(const RowMatrix& pred, const RowMatrix& gt) {
  if (pred.rows() != gt.rows() || pred.cols() != 3 || gt.cols() != 3)
    throw Error(ErrorKind::LengthMismatch, "offset arrays must both be N x 3");
  const Eigen::Index n = pred.rows();
  LossValue out;
  out.gradient = Eigen::VectorXd::Zero(n * 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 a = pred.row(i).transpose();
    const Vec3 g = gt.row(i).transpose();
    Vec3 grad = Vec3::Zero();

    const Vec3 diff = a - g;
    const double dist = diff.norm();
    out.value += dist;
    if (dist > 0.0) grad += diff / dist;

    const double na = a.norm(), ng = g.norm();
    if (na >= kCosineEps && ng >= kCosineEps) {
      const double cosine = a.dot(g) / (na * ng);
      out.value += 1.0 - cosine;
      grad -= g / (na * ng) - cosine * a / (na * na);
    }
    out.gradient.segment<3>(i * 3) = grad;
  }
  return out;
}

namespace {

struct InstanceStats {
  std::vector<std::vector<Eigen::Index>> members;
  RowMatrix means;  // K x D
};

InstanceStats group_instances(const EmbeddingBatch& batch) {
  const Eigen::Index n = batch.features.rows(), d = batch.features.cols();
  if (static_cast<Eigen::Index>(batch.instance_id.size()) != n)
    throw Error(ErrorKind::LengthMismatch, "instance ids and embeddings differ in length");
  if (d < 1) throw Error(ErrorKind::InvalidConfig, "embedding dimension must be >= 1");
  std::map<int, std::size_t> slot;
  InstanceStats s;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int id = batch.instance_id[static_cast<std::size_t>(i)];
    if (id < 0) continue;
    auto [it, inserted] = slot.try_emplace(id, s.members.size());
    if (inserted) s.members.emplace_back();
    s.members[it->second].push_back(i);
  }
  if (s.members.empty()) throw Error(ErrorKind::NoInstances, "embedding batch has no instances");
  // Instance order follows first appearance.
  s.means = RowMatrix::Zero(static_cast<Eigen::Index>(s.members.size()), d);
  for (std::size_t k = 0; k < s.members.size(); ++k) {
    for (Eigen::Index i : s.members[k]) s.means.row(static_cast<Eigen::Index>(k)) += batch.features.row(i);
    s.means.row(static_cast<Eigen::Index>(k)) /= static_cast<double>(s.members[k].size());
  }
  return s;
}

LossValue embedding_impl(const EmbeddingBatch& batch, const EmbeddingMargins& m,
                         EmbeddingTerms* terms) {
  if (!(m.pull > 0.0) || !(m.push > 0.0))
    throw Error(ErrorKind::InvalidConfig, "embedding margins must be positive");
  const InstanceStats s = group_instances(batch);
  const auto& f = batch.features;
  const Eigen::Index n = f.rows(), d = f.cols();
  const auto n_inst = static_cast<Eigen::Index>(s.members.size());
  const double inv_k = 1.0 / static_cast<double>(n_inst);

  RowMatrix grad = RowMatrix::Zero(n, d);
  // Gradient w.r.t. each instance mean, chained to member points at the end.
  RowMatrix grad_mean = RowMatrix::Zero(n_inst, d);
  EmbeddingTerms t;

  for (Eigen::Index k = 0; k < n_inst; ++k) {
    const auto& members = s.members[static_cast<std::size_t>(k)];
    const double inv_n = 1.0 / static_cast<double>(members.size());
    for (Eigen::Index i : members) {
      const Eigen::RowVectorXd diff = f.row(i) - s.means.row(k);
      const double dist = diff.norm();
      const double hinge = dist - m.pull;
      if (hinge <= 0.0) continue;
      t.pull += inv_k * inv_n * hinge * hinge;
      const Eigen::RowVectorXd g = inv_k * inv_n * 2.0 * hinge * diff / dist;
      grad.row(i) += g;
      grad_mean.row(k) -= g;
    }
  }

  if (n_inst > 1) {
    const double inv_pairs = 2.0 / static_cast<double>(n_inst * (n_inst - 1));
    for (Eigen::Index a = 0; a < n_inst; ++a) {
      for (Eigen::Index b = a + 1; b < n_inst; ++b) {
        const Eigen::RowVectorXd diff = s.means.row(a) - s.means.row(b);
        const double dist = diff.norm();
        const double hinge = 2.0 * m.push - dist;
        if (hinge <= 0.0) continue;
        t.push += inv_pairs * hinge * hinge;
        if (dist > 0.0) {
          const Eigen::RowVectorXd g = -inv_pairs * 2.0 * hinge * diff / dist;
          grad_mean.row(a) += g;
          grad_mean.row(b) -= g;
        }
      }
    }
  }

  for (Eigen::Index k = 0; k < n_inst; ++k) {
    const double norm = s.means.row(k).norm();
    t.reg += inv_k * norm;
    if (norm > 0.0)
      grad_mean.row(k) += kEmbeddingRegWeight * inv_k * s.means.row(k) / norm;
  }

  for (Eigen::Index k = 0; k < n_inst; ++k) {
    const auto& members = s.members[static_cast<std::size_t>(k)];
    const Eigen::RowVectorXd share = grad_mean.row(k) / static_cast<double>(members.size());
    for (Eigen::Index i : members) grad.row(i) += share;
  }

  if (terms) *terms = t;
  LossValue out;
  out.value = t.pull + t.push + kEmbeddingRegWeight * t.reg;
  out.gradient = Eigen::Map<const Eigen::VectorXd>(grad.data(), n * d);
  return out;
}

}  // namespace

LossValue embedding_loss(const EmbeddingBatch& batch, const EmbeddingMargins& margins) {
  return embedding_impl(batch, margins, nullptr);
}

EmbeddingTerms embedding_terms(const EmbeddingBatch& batch,
                               const EmbeddingMargins& margins) {
  EmbeddingTerms t;
  embedding_impl(batch, margins, &t);
  return t;
}

LossValue total_loss(const LossValue& cls, const LossValue& reg, const LossValue& emb) {
  LossValue out;
  out.value = cls.value + reg.value + emb.value;
  out.gradient.resize(cls.gradient.size() + reg.gradient.size() + emb.gradient.size());
  out.gradient.head(cls.gradient.size()) = cls.gradient;
  out.gradient.segment(cls.gradient.size(), reg.gradient.size()) = reg.gradient;
  out.gradient.tail(emb.gradient.size()) = emb.gradient;
  return out;
}

}  // namespace roofseg
