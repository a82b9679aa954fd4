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

#include "oracles.hpp"

#include "roofseg/losses.hpp"
#include "roofseg/random.hpp"

#include <gtest/gtest.h>

#include <Eigen/QR>

#include <cmath>

namespace roofseg {
namespace {

RowMatrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c, double sigma = 1.0) {
  RowMatrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal(0.0, sigma);
  return m;
}

// Discriminative loss evaluated directly from its definition.
double embedding_reference(const RowMatrix& f, const std::vector<int>& ids, double dv, double dd) {
  int m = 0;
  for (int id : ids) m = std::max(m, id + 1);
  std::vector<Eigen::RowVectorXd> mu(static_cast<std::size_t>(m), Eigen::RowVectorXd::Zero(f.cols()));
  std::vector<double> count(static_cast<std::size_t>(m), 0.0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    mu[static_cast<std::size_t>(ids[i])] += f.row(static_cast<Eigen::Index>(i));
    count[static_cast<std::size_t>(ids[i])] += 1;
  }
  std::vector<int> present;
  for (int k = 0; k < m; ++k)
    if (count[static_cast<std::size_t>(k)] > 0) {
      mu[static_cast<std::size_t>(k)] /= count[static_cast<std::size_t>(k)];
      present.push_back(k);
    }
  double pull = 0.0;
  for (int k : present) {
    double s = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == k)
        s += std::pow(std::max(0.0, (f.row(static_cast<Eigen::Index>(i)) - mu[static_cast<std::size_t>(k)]).norm() - dv), 2);
    pull += s / count[static_cast<std::size_t>(k)];
  }
  pull /= static_cast<double>(present.size());
  double push = 0.0;
  int pairs = 0;
  for (std::size_t a = 0; a < present.size(); ++a)
    for (std::size_t b = a + 1; b < present.size(); ++b, ++pairs)
      push += std::pow(std::max(0.0, 2 * dd - (mu[static_cast<std::size_t>(present[a])] - mu[static_cast<std::size_t>(present[b])]).norm()), 2);
  if (pairs) push /= pairs;
  double reg = 0.0;
  for (int k : present) reg += mu[static_cast<std::size_t>(k)].norm();
  reg /= static_cast<double>(present.size());
  return pull + push + 0.001 * reg;
}

TEST(ClassificationLoss, SaturatedCorrect) {
  RowMatrix logits(1, 3);
  logits << 10.0, 0.0, 0.0;
  EXPECT_LT(classification_loss(logits, {0}).value, 2e-4);
  RowMatrix many = RowMatrix::Zero(4, 3);
  const std::vector<int> labels = {0, 1, 2, 1};
  for (int i = 0; i < 4; ++i) many(i, labels[static_cast<std::size_t>(i)]) = 10.0;
  EXPECT_NEAR(classification_loss(many, labels).value, 4 * std::log(1 + 2 * std::exp(-10.0)), 1e-15);
}

TEST(ClassificationLoss, UniformIsLogC) {
  EXPECT_NEAR(classification_loss(RowMatrix::Zero(1, 3), {2}).value, std::log(3.0), 1e-15);
  EXPECT_NEAR(classification_loss(RowMatrix::Zero(5, 2), {0, 1, 1, 0, 1}).value, 5 * std::log(2.0), 1e-13);
}

TEST(ClassificationLoss, MonotoneInMargin) {
  double prev = 1e9;
  for (double m = 0.0; m < 40.0; m += 0.5) {
    RowMatrix logits(1, 2);
    logits << m, 0.0;
    const double v = classification_loss(logits, {0}).value;
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(ClassificationLoss, StableForHugeLogits) {
  RowMatrix logits(1, 3);
  logits << 1000.0, -1000.0, 0.0;
  const LossValue v = classification_loss(logits, {1});
  EXPECT_NEAR(v.value, 2000.0, 1e-9);
  EXPECT_TRUE(v.gradient.allFinite());
}

TEST(ClassificationLoss, Errors) {
  try {
    classification_loss(RowMatrix::Zero(2, 3), {0, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LabelOutOfRange);
  }
  EXPECT_THROW(classification_loss(RowMatrix::Zero(2, 3), {0, -1}), Error);
  EXPECT_THROW(classification_loss(RowMatrix::Zero(2, 4), {0, 1}), Error);
  EXPECT_THROW(classification_loss(RowMatrix::Zero(2, 3), {0}), Error);
}

TEST(ClassificationLoss, GradientMatchesFiniteDifferences) {
  Rng rng(1);
  for (int trial = 0; trial < 150; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(8)), c = 2 + static_cast<Eigen::Index>(rng.below(2));
    const RowMatrix logits = random_matrix(rng, n, c, 3.0);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (auto& l : labels) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(c)));
    const auto num = oracle::numeric_gradient(
        [&](const Eigen::VectorXd& x) { return classification_loss(oracle::to_rows(x, n, c), labels).value; },
        oracle::flatten(logits));
    EXPECT_LE(oracle::gradient_error(classification_loss(logits, labels).gradient, num), 1e-5);
  }
}

TEST(OffsetLoss, Examples) {
  RowMatrix gt(2, 3);
  gt << 1, 2, 3, -1, 0.5, 0;
  EXPECT_NEAR(offset_loss(gt, gt).value, 0.0, 1e-15);
  RowMatrix unit(1, 3);
  unit << 0, 0, 1;
  EXPECT_NEAR(offset_loss(-unit, unit).value, 4.0, 1e-15);
  RowMatrix perp(1, 3);
  perp << 1, 0, 0;
  EXPECT_NEAR(offset_loss(perp, unit).value, std::sqrt(2.0) + 1.0, 1e-15);
}

TEST(OffsetLoss, ZeroVectorsSkipCosine) {
  RowMatrix zero = RowMatrix::Zero(1, 3), v(1, 3);
  v << 3, 4, 0;
  EXPECT_NEAR(offset_loss(zero, v).value, 5.0, 1e-15);
  EXPECT_NEAR(offset_loss(v, zero).value, 5.0, 1e-15);
  const LossValue z = offset_loss(zero, zero);
  EXPECT_EQ(z.value, 0.0);
  EXPECT_TRUE(z.gradient.allFinite());
}

TEST(OffsetLoss, LengthMismatch) {
  try {
    offset_loss(RowMatrix::Zero(2, 3), RowMatrix::Zero(3, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
  }
}

TEST(OffsetLoss, GradientMatchesFiniteDifferences) {
  Rng rng(2);
  for (int trial = 0; trial < 150; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(8));
    const RowMatrix pred = random_matrix(rng, n, 3), gt = random_matrix(rng, n, 3);
    const auto num = oracle::numeric_gradient(
        [&](const Eigen::VectorXd& x) { return offset_loss(oracle::to_rows(x, n, 3), gt).value; },
        oracle::flatten(pred));
    EXPECT_LE(oracle::gradient_error(offset_loss(pred, gt).gradient, num), 1e-5);
  }
}

TEST(OffsetLoss, ParallelScaledPrediction) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const RowMatrix gt = random_matrix(rng, 1, 3);
    const double s = rng.uniform(0.1, 3.0);
    EXPECT_NEAR(offset_loss(s * gt, gt).value, std::abs(s - 1.0) * gt.norm(), 1e-12);
  }
}

TEST(EmbeddingLoss, CollapsedSingleInstance) {
  EmbeddingBatch b;
  b.features = RowMatrix(5, 4);
  for (int i = 0; i < 5; ++i) b.features.row(i) << 1, 2, 2, 0;
  b.instance_id = {0, 0, 0, 0, 0};
  EXPECT_NEAR(embedding_loss(b).value, 0.001 * 3.0, 1e-15);
  const EmbeddingTerms t = embedding_terms(b);
  EXPECT_EQ(t.pull, 0.0);
  EXPECT_EQ(t.push, 0.0);
}

TEST(EmbeddingLoss, InactiveHingesLeaveOnlyRegularizer) {
  EmbeddingBatch b;
  b.features = RowMatrix(4, 2);
  b.features << 0.1, 0, -0.1, 0, 5.1, 0, 4.9, 0;
  b.instance_id = {0, 0, 1, 1};
  const EmbeddingTerms t = embedding_terms(b);
  EXPECT_EQ(t.pull, 0.0);
  EXPECT_EQ(t.push, 0.0);
  EXPECT_NEAR(embedding_loss(b).value, 0.001 * (0.0 + 5.0) / 2.0, 1e-15);
}

TEST(EmbeddingLoss, MatchesDirectEvaluation) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    EmbeddingBatch b;
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.below(6));
    const int m = 1 + static_cast<int>(rng.below(5));
    for (int k = 0; k < m; ++k)
      for (int j = 0, c = 1 + static_cast<int>(rng.below(6)); j < c; ++j) b.instance_id.push_back(k);
    b.features = random_matrix(rng, static_cast<Eigen::Index>(b.instance_id.size()), d, 1.5);
    EXPECT_NEAR(embedding_loss(b).value, embedding_reference(b.features, b.instance_id, 0.5, 1.5), 1e-12);
  }
}

TEST(EmbeddingLoss, GradientMatchesFiniteDifferences) {
  Rng rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    EmbeddingBatch b;
    const Eigen::Index d = trial < 30 ? 4 : 1 + static_cast<Eigen::Index>(rng.below(6));
    const int m = trial < 30 ? 3 : 1 + static_cast<int>(rng.below(5));
    for (int k = 0; k < m; ++k)
      for (int j = 0, c = 2 + static_cast<int>(rng.below(5)); j < c; ++j) b.instance_id.push_back(k);
    const auto n = static_cast<Eigen::Index>(b.instance_id.size());
    b.features = random_matrix(rng, n, d, 1.2);
    const auto num = oracle::numeric_gradient(
        [&](const Eigen::VectorXd& x) {
          EmbeddingBatch c = b;
          c.features = oracle::to_rows(x, n, d);
          return embedding_loss(c).value;
        },
        oracle::flatten(b.features));
    EXPECT_LE(oracle::gradient_error(embedding_loss(b).gradient, num), 1e-5) << "trial " << trial;
  }
}

TEST(EmbeddingLoss, RotationInvariant) {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    EmbeddingBatch b;
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.below(6));
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 4; ++j) b.instance_id.push_back(k);
    b.features = random_matrix(rng, 12, d);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(Eigen::MatrixXd(random_matrix(rng, d, d))).householderQ();
    EmbeddingBatch r = b;
    r.features = b.features * q;
    EXPECT_NEAR(embedding_loss(b).value, embedding_loss(r).value, 1e-9);
  }
}

TEST(EmbeddingLoss, NegativeIdsIgnoredAndEmptyRejected) {
  EmbeddingBatch b;
  b.features = RowMatrix::Zero(3, 2);
  b.instance_id = {-1, -1, -1};
  try {
    embedding_loss(b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoInstances);
  }
  b.instance_id = {0, -1, 0};
  b.features(1, 0) = 100.0;
  const LossValue v = embedding_loss(b);
  EXPECT_EQ(v.value, 0.0);
  EXPECT_EQ(v.gradient(2), 0.0);
}

TEST(TotalLoss, SumsAndConcatenates) {
  LossValue a{1.0, Eigen::VectorXd::Constant(2, 1.0)}, b{2.0, Eigen::VectorXd::Constant(3, 2.0)},
      c{3.0, Eigen::VectorXd::Constant(1, 3.0)};
  const LossValue t = total_loss(a, b, c);
  EXPECT_EQ(t.value, 6.0);
  ASSERT_EQ(t.gradient.size(), 6);
  EXPECT_EQ(t.gradient(0), 1.0);
  EXPECT_EQ(t.gradient(2), 2.0);
  EXPECT_EQ(t.gradient(5), 3.0);
  EXPECT_EQ(total_loss({}, {}, {}).value, 0.0);
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const double x = rng.uniform(0, 10), y = rng.uniform(0, 10), z = rng.uniform(0, 10);
    EXPECT_EQ(total_loss({x, {}}, {y, {}}, {z, {}}).value, x + y + z);
  }
}

}  // namespace
}  // namespace roofseg
