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

#include <span>
#include <vector>

namespace roofseg {

/// Static kd-tree over points of arbitrary dimension stored row-major.
///
/// Results are exact: knn returns the same indices, in the same order, as a
/// linear scan that sorts by (squared distance, index). Squared distances are
/// always accumulated over dimensions in ascending order so the tree and a
/// brute-force scan compare identical floating-point values.
class KdTree {
 public:
  KdTree() = default;

  /// Copies `data` (n rows of `dim` values).
  KdTree(std::vector<double> data, std::size_t dim, std::size_t leaf_size = 16);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> point(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }

  /// The min(k, size()) nearest points, ascending by distance then index.
  std::vector<Index> knn(std::span<const double> query, std::size_t k) const;

  /// All points with squared distance <= radius_sq, ascending by index.
  std::vector<Index> radius(std::span<const double> query,
                            double radius_sq) const;

  /// Same as radius() but appends into `out` without sorting.
  void radius_unsorted(std::span<const double> query, double radius_sq,
                       std::vector<Index>& out) const;

  double squared_distance(std::span<const double> query, std::size_t i) const;

 private:
  struct Node {
    // Leaf when split_dim < 0; then [begin, end) indexes into order_.
    int split_dim = -1;
    double split_value = 0.0;
    std::size_t begin = 0, end = 0;
    int left = -1, right = -1;
  };

  int build(std::size_t begin, std::size_t end);

  std::vector<double> data_;
  std::vector<Index> order_;
  std::vector<Node> nodes_;
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::size_t leaf_size_ = 16;
};

}  // namespace roofseg
