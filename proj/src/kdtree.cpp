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

#include "roofseg/kdtree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <utility>

namespace roofseg {

namespace {

struct Candidate {
  double dist_sq;
  Index index;
  bool operator<(const Candidate& o) const {
    return dist_sq < o.dist_sq || (dist_sq == o.dist_sq && index < o.index);
  }
};

}  // namespace

KdTree::KdTree(std::vector<double> data, std::size_t dim,
               std::size_t leaf_size)
    : data_(std::move(data)), dim_(dim), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
  if (dim_ == 0) throw Error(ErrorKind::DegenerateInput, "kd-tree dimension 0");
  if (data_.size() % dim_ != 0)
    throw Error(ErrorKind::LengthMismatch, "kd-tree data not a multiple of dim");
  n_ = data_.size() / dim_;
  order_.resize(n_);
  std::iota(order_.begin(), order_.end(), Index{0});
  if (n_ > 0) {
    nodes_.reserve(2 * (n_ / leaf_size_ + 1));
    build(0, n_);
  }
}

int KdTree::build(std::size_t begin, std::size_t end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{});
  nodes_[id].begin = begin;
  nodes_[id].end = end;
  if (end - begin <= leaf_size_) return id;

  // Split on the dimension of largest spread.
  int best_dim = 0;
  double best_spread = -1.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    double lo = data_[order_[begin] * dim_ + d], hi = lo;
    for (std::size_t i = begin + 1; i < end; ++i) {
      const double v = data_[order_[i] * dim_ + d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = static_cast<int>(d);
    }
  }
  if (best_spread <= 0.0) return id;  // all coincident: keep as a leaf

  const std::size_t mid = begin + (end - begin) / 2;
  auto coord = [&](Index i) { return data_[i * dim_ + best_dim]; };
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [&](Index a, Index b) { return coord(a) < coord(b); });
  const double split = coord(order_[mid]);
  nodes_[id].split_dim = best_dim;
  nodes_[id].split_value = split;
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double KdTree::squared_distance(std::span<const double> query,
                                std::size_t i) const {
  const double* p = data_.data() + i * dim_;
  double s = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    const double diff = query[d] - p[d];
    s += diff * diff;
  }
  return s;
}

std::vector<Index> KdTree::knn(std::span<const double> query,
                               std::size_t k) const {
  std::vector<Index> result;
  if (n_ == 0 || k == 0) return result;
  if (query.size() != dim_)
    throw Error(ErrorKind::LengthMismatch, "query dimension mismatch");
  k = std::min(k, n_);

  std::priority_queue<Candidate> heap;  // max-heap: worst on top
  auto visit = [&](auto&& self, int node_id) -> void {
    const Node& node = nodes_[node_id];
    if (node.split_dim < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const Candidate c{squared_distance(query, order_[i]), order_[i]};
        if (heap.size() < k) {
          heap.push(c);
        } else if (c < heap.top()) {
          heap.pop();
          heap.push(c);
        }
      }
      return;
    }
    const double diff = query[node.split_dim] - node.split_value;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    self(self, near);
    // Equal distances must still be visited: they may win the index tie-break.
    if (heap.size() < k || diff * diff <= heap.top().dist_sq) self(self, far);
  };
  visit(visit, 0);

  result.resize(heap.size());
  for (std::size_t i = heap.size(); i-- > 0;) {
    result[i] = heap.top().index;
    heap.pop();
  }
  return result;
}

void KdTree::radius_unsorted(std::span<const double> query, double radius_sq,
                             std::vector<Index>& out) const {
  if (n_ == 0) return;
  if (query.size() != dim_)
    throw Error(ErrorKind::LengthMismatch, "query dimension mismatch");
  auto visit = [&](auto&& self, int node_id) -> void {
    const Node& node = nodes_[node_id];
    if (node.split_dim < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i)
        if (squared_distance(query, order_[i]) <= radius_sq)
          out.push_back(order_[i]);
      return;
    }
    const double diff = query[node.split_dim] - node.split_value;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    self(self, near);
    if (diff * diff <= radius_sq) self(self, far);
  };
  visit(visit, 0);
}

std::vector<Index> KdTree::radius(std::span<const double> query,
                                  double radius_sq) const {
  std::vector<Index> out;
  radius_unsorted(query, radius_sq, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace roofseg
