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

#include "roofseg/common.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace roofseg {

std::string_view to_string(Semantic s) {
  switch (s) {
    case Semantic::NonRoof: return "nonroof";
    case Semantic::Boundary: return "boundary";
    case Semantic::Plane: return "plane";
  }
  return "?";
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::MissingGroundTruth: return "MissingGroundTruth";
    case ErrorKind::EmptyInstance: return "EmptyInstance";
    case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NoInstances: return "NoInstances";
    case ErrorKind::TooManyInstances: return "TooManyInstances";
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::NoClusters: return "NoClusters";
    case ErrorKind::BothEmpty: return "BothEmpty";
    case ErrorKind::EmptyGroundTruth: return "EmptyGroundTruth";
    case ErrorKind::EmptyList: return "EmptyList";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

std::size_t Segmentation::num_points() const {
  std::size_t n = unassigned.size();
  for (const auto& c : clusters) n += c.size();
  return n;
}

std::vector<int> Segmentation::to_labels(std::size_t n) const {
  std::vector<int> labels(n, -1);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (Index i : clusters[c]) labels.at(static_cast<std::size_t>(i)) = static_cast<int>(c);
  return labels;
}

Segmentation Segmentation::from_labels(const std::vector<int>& labels) {
  Segmentation seg;
  std::map<int, std::size_t> slot;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l < 0) {
      seg.unassigned.push_back(static_cast<Index>(i));
      continue;
    }
    auto [it, inserted] = slot.try_emplace(l, seg.clusters.size());
    if (inserted) seg.clusters.emplace_back();
    seg.clusters[it->second].push_back(static_cast<Index>(i));
  }
  return seg;
}

bool identical(const Segmentation& a, const Segmentation& b) {
  return a.clusters == b.clusters && a.unassigned == b.unassigned;
}

bool same_partition(const Segmentation& a, const Segmentation& b) {
  auto canon = [](const Segmentation& s) {
    std::set<std::vector<Index>> out;
    for (auto c : s.clusters) {
      std::sort(c.begin(), c.end());
      out.insert(std::move(c));
    }
    return out;
  };
  auto ua = a.unassigned, ub = b.unassigned;
  std::sort(ua.begin(), ua.end());
  std::sort(ub.begin(), ub.end());
  return ua == ub && canon(a) == canon(b);
}

}  // namespace roofseg
