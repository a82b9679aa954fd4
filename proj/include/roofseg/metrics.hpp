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
#include <string>
#include <vector>

namespace roofseg {

inline constexpr double kIouThreshold = 0.5;

struct MetricsReport {
  double cov = 0.0;
  double wcov = 0.0;
  double mprec = 0.0;
  double mrec = 0.0;
  std::size_t n_gt_instances = 0;
  std::size_t n_pred_instances = 0;
};

/// |a & b| / |a | b|. Inputs need not be sorted; duplicates are ignored.
/// Throws BothEmpty when both sets are empty.
double iou(std::span<const Index> a, std::span<const Index> b);

/// Coverage, weighted coverage, mean precision and mean recall of `pred`
/// against per-point ground-truth instance ids (-1 = non-roof).
///
/// Non-roof points are removed from every set first; predicted clusters
/// left empty by that are ignored. Matching is best-match (max IoU, not
/// one-to-one) and precision/recall count matches with IoU strictly above
/// 0.5. An empty prediction scores zero everywhere.
///
/// Throws EmptyGroundTruth when no roof instance exists.
MetricsReport evaluate(const Segmentation& pred, std::span<const int> gt_instance_id);

/// Unweighted mean of each metric; instance counts are summed.
/// Throws EmptyList for no reports.
MetricsReport aggregate(std::span<const MetricsReport> reports);

/// "cov=... wcov=... mprec=... mrec=... n_gt=... n_pred=..."
std::string to_key_values(const MetricsReport& r);

}  // namespace roofseg
