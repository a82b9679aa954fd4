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

#include "roofseg/metrics.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace roofseg {

double iou(std::span<const Index> a, std::span<const Index> b) {
  std::vector<Index> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  std::sort(sb.begin(), sb.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  if (sa.empty() && sb.empty()) throw Error(ErrorKind::BothEmpty, "IoU of two empty sets");
  std::vector<Index> inter;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(inter));
  const double n_inter = static_cast<double>(inter.size());
  return n_inter / (static_cast<double>(sa.size() + sb.size()) - n_inter);
}

MetricsReport evaluate(const Segmentation& pred, std::span<const int> gt) {
  // Ground-truth instance sizes over roof points.
  std::map<int, std::size_t> gt_size;
  for (int id : gt)
    if (id >= 0) ++gt_size[id];
  if (gt_size.empty())
    throw Error(ErrorKind::EmptyGroundTruth, "ground truth has no roof instance");

  std::map<int, std::size_t> gt_slot;
  std::vector<double> gsize;
  for (const auto& [id, size] : gt_size) {
    gt_slot[id] = gsize.size();
    gsize.push_back(static_cast<double>(size));
  }
  const std::size_t n_gt = gsize.size();

  // Contingency counts between surviving predicted clusters and GT instances.
  std::vector<double> psize;
  std::vector<std::map<std::size_t, std::size_t>> overlap;
  for (const auto& cluster : pred.clusters) {
    std::map<std::size_t, std::size_t> row;
    std::size_t size = 0;
    for (Index i : cluster) {
      if (i < 0 || static_cast<std::size_t>(i) >= gt.size())
        throw Error(ErrorKind::LengthMismatch, "predicted index outside the ground truth");
      const int id = gt[static_cast<std::size_t>(i)];
      if (id < 0) continue;
      ++row[gt_slot[id]];
      ++size;
    }
    if (size == 0) continue;
    psize.push_back(static_cast<double>(size));
    overlap.push_back(std::move(row));
  }

  MetricsReport r;
  r.n_gt_instances = n_gt;
  r.n_pred_instances = psize.size();
  if (psize.empty()) return r;

  std::vector<double> best_gt(n_gt, 0.0), best_pred(psize.size(), 0.0);
  for (std::size_t p = 0; p < psize.size(); ++p) {
    for (const auto& [g, count] : overlap[p]) {
      const double inter = static_cast<double>(count);
      const double v = inter / (psize[p] + gsize[g] - inter);
      best_gt[g] = std::max(best_gt[g], v);
      best_pred[p] = std::max(best_pred[p], v);
    }
  }

  double total = 0.0;
  for (double s : gsize) total += s;
  std::size_t recalled = 0, precise = 0;
  for (std::size_t g = 0; g < n_gt; ++g) {
    r.cov += best_gt[g];
    r.wcov += gsize[g] * best_gt[g];
    if (best_gt[g] > kIouThreshold) ++recalled;
  }
  for (double v : best_pred)
    if (v > kIouThreshold) ++precise;
  r.cov /= static_cast<double>(n_gt);
  r.wcov /= total;
  r.mrec = static_cast<double>(recalled) / static_cast<double>(n_gt);
  r.mprec = static_cast<double>(precise) / static_cast<double>(psize.size());
  return r;
}

MetricsReport aggregate(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw Error(ErrorKind::EmptyList, "no reports to aggregate");
  // Summing in sorted order makes the mean independent of report order.
  auto mean_of = [&](double MetricsReport::*field) {
    std::vector<double> v;
    v.reserve(reports.size());
    for (const auto& r : reports) v.push_back(r.*field);
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  MetricsReport out;
  out.cov = mean_of(&MetricsReport::cov);
  out.wcov = mean_of(&MetricsReport::wcov);
  out.mprec = mean_of(&MetricsReport::mprec);
  out.mrec = mean_of(&MetricsReport::mrec);
  for (const auto& r : reports) {
    out.n_gt_instances += r.n_gt_instances;
    out.n_pred_instances += r.n_pred_instances;
  }
  return out;
}

std::string to_key_values(const MetricsReport& r) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << "cov=" << r.cov << " wcov=" << r.wcov << " mprec=" << r.mprec
     << " mrec=" << r.mrec << " n_gt=" << r.n_gt_instances
     << " n_pred=" << r.n_pred_instances;
  return os.str();
}

}  // namespace roofseg
