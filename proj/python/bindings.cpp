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


#include "roofseg/baselines.hpp"
#include "roofseg/cluster.hpp"
#include "roofseg/commands.hpp"
#include "roofseg/features.hpp"
#include "roofseg/gtlabel.hpp"
#include "roofseg/losses.hpp"
#include "roofseg/metrics.hpp"
#include "roofseg/pipeline.hpp"
#include "roofseg/random.hpp"
#include "roofseg/synthgen.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

namespace py = pybind11;
using namespace roofseg;

namespace {

using Points = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

std::vector<Point3> to_points(const Eigen::Ref<const Points>& m) {
  std::vector<Point3> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m.row(i).transpose();
  return out;
}

Points from_points(const std::vector<Vec3>& v) {
  Points m(static_cast<Eigen::Index>(v.size()), 3);
  for (std::size_t i = 0; i < v.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = v[i].transpose();
  return m;
}

std::vector<int> from_semantic(const std::vector<Semantic>& s) {
  std::vector<int> out;
  out.reserve(s.size());
  for (Semantic x : s) out.push_back(static_cast<int>(x));
  return out;
}

std::vector<Semantic> to_semantic(const std::vector<int>& s) {
  std::vector<Semantic> out;
  out.reserve(s.size());
  for (int x : s) {
    if (x < 0 || x > 2) throw Error(ErrorKind::LabelOutOfRange, "semantic must be 0, 1 or 2");
    out.push_back(static_cast<Semantic>(x));
  }
  return out;
}

PointCloud labeled_cloud(const Eigen::Ref<const Points>& points, const std::vector<int>& instance_id) {
  PointCloud c;
  c.points = to_points(points);
  if (instance_id.size() != c.size()) throw Error(ErrorKind::LengthMismatch, "instance_id does not match points");
  c.gt = GroundTruth{};
  c.gt->instance_id = instance_id;
  return c;
}

RoofFamily family_of(const std::string& name) {
  const auto f = parse_family(name);
  if (!f) throw Error(ErrorKind::InvalidSpec, "unknown roof family '" + name + "'");
  return *f;
}

py::dict metrics_dict(const MetricsReport& r) {
  py::dict d;
  d["cov"] = r.cov;
  d["wcov"] = r.wcov;
  d["mprec"] = r.mprec;
  d["mrec"] = r.mrec;
  d["n_gt"] = r.n_gt_instances;
  d["n_pred"] = r.n_pred_instances;
  return d;
}

py::tuple loss_tuple(const LossValue& v, Eigen::Index rows, Eigen::Index cols) {
  return py::make_tuple(v.value, RowMatrix(Eigen::Map<const RowMatrix>(v.gradient.data(), rows, cols)));
}

}  // namespace

PYBIND11_MODULE(_roofseg, m) {
  m.doc() = "Roof plane instance segmentation core";

  static py::exception<Error> error(m, "RoofsegError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error;
      py::object inst = exc(e.what());
      inst.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error.ptr(), inst.ptr());
    }
  });

  m.attr("FAMILIES") = [] {
    py::list l;
    for (RoofFamily f : kAllFamilies) l.append(std::string(to_string(f)));
    return l;
  }();

  m.def(
      "generate_building",
      [](const std::string& family, std::size_t n_points, std::uint64_t seed, std::optional<double> noise_sigma,
         double clutter) {
        const RoofSpec spec = random_roof_spec(family_of(family), seed);
        PointCloud c = generate_building(spec, n_points, noise_sigma.value_or(default_noise_sigma(spec)));
        if (clutter > 0.0) c = add_nonroof_clutter(c, clutter, derive_seed(seed, 0xc1));
        py::dict d;
        d["points"] = from_points(c.points);
        d["instance_id"] = c.gt->instance_id;
        return d;
      },
      py::arg("family"), py::arg("n_points") = 2048, py::arg("seed") = 0, py::arg("noise_sigma") = py::none(),
      py::arg("clutter") = 0.0,
      "Random building of the given family; returns points (N x 3) and instance_id.");

  m.def(
      "derive_labels",
      [](const Eigen::Ref<const Points>& points, const std::vector<int>& instance_id, std::size_t k) {
        const LabelSet l = derive_labels(labeled_cloud(points, instance_id), k);
        py::dict d;
        d["semantic"] = from_semantic(l.semantic);
        d["offset"] = from_points(l.offset);
        return d;
      },
      py::arg("points"), py::arg("instance_id"), py::arg("k") = kDefaultBoundaryK);

  m.def(
      "oracle_predictions",
      [](const Eigen::Ref<const Points>& points, const std::vector<int>& instance_id, double offset_sigma,
         double embedding_sigma, double flip_rate, double boundary_noise_factor, std::uint64_t seed,
         std::size_t embed_dim, std::size_t k) {
        const PointCloud c = labeled_cloud(points, instance_id);
        NoiseSpec n;
        n.offset_sigma = offset_sigma;
        n.embedding_sigma = embedding_sigma;
        n.semantic_flip_rate = flip_rate;
        n.boundary_noise_factor = boundary_noise_factor;
        n.seed = seed;
        const PredictionSet p = oracle_predictions(c, derive_labels(c, k), n, embed_dim);
        py::dict d;
        d["semantic"] = from_semantic(p.semantic);
        d["offset"] = from_points(p.offset);
        d["embedding"] = p.embedding;
        return d;
      },
      py::arg("points"), py::arg("instance_id"), py::arg("offset_sigma") = 0.0, py::arg("embedding_sigma") = 0.0,
      py::arg("flip_rate") = 0.0, py::arg("boundary_noise_factor") = 2.0, py::arg("seed") = 0,
      py::arg("embed_dim") = kDefaultEmbedDim, py::arg("k") = kDefaultBoundaryK);

  m.def(
      "cluster",
      [](const Eigen::Ref<const Points>& shifted, const RowMatrix& embedding, double r, double w1, double w2,
         std::size_t tn, bool accelerated) {
        const std::vector<Point3> p = to_points(shifted);
        const ClusterParams params{r, w1, w2, tn};
        const Segmentation s = accelerated ? cluster_points_accelerated(p, embedding, params)
                                           : cluster_points(p, embedding, params);
        return s.to_labels(p.size());
      },
      py::arg("shifted"), py::arg("embedding"), py::arg("r") = 0.5, py::arg("w1") = 0.1, py::arg("w2") = 0.9,
      py::arg("tn") = 100, py::arg("accelerated") = true, "Per-point cluster labels, -1 for dissolved points.");

  m.def(
      "segment",
      [](const Eigen::Ref<const Points>& points, const std::vector<int>& semantic,
         const Eigen::Ref<const Points>& offset, const RowMatrix& embedding, double r, double w1, double w2,
         std::size_t tn, bool boundary_aware) {
        PredictionSet pred;
        pred.semantic = to_semantic(semantic);
        pred.offset = to_points(offset);
        pred.embedding = embedding;
        SegmentOptions o;
        o.cluster = {r, w1, w2, tn};
        o.boundary_aware = boundary_aware;
        return segment_building(to_points(points), pred, o).labels();
      },
      py::arg("points"), py::arg("semantic"), py::arg("offset"), py::arg("embedding"), py::arg("r") = 0.5,
      py::arg("w1") = 0.1, py::arg("w2") = 0.9, py::arg("tn") = 100, py::arg("boundary_aware") = true,
      "Cluster and refine one building; returns per-point instance labels.");

  m.def(
      "evaluate",
      [](const std::vector<int>& labels, const std::vector<int>& gt) {
        if (labels.size() != gt.size()) throw Error(ErrorKind::LengthMismatch, "labels and gt differ in length");
        return metrics_dict(evaluate(Segmentation::from_labels(labels), gt));
      },
      py::arg("labels"), py::arg("gt"));

  m.def(
      "ransac",
      [](const Eigen::Ref<const Points>& points, double dist_thresh, std::size_t min_points, std::size_t iterations,
         std::uint64_t seed) {
        const std::vector<Point3> p = to_points(points);
        return ransac_segment(p, {dist_thresh, min_points, iterations, seed}).to_labels(p.size());
      },
      py::arg("points"), py::arg("dist_thresh") = RansacParams{}.dist_thresh,
      py::arg("min_points") = RansacParams{}.min_points, py::arg("iterations") = RansacParams{}.iterations,
      py::arg("seed") = 0);

  m.def(
      "region_grow",
      [](const Eigen::Ref<const Points>& points, double angle_thresh_deg, double dist_thresh, std::size_t k,
         std::size_t min_points) {
        const std::vector<Point3> p = to_points(points);
        return region_grow_segment(p, {angle_thresh_deg, dist_thresh, k, min_points}).to_labels(p.size());
      },
      py::arg("points"), py::arg("angle_thresh_deg") = RegionGrowParams{}.angle_thresh_deg,
      py::arg("dist_thresh") = RegionGrowParams{}.dist_thresh, py::arg("k") = RegionGrowParams{}.k,
      py::arg("min_points") = RegionGrowParams{}.min_points);

  m.def(
      "classification_loss",
      [](const RowMatrix& logits, const std::vector<int>& labels) {
        return loss_tuple(classification_loss(logits, labels), logits.rows(), logits.cols());
      },
      py::arg("logits"), py::arg("labels"), "Returns (value, gradient).");

  m.def(
      "offset_loss",
      [](const RowMatrix& pred, const RowMatrix& gt) { return loss_tuple(offset_loss(pred, gt), pred.rows(), 3); },
      py::arg("pred"), py::arg("gt"), "Returns (value, gradient).");

  m.def(
      "embedding_loss",
      [](const RowMatrix& features, const std::vector<int>& instance_id, double pull, double push) {
        EmbeddingBatch b{features, instance_id};
        return loss_tuple(embedding_loss(b, {pull, push}), features.rows(), features.cols());
      },
      py::arg("features"), py::arg("instance_id"), py::arg("pull") = 0.5, py::arg("push") = 1.5,
      "Returns (value, gradient).");
}
