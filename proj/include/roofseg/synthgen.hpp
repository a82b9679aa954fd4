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
#include "roofseg/geom.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace roofseg {

enum class RoofFamily { Gable, Hip, Pyramid, CrossGable, Saltbox, MansardLike };

inline constexpr std::array<RoofFamily, 6> kAllFamilies = {
    RoofFamily::Gable,      RoofFamily::Hip,     RoofFamily::Pyramid,
    RoofFamily::CrossGable, RoofFamily::Saltbox, RoofFamily::MansardLike};

std::string_view to_string(RoofFamily f);
/// Case-insensitive; accepts "cross_gable"/"crossgable", "mansard"/"mansardlike".
std::optional<RoofFamily> parse_family(std::string_view name);

/// Number of planar faces (= instances) a family produces.
int face_count(RoofFamily f);

/// Parametric roof. The footprint spans x in [0, width], y in [0, depth];
/// ridges run along x.
///
/// Family-specific ratios (each in the open interval (0, 1)):
///   Saltbox      ratio_a: ridge position as a fraction of depth
///   Hip          ratio_a: hip run as a fraction of width / 2
///   CrossGable   ratio_a: wing width / depth, ratio_b: wing overhang / depth
///   MansardLike  ratio_a: slope break as a fraction of depth / 2,
///                ratio_b: fraction of the rise reached at the break
///                (must exceed ratio_a so the lower face is steeper)
/// Gable and Pyramid ignore the ratios. Pyramid puts its apex over the
/// footprint center.
struct RoofSpec {
  RoofFamily family = RoofFamily::Gable;
  double width = 12.0;
  double depth = 8.0;
  double ridge_height = 9.0;
  double eave_height = 6.0;
  double ratio_a = 0.5;
  double ratio_b = 0.5;
  std::uint64_t seed = 0;
};

/// Throws Error(InvalidSpec) on any violated invariant.
void validate(const RoofSpec& spec);

/// Draws a spec from family-specific parameter ranges chosen so that every
/// face receives a sizeable share of the roof area.
RoofSpec random_roof_spec(RoofFamily family, std::uint64_t seed);

/// Default scanner noise: 1% of the footprint diagonal.
double default_noise_sigma(const RoofSpec& spec);

struct GroundTruth {
  /// Instance per point; -1 marks non-roof points.
  std::vector<int> instance_id;
  /// Exact analytic plane of each instance.
  std::vector<PlaneModel> face_planes;
  /// Optional per-point supervision class (empty when not derived).
  std::vector<Semantic> semantic;

  int num_instances() const { return static_cast<int>(face_planes.size()); }
};

struct Normalization {
  bool normalized = false;
  Vec3 centroid = Vec3::Zero();
  /// Multiplier applied after centering (1 / max radius).
  double scale = 1.0;
};

struct PointCloud {
  std::vector<Point3> points;
  std::optional<GroundTruth> gt;
  Normalization normalization;

  std::size_t size() const { return points.size(); }
};

/// Samples `n_points` uniformly by area over the roof faces and perturbs
/// them with isotropic Gaussian noise. Deterministic in spec.seed.
PointCloud generate_building(const RoofSpec& spec, std::size_t n_points,
                             double noise_sigma);

/// Appends floor(fraction * N) non-roof points: half below the lowest roof
/// point (facade / vegetation proxy), half uniform in a box inflated by 20%
/// per side (outlier proxy).
PointCloud add_nonroof_clutter(const PointCloud& cloud, double fraction,
                               std::uint64_t seed);

/// Centers on the centroid and scales the max radius to 1. Face planes
/// are transformed along with the points.
PointCloud normalize(const PointCloud& cloud);

/// Inverse of normalize(); a no-op on clouds that are not normalized.
PointCloud denormalize(const PointCloud& cloud);

/// Applies the similarity q' = (q - centroid) * scale to a plane.
PlaneModel transform_plane(const PlaneModel& plane, const Vec3& centroid,
                           double scale);

}  // namespace roofseg
