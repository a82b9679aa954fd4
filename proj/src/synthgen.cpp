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

#include "roofseg/synthgen.hpp"

#include "roofseg/random.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

namespace roofseg {

namespace {

// Height field z = a*x + b*y + c of one roof face.
struct FacePlane {
  double a, b, c;
  double height(double x, double y) const { return a * x + b * y + c; }
  // Surface area per unit footprint area.
  double area_factor() const { return std::sqrt(1.0 + a * a + b * b); }
  PlaneModel model() const {
    const double norm = std::sqrt(a * a + b * b + 1.0);
    PlaneModel p;
    p.normal = canonical_normal_sign(Vec3(-a / norm, -b / norm, 1.0 / norm));
    // normal.z > 0 always here, so no sign flip happened.
    p.offset = -c / norm;
    p.rms_residual = 0.0;
    return p;
  }
};

// A convex roof over an axis-aligned rectangle: height is the minimum of the
// part's face planes, the active face the one attaining it.
struct RoofPart {
  double x0, x1, y0, y1;
  std::vector<FacePlane> faces;
  std::vector<int> instance;  // instance id of each face

  bool contains(double x, double y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
};

// A roof is the upper envelope of its parts.
struct RoofModel {
  std::vector<RoofPart> parts;
  int num_faces = 0;
  std::vector<FacePlane> face_by_instance;
};

struct Hit {
  bool inside = false;
  double z = 0.0;
  int instance = -1;
  const FacePlane* face = nullptr;
};

Hit evaluate(const RoofModel& roof, double x, double y) {
  Hit best;
  for (const auto& part : roof.parts) {
    if (!part.contains(x, y)) continue;
    std::size_t arg = 0;
    double z = part.faces[0].height(x, y);
    for (std::size_t f = 1; f < part.faces.size(); ++f) {
      const double h = part.faces[f].height(x, y);
      if (h < z) {
        z = h;
        arg = f;
      }
    }
    if (!best.inside || z > best.z) {
      best.inside = true;
      best.z = z;
      best.instance = part.instance[arg];
      best.face = &part.faces[arg];
    }
  }
  return best;
}

void add_part(RoofModel& roof, RoofPart part) {
  for (std::size_t f = 0; f < part.faces.size(); ++f) {
    part.instance.push_back(roof.num_faces++);
    roof.face_by_instance.push_back(part.faces[f]);
  }
  roof.parts.push_back(std::move(part));
}

// Gable bar along x over [x0,x1] x [y0,y1], ridge at y = y_ridge.
RoofPart gable_bar(double x0, double x1, double y0, double y1, double y_ridge,
                   double eave, double ridge) {
  const double rise = ridge - eave;
  const double s_south = rise / (y_ridge - y0);
  const double s_north = rise / (y1 - y_ridge);
  RoofPart part{x0, x1, y0, y1, {}, {}};
  part.faces.push_back({0.0, s_south, eave - s_south * y0});
  part.faces.push_back({0.0, -s_north, eave + s_north * y1});
  return part;
}

// Gable bar along y over [x0,x1] x [y0,y1], ridge at x = x_ridge.
RoofPart gable_bar_y(double x0, double x1, double y0, double y1,
                     double x_ridge, double eave, double ridge) {
  const double rise = ridge - eave;
  const double s_west = rise / (x_ridge - x0);
  const double s_east = rise / (x1 - x_ridge);
  RoofPart part{x0, x1, y0, y1, {}, {}};
  part.faces.push_back({s_west, 0.0, eave - s_west * x0});
  part.faces.push_back({-s_east, 0.0, eave + s_east * x1});
  return part;
}

RoofModel build_roof(const RoofSpec& s) {
  const double W = s.width, D = s.depth, he = s.eave_height,
               hr = s.ridge_height, rise = hr - he;
  RoofModel roof;
  switch (s.family) {
    case RoofFamily::Gable:
      add_part(roof, gable_bar(0, W, 0, D, D / 2, he, hr));
      break;
    case RoofFamily::Saltbox:
      add_part(roof, gable_bar(0, W, 0, D, s.ratio_a * D, he, hr));
      break;
    case RoofFamily::Hip:
    case RoofFamily::Pyramid: {
      const double run_x =
          s.family == RoofFamily::Pyramid ? W / 2 : s.ratio_a * W / 2;
      const double sy = rise / (D / 2), sx = rise / run_x;
      RoofPart part{0, W, 0, D, {}, {}};
      part.faces.push_back({0.0, sy, he});            // south
      part.faces.push_back({0.0, -sy, he + sy * D});  // north
      part.faces.push_back({sx, 0.0, he});            // west
      part.faces.push_back({-sx, 0.0, he + sx * W});  // east
      add_part(roof, std::move(part));
      break;
    }
    case RoofFamily::MansardLike: {
      const double m = s.ratio_a * D / 2;
      const double z_break = he + s.ratio_b * rise;
      const double s_low = (z_break - he) / m;
      const double s_up = (hr - z_break) / (D / 2 - m);
      RoofPart part{0, W, 0, D, {}, {}};
      part.faces.push_back({0.0, s_low, he});                          // south lower
      part.faces.push_back({0.0, s_up, z_break - s_up * m});           // south upper
      part.faces.push_back({0.0, -s_up, z_break + s_up * (D - m)});    // north upper
      part.faces.push_back({0.0, -s_low, he + s_low * D});             // north lower
      add_part(roof, std::move(part));
      break;
    }
    case RoofFamily::CrossGable: {
      // Main bar plus a lower, equally pitched wing crossing it at mid-span.
      const double b = s.ratio_a * D;
      const double overhang = s.ratio_b * D;
      const double slope = rise / (D / 2);
      const double wing_ridge = he + slope * b / 2;
      const double xc = W / 2;
      add_part(roof, gable_bar(0, W, 0, D, D / 2, he, hr));
      add_part(roof, gable_bar_y(xc - b / 2, xc + b / 2, -overhang, D / 2, xc,
                                 he, wing_ridge));
      add_part(roof, gable_bar_y(xc - b / 2, xc + b / 2, D / 2, D + overhang,
                                 xc, he, wing_ridge));
      break;
    }
  }
  return roof;
}

bool in_open_unit(double r) { return r > 0.0 && r < 1.0; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view to_string(RoofFamily f) {
  switch (f) {
    case RoofFamily::Gable: return "gable";
    case RoofFamily::Hip: return "hip";
    case RoofFamily::Pyramid: return "pyramid";
    case RoofFamily::CrossGable: return "crossgable";
    case RoofFamily::Saltbox: return "saltbox";
    case RoofFamily::MansardLike: return "mansard";
  }
  return "?";
}

std::optional<RoofFamily> parse_family(std::string_view name) {
  std::string n = lower(name);
  std::erase(n, '_');
  std::erase(n, '-');
  if (n == "gable") return RoofFamily::Gable;
  if (n == "hip") return RoofFamily::Hip;
  if (n == "pyramid") return RoofFamily::Pyramid;
  if (n == "crossgable" || n == "cross") return RoofFamily::CrossGable;
  if (n == "saltbox") return RoofFamily::Saltbox;
  if (n == "mansard" || n == "mansardlike") return RoofFamily::MansardLike;
  return std::nullopt;
}

int face_count(RoofFamily f) {
  switch (f) {
    case RoofFamily::Gable:
    case RoofFamily::Saltbox: return 2;
    case RoofFamily::Hip:
    case RoofFamily::Pyramid:
    case RoofFamily::MansardLike: return 4;
    case RoofFamily::CrossGable: return 6;
  }
  return 0;
}

void validate(const RoofSpec& s) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidSpec, msg); };
  if (!(s.width > 0) || !(s.depth > 0)) fail("footprint must be positive");
  if (!(s.eave_height > 0) || !(s.ridge_height > 0)) fail("heights must be positive");
  if (!(s.ridge_height > s.eave_height)) fail("ridge_height must exceed eave_height");
  if (!in_open_unit(s.ratio_a) || !in_open_unit(s.ratio_b))
    fail("shape ratios must lie in (0, 1)");
  if (!std::isfinite(s.width + s.depth + s.ridge_height + s.eave_height))
    fail("non-finite dimension");
  if (s.family == RoofFamily::MansardLike && !(s.ratio_b > s.ratio_a))
    fail("mansard ratio_b must exceed ratio_a (lower face steeper than upper)");
  if (s.family == RoofFamily::CrossGable && !(s.ratio_a * s.depth < s.width))
    fail("cross-gable wing wider than the main bar");
}

RoofSpec random_roof_spec(RoofFamily family, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x5bec));
  RoofSpec s;
  s.family = family;
  s.seed = seed;
  s.width = rng.uniform(10.0, 16.0);
  s.depth = rng.uniform(7.0, 10.0);
  s.eave_height = rng.uniform(3.0, 6.0);
  s.ridge_height = s.eave_height + rng.uniform(2.0, 4.0);
  s.ratio_a = 0.5;
  s.ratio_b = 0.5;
  switch (family) {
    case RoofFamily::Gable: break;
    case RoofFamily::Pyramid:
      s.depth = s.width = rng.uniform(8.0, 14.0);
      break;
    case RoofFamily::Saltbox: s.ratio_a = rng.uniform(0.35, 0.65); break;
    case RoofFamily::Hip: s.ratio_a = rng.uniform(0.5, 0.8); break;
    case RoofFamily::CrossGable:
      s.width = rng.uniform(10.0, 12.0);
      s.ratio_a = rng.uniform(0.6, 0.8);
      s.ratio_b = rng.uniform(0.6, 0.9);
      break;
    case RoofFamily::MansardLike:
      s.ratio_a = rng.uniform(0.3, 0.5);
      s.ratio_b = rng.uniform(0.6, 0.8);
      break;
  }
  return s;
}

double default_noise_sigma(const RoofSpec& spec) {
  return 0.01 * std::hypot(spec.width, spec.depth);
}

PointCloud generate_building(const RoofSpec& spec, std::size_t n_points,
                             double noise_sigma) {
  validate(spec);
  const int faces = face_count(spec.family);
  if (n_points < static_cast<std::size_t>(4 * faces))
    throw Error(ErrorKind::InvalidSpec,
                "n_points must be at least 4 x face count (" +
                    std::to_string(4 * faces) + ")");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw Error(ErrorKind::InvalidSpec, "noise_sigma must be finite and >= 0");

  const RoofModel roof = build_roof(spec);
  double bx0 = std::numeric_limits<double>::max(), by0 = bx0;
  double bx1 = std::numeric_limits<double>::lowest(), by1 = bx1;
  double max_factor = 0.0;
  for (const auto& part : roof.parts) {
    bx0 = std::min(bx0, part.x0);
    bx1 = std::max(bx1, part.x1);
    by0 = std::min(by0, part.y0);
    by1 = std::max(by1, part.y1);
    for (const auto& f : part.faces) max_factor = std::max(max_factor, f.area_factor());
  }

  Rng rng(derive_seed(spec.seed, 0x6e6e));
  PointCloud cloud;
  cloud.points.reserve(n_points);
  GroundTruth gt;
  gt.instance_id.reserve(n_points);
  for (const auto& f : roof.face_by_instance) gt.face_planes.push_back(f.model());

  // Rejection sampling over the footprint, accepting with probability
  // proportional to the local surface area factor, gives area-uniform samples.
  while (cloud.points.size() < n_points) {
    const double x = rng.uniform(bx0, bx1);
    const double y = rng.uniform(by0, by1);
    const double u = rng.uniform();
    const Hit hit = evaluate(roof, x, y);
    if (!hit.inside) continue;
    if (u * max_factor >= hit.face->area_factor()) continue;
    const double z = hit.face->height(x, y);
    cloud.points.emplace_back(x, y, z);
    gt.instance_id.push_back(hit.instance);
  }
  if (noise_sigma > 0.0) {
    Rng noise(derive_seed(spec.seed, 0x401e));
    for (auto& p : cloud.points) {
      const double dx = noise.normal(), dy = noise.normal(), dz = noise.normal();
      p += noise_sigma * Vec3(dx, dy, dz);
    }
  }
  cloud.gt = std::move(gt);
  return cloud;
}

PointCloud add_nonroof_clutter(const PointCloud& cloud, double fraction,
                               std::uint64_t seed) {
  if (!cloud.gt)
    throw Error(ErrorKind::MissingGroundTruth, "clutter needs a labeled cloud");
  if (!(fraction >= 0.0 && fraction < 1.0))
    throw Error(ErrorKind::InvalidSpec, "clutter fraction must lie in [0, 1)");
  PointCloud out = cloud;
  const std::size_t n = cloud.size();
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  if (count == 0 || n == 0) return out;

  Vec3 lo = cloud.points.front(), hi = lo;
  for (const auto& p : cloud.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec3 extent = (hi - lo).cwiseMax(Vec3::Constant(1e-6));
  const Vec3 pad = 0.2 * extent;
  Rng rng(derive_seed(seed, 0xc177));
  const std::size_t below = count / 2;
  auto& gt = *out.gt;
  const bool has_sem = !gt.semantic.empty();
  for (std::size_t i = 0; i < count; ++i) {
    Point3 p;
    if (i < below) {
      p = Point3(rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()),
                 rng.uniform(lo.z() - extent.z(), lo.z()));
    } else {
      p = Point3(rng.uniform(lo.x() - pad.x(), hi.x() + pad.x()),
                 rng.uniform(lo.y() - pad.y(), hi.y() + pad.y()),
                 rng.uniform(lo.z() - pad.z(), hi.z() + pad.z()));
    }
    out.points.push_back(p);
    gt.instance_id.push_back(-1);
    if (has_sem) gt.semantic.push_back(Semantic::NonRoof);
  }
  return out;
}

PlaneModel transform_plane(const PlaneModel& plane, const Vec3& centroid,
                           double scale) {
  PlaneModel out = plane;
  out.offset = scale * (plane.normal.dot(centroid) + plane.offset);
  out.rms_residual = plane.rms_residual * scale;
  return out;
}

PointCloud normalize(const PointCloud& cloud) {
  if (cloud.points.empty())
    throw Error(ErrorKind::DegenerateInput, "cannot normalize an empty cloud");
  const PointCloud base = denormalize(cloud);
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : base.points) centroid += p;
  centroid /= static_cast<double>(base.size());
  double radius = 0.0;
  for (const auto& p : base.points) radius = std::max(radius, (p - centroid).norm());
  const double scale = radius > 0.0 ? 1.0 / radius : 1.0;

  PointCloud out = base;
  for (auto& p : out.points) p = (p - centroid) * scale;
  if (out.gt)
    for (auto& plane : out.gt->face_planes) plane = transform_plane(plane, centroid, scale);
  out.normalization = {true, centroid, scale};
  return out;
}

PointCloud denormalize(const PointCloud& cloud) {
  if (!cloud.normalization.normalized) return cloud;
  const Vec3 c = cloud.normalization.centroid;
  const double s = cloud.normalization.scale;
  PointCloud out = cloud;
  for (auto& p : out.points) p = p / s + c;
  if (out.gt) {
    for (auto& plane : out.gt->face_planes) {
      // Inverse similarity: q = q' / s + c.
      plane.offset = plane.offset / s - plane.normal.dot(c);
      plane.rms_residual /= s;
    }
  }
  out.normalization = Normalization{};
  return out;
}

}  // namespace roofseg
