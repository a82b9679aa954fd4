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

#include "roofseg/commands.hpp"

#include "roofseg/parallel.hpp"
#include "roofseg/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace roofseg {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

RoofFamily pick_family(const std::vector<FamilyWeight>& mix, std::uint64_t seed) {
  double total = 0.0;
  for (const auto& fw : mix) total += fw.weight;
  double u = Rng(seed).uniform() * total;
  for (const auto& fw : mix) {
    if (u < fw.weight) return fw.family;
    u -= fw.weight;
  }
  return mix.back().family;
}

void scale_offsets(PredictionSet& pred, double factor) {
  for (auto& o : pred.offset) o *= factor;
}

}  // namespace

std::vector<FamilyWeight> parse_family_mix(std::string_view text) {
  std::vector<FamilyWeight> mix;
  if (text.empty() || text == "all") {
    for (RoofFamily f : kAllFamilies) mix.push_back({f, 1.0});
    return mix;
  }
  for (std::string_view item : split(text, ',')) {
    const auto colon = item.find(':');
    const std::string_view name = item.substr(0, colon);
    const auto family = parse_family(name);
    if (!family) throw Error(ErrorKind::InvalidConfig, "unknown roof family '" + std::string(name) + "'");
    double w = 1.0;
    if (colon != std::string_view::npos) {
      const std::string_view ws = item.substr(colon + 1);
      const auto [p, ec] = std::from_chars(ws.data(), ws.data() + ws.size(), w);
      if (ec != std::errc() || p != ws.data() + ws.size() || !std::isfinite(w) || w < 0.0)
        throw Error(ErrorKind::InvalidConfig, "bad family weight '" + std::string(ws) + "'");
    }
    if (w > 0.0) mix.push_back({*family, w});
  }
  if (mix.empty()) throw Error(ErrorKind::InvalidConfig, "family mix has no positive weight");
  return mix;
}

std::string building_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "b%05zu", index);
  return buf;
}

std::uint64_t building_seed(std::uint64_t base, std::string_view id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : id) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return derive_seed(base, h);
}

PointCloud synth_building(RoofFamily family, std::uint64_t seed, const PipelineConfig& cfg,
                          std::optional<double> noise_sigma) {
  const RoofSpec spec = random_roof_spec(family, seed);
  PointCloud cloud = generate_building(spec, cfg.n_points, noise_sigma.value_or(default_noise_sigma(spec)));
  if (cfg.clutter_fraction > 0.0)
    cloud = add_nonroof_clutter(cloud, cfg.clutter_fraction, derive_seed(seed, 0xc1));
  attach_labels(cloud, derive_labels(cloud, cfg.k_boundary));
  return cloud;
}

std::vector<ManifestEntry> cmd_synth(const SynthOptions& opts, const PipelineConfig& cfg) {
  validate(cfg);
  if (opts.noise_sigma && !(std::isfinite(*opts.noise_sigma) && *opts.noise_sigma >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "noise_sigma must be finite and >= 0");
  const auto mix = opts.mix.empty() ? parse_family_mix("all") : opts.mix;

  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec || !fs::is_directory(opts.out_dir))
    throw Error(ErrorKind::Io, "cannot create directory " + opts.out_dir.string());

  std::vector<ManifestEntry> manifest(opts.n_buildings);
  parallel_for(opts.n_buildings, cfg.jobs, [&](std::size_t i) {
    const std::string id = building_id(i);
    const std::uint64_t seed = derive_seed(cfg.seed, i);
    const RoofFamily family = pick_family(mix, derive_seed(seed, 0xfa));
    const PointCloud cloud = synth_building(family, seed, cfg, opts.noise_sigma);
    save_cloud(cloud, opts.out_dir / (id + ".cloud"));
    manifest[i] = {id, id + ".cloud", is_test_index(i)};
  });
  write_file_atomic(opts.out_dir / "manifest.txt", format_manifest(manifest));
  return manifest;
}

PredictionSet make_predictions(const PointCloud& cloud, const PipelineConfig& cfg,
                               std::string_view id) {
  const PointCloud norm = normalize(cloud);
  PredictionSet pred;
  switch (cfg.provider.kind) {
    case ProviderKind::Oracle: {
      if (!cloud.gt)
        throw Error(ErrorKind::MissingGroundTruth, "oracle provider needs a labeled cloud");
      NoiseSpec noise = cfg.noise;
      noise.seed = building_seed(cfg.seed, id);
      pred = oracle_predictions(norm, derive_labels(norm, cfg.k_boundary), noise, cfg.embed_dim);
      break;
    }
    case ProviderKind::Handcrafted:
      pred = handcrafted_predictions(norm, cfg.handcrafted_k, cfg.embed_dim);
      break;
    case ProviderKind::File:
      throw Error(ErrorKind::InvalidConfig, "file provider does not compute predictions");
  }
  scale_offsets(pred, 1.0 / norm.normalization.scale);
  return pred;
}

SegmentResult segment_cloud(const PointCloud& cloud, const PipelineConfig& cfg,
                            std::string_view id) {
  const PointCloud raw = denormalize(cloud);
  PredictionSet pred;
  if (cfg.provider.kind == ProviderKind::File) {
    fs::path path = cfg.provider.path;
    if (fs::is_directory(path)) path /= std::string(id) + ".pred";
    pred = load_predictions(path);
  } else {
    pred = make_predictions(raw, cfg, id);
  }
  SegmentOptions opts;
  opts.cluster = cfg.cluster;
  opts.refine = cfg.refine;
  opts.boundary_aware = cfg.boundary_aware;
  opts.accelerated = cfg.accelerated;
  return segment_building(raw.points, pred, opts);
}

std::vector<SegmentResult> cmd_segment(const std::vector<SegmentJob>& jobs,
                                       const PipelineConfig& cfg) {
  validate(cfg);
  std::vector<SegmentResult> results(jobs.size());
  parallel_for(jobs.size(), cfg.jobs, [&](std::size_t i) {
    const SegmentJob& job = jobs[i];
    const PointCloud cloud = load_cloud(job.cloud);
    results[i] = segment_cloud(cloud, cfg, job.cloud.stem().string());
    const std::vector<int> labels = results[i].labels();
    save_segmentation(labels, job.out);
    if (job.colored) write_file_atomic(*job.colored, format_colored(cloud.points, labels));
  });
  return results;
}

void cmd_predict(const fs::path& cloud, const fs::path& out, const PipelineConfig& cfg) {
  validate(cfg);
  save_predictions(make_predictions(load_cloud(cloud), cfg, cloud.stem().string()), out);
}

EvalReport cmd_eval(const std::vector<fs::path>& pred_files, const std::vector<fs::path>& gt_files,
                    std::size_t jobs) {
  std::map<std::string, fs::path> preds, gts;
  for (const auto& p : pred_files) {
    if (!preds.emplace(p.stem().string(), p).second)
      throw Error(ErrorKind::FormatError, "duplicate prediction for building " + p.stem().string());
  }
  for (const auto& g : gt_files) {
    if (!gts.emplace(g.stem().string(), g).second)
      throw Error(ErrorKind::FormatError, "duplicate ground truth for building " + g.stem().string());
  }
  std::vector<std::string> unpaired;
  for (const auto& [id, _] : preds)
    if (!gts.contains(id)) unpaired.push_back(id + " (no ground truth)");
  for (const auto& [id, _] : gts)
    if (!preds.contains(id)) unpaired.push_back(id + " (no prediction)");
  if (!unpaired.empty()) {
    std::string msg = "pairing mismatch:";
    for (const auto& u : unpaired) msg += " " + u;
    throw Error(ErrorKind::FormatError, msg);
  }
  if (preds.empty()) throw Error(ErrorKind::EmptyList, "nothing to evaluate");

  EvalReport report;
  for (const auto& [id, _] : preds) report.rows.push_back({id, {}});
  parallel_for(report.rows.size(), jobs, [&](std::size_t i) {
    const std::string& id = report.rows[i].id;
    const std::vector<int> labels = load_segmentation(preds.at(id));
    const PointCloud gt = load_cloud(gts.at(id));
    if (!gt.gt) throw Error(ErrorKind::MissingGroundTruth, gts.at(id).string() + " is not labeled");
    if (labels.size() != gt.size())
      throw Error(ErrorKind::LengthMismatch,
                  id + ": segmentation has " + std::to_string(labels.size()) +
                      " points, ground truth " + std::to_string(gt.size()));
    report.rows[i].report = evaluate(Segmentation::from_labels(labels), gt.gt->instance_id);
  });
  std::vector<MetricsReport> all;
  for (const auto& r : report.rows) all.push_back(r.report);
  report.aggregate = aggregate(all);
  return report;
}

std::string format_eval_report(const EvalReport& report) {
  std::string s;
  for (const auto& r : report.rows) s += "building=" + r.id + " " + to_key_values(r.report) + "\n";
  s += "building=ALL " + to_key_values(report.aggregate) + "\n\n";
  s += "building\tCov\tWCov\tmPrec\tmRec\n";
  auto row = [&](const std::string& id, const MetricsReport& m) {
    s += id + '\t' + fixed4(m.cov) + '\t' + fixed4(m.wcov) + '\t' + fixed4(m.mprec) + '\t' +
         fixed4(m.mrec) + '\n';
  };
  for (const auto& r : report.rows) row(r.id, r.report);
  row("ALL", report.aggregate);
  return s;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Ours: return "ours";
    case Method::Ransac: return "ransac";
    case Method::RegionGrowing: return "region_growing";
  }
  return "?";
}

std::vector<Method> parse_methods(std::string_view text) {
  std::vector<Method> out;
  for (std::string_view name : split(text, ',')) {
    Method m;
    if (name == "ours") m = Method::Ours;
    else if (name == "ransac") m = Method::Ransac;
    else if (name == "region_growing") m = Method::RegionGrowing;
    else throw Error(ErrorKind::InvalidConfig, "unknown method '" + std::string(name) + "'");
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

MetricsReport run_method(Method method, const PointCloud& cloud, const PipelineConfig& cfg,
                         std::string_view id) {
  if (!cloud.gt) throw Error(ErrorKind::MissingGroundTruth, "evaluation needs a labeled cloud");
  Segmentation seg;
  switch (method) {
    case Method::Ours:
      try {
        seg = segment_cloud(cloud, cfg, id).segmentation;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoClusters) throw;
        seg = Segmentation::from_labels(std::vector<int>(cloud.size(), -1));
      }
      break;
    case Method::Ransac: {
      RansacParams p = cfg.ransac;
      p.seed = building_seed(cfg.seed, id);
      seg = ransac_segment(normalize(cloud).points, p);
      break;
    }
    case Method::RegionGrowing:
      seg = region_grow_segment(normalize(cloud).points, cfg.region_grow);
      break;
  }
  return evaluate(seg, cloud.gt->instance_id);
}

Split parse_split(std::string_view text) {
  if (text == "all") return Split::All;
  if (text == "train") return Split::Train;
  if (text == "test") return Split::Test;
  throw Error(ErrorKind::InvalidConfig, "split must be all, train or test");
}

CompareTable cmd_compare(const fs::path& dataset_dir, const std::vector<Method>& methods,
                         const PipelineConfig& cfg, Split split) {
  validate(cfg);
  if (methods.empty()) throw Error(ErrorKind::InvalidConfig, "no methods to compare");
  std::vector<ManifestEntry> entries;
  for (auto& e : load_manifest(dataset_dir / "manifest.txt")) {
    if (split == Split::All || (split == Split::Test) == e.test) entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.building_id < b.building_id; });
  if (entries.empty()) throw Error(ErrorKind::EmptyList, "no buildings in the selected split");

  CompareTable table;
  table.methods = methods;
  table.per_building.assign(methods.size(), std::vector<EvalRow>(entries.size()));
  parallel_for(entries.size(), cfg.jobs, [&](std::size_t i) {
    const PointCloud cloud = load_cloud(dataset_dir / entries[i].relative_path);
    for (std::size_t m = 0; m < methods.size(); ++m)
      table.per_building[m][i] = {entries[i].building_id,
                                  run_method(methods[m], cloud, cfg, entries[i].building_id)};
  });
  for (const auto& rows : table.per_building) {
    std::vector<MetricsReport> all;
    for (const auto& r : rows) all.push_back(r.report);
    table.aggregate.push_back(aggregate(all));
  }
  return table;
}

std::string format_compare_table(const CompareTable& table) {
  std::string s = "Method\tCov\tWCov\tmPrec\tmRec\n";
  for (std::size_t m = 0; m < table.methods.size(); ++m) {
    const auto& r = table.aggregate[m];
    s += std::string(to_string(table.methods[m])) + '\t' + fixed4(r.cov) + '\t' + fixed4(r.wcov) +
         '\t' + fixed4(r.mprec) + '\t' + fixed4(r.mrec) + '\n';
  }
  return s;
}

std::vector<fs::path> list_files(const fs::path& dir, std::string_view extension) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorKind::Io, dir.string() + " is not a directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir, ec))
    if (e.is_regular_file() && e.path().extension() == extension) out.push_back(e.path());
  if (ec) throw Error(ErrorKind::Io, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace roofseg
