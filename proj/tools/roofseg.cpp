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

// roofseg: synthesize roof datasets, segment them into roof planes,
// evaluate and compare against classical baselines.

#include "roofseg/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace roofseg;

// Flags shared by every subcommand. Values stay textual so they go through
// the same parser and validation as config files.
struct CommonFlags {
  std::string config_file;
  std::vector<std::pair<std::string, std::optional<std::string>>> flags = {
      {"r", {}}, {"w1", {}}, {"w2", {}}, {"tn", {}}, {"k_boundary", {}},
      {"provider", {}}, {"seed", {}}, {"jobs", {}},
  };
  std::vector<std::string> sets;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_file, "key = value file loaded before flags")
        ->check(CLI::ExistingFile);
    for (auto& [key, value] : flags) {
      std::string name = "--" + key;
      for (auto& c : name)
        if (c == '_') c = '-';
      app->add_option(name, value, "override config key '" + key + "'");
    }
    app->add_option("--set", sets, "override any config key, as key=value");
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg = config_file.empty() ? PipelineConfig{} : load_config(config_file);
    for (const auto& [key, value] : flags)
      if (value) set_config_value(cfg, key, *value);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw Error(ErrorKind::InvalidConfig, "--set expects key=value, got '" + kv + "'");
      set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate(cfg);
    return cfg;
  }
};

std::vector<fs::path> expand(const std::vector<std::string>& inputs, std::string_view ext) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (auto& p : list_files(in, ext)) out.push_back(std::move(p));
    } else {
      out.emplace_back(in);
    }
  }
  return out;
}

void emit(const std::string& text, const std::string& out_file) {
  if (out_file.empty())
    std::cout << text;
  else
    write_file_atomic(out_file, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Roof plane instance segmentation of building point clouds"};
  app.require_subcommand(1);

  // synth
  CommonFlags synth_flags;
  std::string synth_out, families = "all";
  std::size_t n_buildings = 0;
  std::optional<double> noise_sigma;
  std::optional<std::size_t> n_points;
  std::optional<double> clutter;
  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic dataset with a manifest");
  synth->add_option("out_dir", synth_out, "output directory")->required();
  synth->add_option("-n,--buildings", n_buildings, "number of buildings")->required();
  synth->add_option("--families", families, "family mix, e.g. gable:1,hip:2 (default all)");
  synth->add_option("--noise-sigma", noise_sigma, "Gaussian noise std in meters (default 1% of footprint diagonal)");
  synth->add_option("--points", n_points, "roof points per building");
  synth->add_option("--clutter", clutter, "non-roof points as a fraction of roof points");
  synth_flags.add_to(synth);

  // predict
  CommonFlags predict_flags;
  std::string predict_cloud, predict_out;
  auto* predict = app.add_subcommand("predict", "Write oracle or handcrafted predictions for a cloud");
  predict->add_option("cloud", predict_cloud, "input cloud file")->required()->check(CLI::ExistingFile);
  predict->add_option("-o,--out", predict_out, "output prediction file")->required();
  predict_flags.add_to(predict);

  // segment
  CommonFlags segment_flags;
  std::vector<std::string> segment_inputs;
  std::string segment_out, segment_out_dir;
  bool colored = false;
  auto* segment = app.add_subcommand("segment", "Segment clouds into roof plane instances");
  segment->add_option("clouds", segment_inputs, "cloud files or directories of *.cloud")->required();
  auto* out_opt = segment->add_option("-o,--out", segment_out, "segmentation file (single input)");
  segment->add_option("--out-dir", segment_out_dir, "directory for <id>.seg files")->excludes(out_opt);
  segment->add_flag("--colored", colored, "also write <output>.xyzrgb with one color per instance");
  segment_flags.add_to(segment);

  // eval
  std::vector<std::string> eval_pred, eval_gt;
  std::string eval_out;
  std::size_t eval_jobs = 1;
  auto* eval = app.add_subcommand("eval", "Score segmentations against labeled clouds");
  eval->add_option("--pred", eval_pred, "segmentation files or directories of *.seg")->required();
  eval->add_option("--gt", eval_gt, "labeled cloud files or directories of *.cloud")->required();
  eval->add_option("-o,--out", eval_out, "write the report here instead of stdout");
  eval->add_option("--jobs", eval_jobs, "worker threads (0 = all cores)");

  // compare
  CommonFlags compare_flags;
  std::string compare_dir, methods = "ours,ransac,region_growing", split = "all", compare_out;
  auto* compare = app.add_subcommand("compare", "Evaluate several methods on a dataset");
  compare->add_option("dataset", compare_dir, "dataset directory with manifest.txt")->required();
  compare->add_option("--methods", methods, "comma list of ours, ransac, region_growing");
  compare->add_option("--split", split, "all, train or test");
  compare->add_option("-o,--out", compare_out, "write the table here instead of stdout");
  compare_flags.add_to(compare);

  // config
  CommonFlags config_flags;
  auto* config = app.add_subcommand("config", "Print the effective configuration");
  config_flags.add_to(config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*synth) {
      PipelineConfig cfg = synth_flags.resolve();
      if (n_points) cfg.n_points = *n_points;
      if (clutter) cfg.clutter_fraction = *clutter;
      const auto manifest = cmd_synth({synth_out, n_buildings, parse_family_mix(families), noise_sigma}, cfg);
      std::size_t n_test = 0;
      for (const auto& e : manifest) n_test += e.test;
      std::cout << "wrote " << manifest.size() << " buildings (" << manifest.size() - n_test
                << " train, " << n_test << " test) to " << synth_out << "\n";
    } else if (*predict) {
      cmd_predict(predict_cloud, predict_out, predict_flags.resolve());
    } else if (*segment) {
      const PipelineConfig cfg = segment_flags.resolve();
      const auto clouds = expand(segment_inputs, ".cloud");
      if (clouds.empty()) throw Error(ErrorKind::EmptyList, "no cloud files given");
      if (!segment_out.empty() && clouds.size() != 1)
        throw Error(ErrorKind::InvalidConfig, "--out takes a single input; use --out-dir");
      std::vector<SegmentJob> jobs;
      for (const auto& c : clouds) {
        SegmentJob job{c, {}, {}};
        if (!segment_out.empty())
          job.out = segment_out;
        else
          job.out = fs::path(segment_out_dir.empty() ? "." : segment_out_dir) / (c.stem().string() + ".seg");
        if (colored) job.colored = fs::path(job.out).replace_extension(".xyzrgb");
        jobs.push_back(std::move(job));
      }
      const auto results = cmd_segment(jobs, cfg);
      for (std::size_t i = 0; i < jobs.size(); ++i)
        std::cout << jobs[i].cloud.stem().string() << ": "
                  << results[i].segmentation.clusters.size() << " instances -> "
                  << jobs[i].out.string() << "\n";
    } else if (*eval) {
      const EvalReport report = cmd_eval(expand(eval_pred, ".seg"), expand(eval_gt, ".cloud"), eval_jobs);
      emit(format_eval_report(report), eval_out);
    } else if (*compare) {
      const CompareTable table =
          cmd_compare(compare_dir, parse_methods(methods), compare_flags.resolve(), parse_split(split));
      emit(format_compare_table(table), compare_out);
    } else if (*config) {
      std::cout << format_config(config_flags.resolve());
    }
  } catch (const Error& e) {
    std::cerr << "roofseg: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "roofseg: io: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "roofseg: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
