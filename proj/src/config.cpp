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

#include "roofseg/config.hpp"

#include "roofseg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace roofseg {

Provider Provider::parse(std::string_view text) {
  if (text == "oracle") return {ProviderKind::Oracle, {}};
  if (text == "handcrafted") return {ProviderKind::Handcrafted, {}};
  if (text.starts_with("file:") && text.size() > 5)
    return {ProviderKind::File, std::string(text.substr(5))};
  throw Error(ErrorKind::InvalidConfig,
              "provider must be oracle, handcrafted or file:<path>, got '" + std::string(text) + "'");
}

std::string Provider::to_string() const {
  switch (kind) {
    case ProviderKind::Oracle: return "oracle";
    case ProviderKind::Handcrafted: return "handcrafted";
    case ProviderKind::File: return "file:" + path;
  }
  return {};
}

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* what) {
  throw Error(ErrorKind::InvalidConfig,
              std::string(key) + ": expected " + what + ", got '" + std::string(value) + "'");
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    bad_value(key, v, "a finite number");
  return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "a non-negative integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

struct KeyHandler {
  std::string key;
  std::function<void(PipelineConfig&, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <typename T>
KeyHandler real_key(std::string key, T PipelineConfig::*outer, double T::*field) {
  return {key,
          [key, outer, field](PipelineConfig& c, std::string_view v) { c.*outer.*field = to_double(key, v); },
          [outer, field](const PipelineConfig& c) { return format_double(c.*outer.*field); }};
}

template <typename T>
KeyHandler count_key(std::string key, T PipelineConfig::*outer, std::size_t T::*field) {
  return {key,
          [key, outer, field](PipelineConfig& c, std::string_view v) {
            c.*outer.*field = static_cast<std::size_t>(to_u64(key, v));
          },
          [outer, field](const PipelineConfig& c) { return std::to_string(c.*outer.*field); }};
}

KeyHandler top_count(std::string key, std::size_t PipelineConfig::*field) {
  return {key,
          [key, field](PipelineConfig& c, std::string_view v) {
            c.*field = static_cast<std::size_t>(to_u64(key, v));
          },
          [field](const PipelineConfig& c) { return std::to_string(c.*field); }};
}

KeyHandler top_bool(std::string key, bool PipelineConfig::*field) {
  return {key, [key, field](PipelineConfig& c, std::string_view v) { c.*field = to_bool(key, v); },
          [field](const PipelineConfig& c) { return std::string(c.*field ? "true" : "false"); }};
}

const std::vector<KeyHandler>& handlers() {
  using C = PipelineConfig;
  static const std::vector<KeyHandler> table = {
      real_key("r", &C::cluster, &ClusterParams::radius),
      real_key("w1", &C::cluster, &ClusterParams::w1),
      real_key("w2", &C::cluster, &ClusterParams::w2),
      count_key("tn", &C::cluster, &ClusterParams::min_cluster_size),
      top_count("k_boundary", &C::k_boundary),
      {"provider", [](C& c, std::string_view v) { c.provider = Provider::parse(v); },
       [](const C& c) { return c.provider.to_string(); }},
      {"seed", [](C& c, std::string_view v) { c.seed = to_u64("seed", v); },
       [](const C& c) { return std::to_string(c.seed); }},
      top_count("jobs", &C::jobs),
      top_count("embed_dim", &C::embed_dim),
      real_key("offset_sigma", &C::noise, &NoiseSpec::offset_sigma),
      real_key("embedding_sigma", &C::noise, &NoiseSpec::embedding_sigma),
      real_key("flip_rate", &C::noise, &NoiseSpec::semantic_flip_rate),
      real_key("boundary_noise_factor", &C::noise, &NoiseSpec::boundary_noise_factor),
      top_count("handcrafted_k", &C::handcrafted_k),
      real_key("refine_plane_weight", &C::refine, &RefineWeights::plane),
      real_key("refine_embedding_weight", &C::refine, &RefineWeights::embedding),
      top_bool("boundary_aware", &C::boundary_aware),
      top_bool("accelerated", &C::accelerated),
      real_key("ransac_dist_thresh", &C::ransac, &RansacParams::dist_thresh),
      count_key("ransac_min_points", &C::ransac, &RansacParams::min_points),
      count_key("ransac_iterations", &C::ransac, &RansacParams::iterations),
      real_key("rg_angle_thresh", &C::region_grow, &RegionGrowParams::angle_thresh_deg),
      real_key("rg_dist_thresh", &C::region_grow, &RegionGrowParams::dist_thresh),
      count_key("rg_k", &C::region_grow, &RegionGrowParams::k),
      count_key("rg_min_points", &C::region_grow, &RegionGrowParams::min_points),
      top_count("n_points", &C::n_points),
      {"clutter_fraction", [](C& c, std::string_view v) { c.clutter_fraction = to_double("clutter_fraction", v); },
       [](const C& c) { return format_double(c.clutter_fraction); }},
  };
  return table;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& h : handlers()) k.push_back(h.key);
    return k;
  }();
  return keys;
}

void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& h : handlers()) {
    if (h.key == key) {
      h.set(cfg, trim(value));
      return;
    }
  }
  throw Error(ErrorKind::InvalidConfig, "unknown config key '" + std::string(key) + "'");
}

void validate(const PipelineConfig& cfg) {
  validate(cfg.cluster);
  validate(cfg.noise);
  validate(cfg.ransac);
  validate(cfg.region_grow);
  if (!(std::isfinite(cfg.refine.plane) && cfg.refine.plane >= 0.0 &&
        std::isfinite(cfg.refine.embedding) && cfg.refine.embedding >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "refine weights must be finite and >= 0");
  if (cfg.k_boundary < 2) throw Error(ErrorKind::InvalidConfig, "k_boundary must be >= 2");
  if (cfg.embed_dim < 1) throw Error(ErrorKind::InvalidConfig, "embed_dim must be >= 1");
  if (cfg.handcrafted_k < 3) throw Error(ErrorKind::InvalidConfig, "handcrafted_k must be >= 3");
  if (cfg.provider.kind == ProviderKind::Handcrafted && cfg.embed_dim < 5)
    throw Error(ErrorKind::InvalidConfig, "handcrafted provider needs embed_dim >= 5");
  if (cfg.n_points < 1) throw Error(ErrorKind::InvalidConfig, "n_points must be >= 1");
  if (!(cfg.clutter_fraction >= 0.0 && cfg.clutter_fraction < 1.0))
    throw Error(ErrorKind::InvalidConfig, "clutter_fraction must lie in [0, 1)");
}

PipelineConfig parse_config(std::istream& in, const std::string& source, PipelineConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::InvalidConfig,
                  source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    try {
      set_config_value(base, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(e.kind(), source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate(base);
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  return parse_config(in, path.string(), std::move(base));
}

std::string format_config(const PipelineConfig& cfg) {
  std::string s;
  for (const auto& h : handlers()) s += h.key + " = " + h.get(cfg) + "\n";
  return s;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
      return 4;
    case ErrorKind::FormatError:
    case ErrorKind::LengthMismatch:
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidSpec:
    case ErrorKind::LabelOutOfRange:
    case ErrorKind::MissingGroundTruth:
      return 2;
    default:
      return 3;
  }
}

}  // namespace roofseg
