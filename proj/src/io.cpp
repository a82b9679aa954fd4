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

#include "roofseg/io.hpp"

#include "roofseg/gtlabel.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace roofseg {

namespace {

[[noreturn]] void format_error(const std::string& source, std::size_t line,
                               const std::string& msg) {
  throw Error(ErrorKind::FormatError,
              source + (line ? ":" + std::to_string(line) : std::string()) + ": " + msg);
}

// Iterates over non-comment, non-blank lines, tracking line numbers.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      tokens.clear();
      std::size_t pos = 0;
      while (pos < line_.size()) {
        while (pos < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos]))) ++pos;
        if (pos >= line_.size()) break;
        std::size_t end = pos;
        while (end < line_.size() && !std::isspace(static_cast<unsigned char>(line_[end]))) ++end;
        tokens.emplace_back(line_.data() + pos, end - pos);
        pos = end;
      }
      if (tokens.empty() || tokens.front().front() == '#') continue;
      return true;
    }
    return false;
  }

  std::size_t line() const { return line_no_; }
  const std::string& source() const { return source_; }

  [[noreturn]] void fail(const std::string& msg) const { format_error(source_, line_no_, msg); }

 private:
  std::istream& in_;
  std::string source_;
  std::string line_;
  std::size_t line_no_ = 0;
};

double parse_double(std::string_view tok, const LineReader& r, const char* field) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
    r.fail(std::string("bad ") + field + " value '" + std::string(tok) + "'");
  return v;
}

long long parse_int(std::string_view tok, const LineReader& r, const char* field) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    r.fail(std::string("bad ") + field + " value '" + std::string(tok) + "'");
  return v;
}

// Parses "KEY=<non-negative integer>".
std::size_t parse_count(std::string_view tok, std::string_view key, const LineReader& r) {
  if (tok.size() <= key.size() + 1 || tok.substr(0, key.size()) != key || tok[key.size()] != '=')
    r.fail("expected " + std::string(key) + "=<count> in header, got '" + std::string(tok) + "'");
  const long long v = parse_int(tok.substr(key.size() + 1), r, std::string(key).c_str());
  if (v < 0) r.fail("negative " + std::string(key));
  return static_cast<std::size_t>(v);
}

void expect_header(LineReader& r, std::vector<std::string_view>& tok, std::string_view magic) {
  if (!r.next(tok)) format_error(r.source(), 0, "missing '" + std::string(magic) + "' header");
  if (tok.size() < 2 || tok[0] != magic || tok[1] != "v1")
    r.fail("expected header '" + std::string(magic) + " v1 ...'");
}

void expect_end(LineReader& r, std::vector<std::string_view>& tok, std::size_t n) {
  if (r.next(tok)) r.fail("unexpected record beyond the declared N=" + std::to_string(n));
}

[[noreturn]] void truncated(const LineReader& r, std::size_t got, std::size_t n) {
  format_error(r.source(), r.line(),
               "truncated: record " + std::to_string(got + 1) + " of " + std::to_string(n) +
                   " is missing");
}

Semantic parse_semantic(std::string_view tok, const LineReader& r) {
  const long long v = parse_int(tok, r, "semantic");
  if (v < 0 || v > 2) r.fail("semantic must be 0, 1 or 2, got " + std::string(tok));
  return static_cast<Semantic>(v);
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "read failed for " + path.string());
  return os.str();
}

template <typename Parse>
auto load_with(const fs::path& path, Parse&& parse) {
  std::istringstream in(read_all(path));
  return parse(in, path.string());
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error(ErrorKind::FormatError, "cannot format double");
  return std::string(buf.data(), ptr);
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path tmp = dir / (path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorKind::Io, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

std::string format_cloud(const PointCloud& cloud) {
  const PointCloud raw = denormalize(cloud);
  const bool labeled = raw.gt.has_value();
  std::vector<Semantic> semantic;
  if (labeled) {
    semantic = raw.gt->semantic;
    if (semantic.empty()) semantic = derive_labels(raw).semantic;
    if (semantic.size() != raw.size() || raw.gt->instance_id.size() != raw.size())
      throw Error(ErrorKind::LengthMismatch, "labels do not match the cloud");
  }
  std::string s = "pointcloud v1 N=" + std::to_string(raw.size()) + (labeled ? " labeled" : "") + "\n";
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& p = raw.points[i];
    s += format_double(p.x()) + ' ' + format_double(p.y()) + ' ' + format_double(p.z());
    if (labeled) {
      s += ' ' + std::to_string(raw.gt->instance_id[i]) + ' ' +
           std::to_string(static_cast<int>(semantic[i]));
    }
    s += '\n';
  }
  return s;
}

PointCloud parse_cloud(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  std::vector<std::string_view> tok;
  expect_header(r, tok, "pointcloud");
  if (tok.size() < 3 || tok.size() > 4) r.fail("expected 'pointcloud v1 N=<n> [labeled]'");
  const std::size_t n = parse_count(tok[2], "N", r);
  bool labeled = false;
  if (tok.size() == 4) {
    if (tok[3] != "labeled") r.fail("unknown header flag '" + std::string(tok[3]) + "'");
    labeled = true;
  }

  PointCloud cloud;
  cloud.points.reserve(n);
  GroundTruth gt;
  const std::size_t fields = labeled ? 5 : 3;
  for (std::size_t i = 0; i < n; ++i) {
    if (!r.next(tok)) truncated(r, i, n);
    if (tok.size() != fields)
      r.fail("record " + std::to_string(i + 1) + ": expected " + std::to_string(fields) +
             " fields, got " + std::to_string(tok.size()));
    cloud.points.emplace_back(parse_double(tok[0], r, "x"), parse_double(tok[1], r, "y"),
                              parse_double(tok[2], r, "z"));
    if (labeled) {
      const long long id = parse_int(tok[3], r, "instance_id");
      if (id < -1 || id > 1'000'000) r.fail("instance_id out of range");
      const Semantic sem = parse_semantic(tok[4], r);
      if ((id == -1) != (sem == Semantic::NonRoof))
        r.fail("record " + std::to_string(i + 1) +
               ": instance_id -1 must coincide with semantic 0");
      gt.instance_id.push_back(static_cast<int>(id));
      gt.semantic.push_back(sem);
    }
  }
  expect_end(r, tok, n);
  if (labeled) cloud.gt = std::move(gt);
  return cloud;
}

void save_cloud(const PointCloud& cloud, const fs::path& path) {
  write_file_atomic(path, format_cloud(cloud));
}

PointCloud load_cloud(const fs::path& path) {
  return load_with(path, [](std::istream& in, const std::string& src) { return parse_cloud(in, src); });
}

std::string format_predictions(const PredictionSet& pred) {
  validate(pred);
  std::string s = "predictions v1 N=" + std::to_string(pred.size()) +
                  " D=" + std::to_string(pred.dim()) + "\n";
  for (std::size_t i = 0; i < pred.size(); ++i) {
    s += std::to_string(static_cast<int>(pred.semantic[i]));
    for (int a = 0; a < 3; ++a) s += ' ' + format_double(pred.offset[i](a));
    for (Eigen::Index d = 0; d < pred.embedding.cols(); ++d)
      s += ' ' + format_double(pred.embedding(static_cast<Eigen::Index>(i), d));
    s += '\n';
  }
  return s;
}

PredictionSet parse_predictions(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  std::vector<std::string_view> tok;
  expect_header(r, tok, "predictions");
  if (tok.size() != 4) r.fail("expected 'predictions v1 N=<n> D=<d>'");
  const std::size_t n = parse_count(tok[2], "N", r);
  const std::size_t d = parse_count(tok[3], "D", r);

  PredictionSet pred;
  pred.semantic.reserve(n);
  pred.offset.reserve(n);
  pred.embedding.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    if (!r.next(tok)) truncated(r, i, n);
    if (tok.size() != 4 + d)
      r.fail("record " + std::to_string(i + 1) + ": expected " + std::to_string(4 + d) +
             " fields (D=" + std::to_string(d) + "), got " + std::to_string(tok.size()));
    pred.semantic.push_back(parse_semantic(tok[0], r));
    pred.offset.emplace_back(parse_double(tok[1], r, "dx"), parse_double(tok[2], r, "dy"),
                             parse_double(tok[3], r, "dz"));
    for (std::size_t k = 0; k < d; ++k)
      pred.embedding(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          parse_double(tok[4 + k], r, "embedding");
  }
  expect_end(r, tok, n);
  return pred;
}

void save_predictions(const PredictionSet& pred, const fs::path& path) {
  write_file_atomic(path, format_predictions(pred));
}

PredictionSet load_predictions(const fs::path& path) {
  return load_with(path, [](std::istream& in, const std::string& src) { return parse_predictions(in, src); });
}

std::string format_segmentation(const std::vector<int>& labels) {
  int m = 0;
  for (int l : labels) m = std::max(m, l + 1);
  std::string s = "segmentation v1 N=" + std::to_string(labels.size()) + " M=" + std::to_string(m) + "\n";
  for (int l : labels) s += std::to_string(l) + '\n';
  return s;
}

std::vector<int> parse_segmentation(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  std::vector<std::string_view> tok;
  expect_header(r, tok, "segmentation");
  if (tok.size() != 4) r.fail("expected 'segmentation v1 N=<n> M=<m>'");
  const std::size_t n = parse_count(tok[2], "N", r);
  const std::size_t m = parse_count(tok[3], "M", r);
  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!r.next(tok)) truncated(r, i, n);
    if (tok.size() != 1) r.fail("record " + std::to_string(i + 1) + ": expected one id");
    const long long id = parse_int(tok[0], r, "instance_id");
    if (id < -1 || id >= static_cast<long long>(m))
      r.fail("record " + std::to_string(i + 1) + ": id " + std::to_string(id) +
             " outside [-1, M)");
    labels.push_back(static_cast<int>(id));
  }
  expect_end(r, tok, n);
  return labels;
}

void save_segmentation(const std::vector<int>& labels, const fs::path& path) {
  write_file_atomic(path, format_segmentation(labels));
}

std::vector<int> load_segmentation(const fs::path& path) {
  return load_with(path, [](std::istream& in, const std::string& src) { return parse_segmentation(in, src); });
}

std::string format_manifest(const std::vector<ManifestEntry>& entries) {
  std::string s;
  for (const auto& e : entries)
    s += e.building_id + ' ' + e.relative_path + ' ' + (e.test ? "test" : "train") + '\n';
  return s;
}

std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  std::vector<std::string_view> tok;
  std::vector<ManifestEntry> out;
  while (r.next(tok)) {
    if (tok.size() != 3) r.fail("expected '<building_id> <relative_path> <train|test>'");
    if (tok[2] != "train" && tok[2] != "test")
      r.fail("split must be 'train' or 'test', got '" + std::string(tok[2]) + "'");
    out.push_back({std::string(tok[0]), std::string(tok[1]), tok[2] == "test"});
  }
  return out;
}

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
  return load_with(path, [](std::istream& in, const std::string& src) { return parse_manifest(in, src); });
}

std::string format_colored(std::span<const Point3> points, const std::vector<int>& labels) {
  if (labels.size() != points.size())
    throw Error(ErrorKind::LengthMismatch, "labels do not match the points");
  static constexpr std::array<std::array<int, 3>, 10> kPalette = {{
      {230, 25, 75}, {60, 180, 75}, {255, 225, 25}, {0, 130, 200}, {245, 130, 48},
      {145, 30, 180}, {70, 240, 240}, {240, 50, 230}, {210, 245, 60}, {0, 128, 128},
  }};
  std::string s;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::array<int, 3> c = {128, 128, 128};
    if (labels[i] >= 0) c = kPalette[static_cast<std::size_t>(labels[i]) % kPalette.size()];
    s += format_double(points[i].x()) + ' ' + format_double(points[i].y()) + ' ' +
         format_double(points[i].z()) + ' ' + std::to_string(c[0]) + ' ' +
         std::to_string(c[1]) + ' ' + std::to_string(c[2]) + '\n';
  }
  return s;
}

}  // namespace roofseg
