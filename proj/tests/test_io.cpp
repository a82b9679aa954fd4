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


#include "roofseg/features.hpp"
#include "roofseg/io.hpp"
#include "roofseg/random.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace roofseg {
namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

template <typename F>
std::string message_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

PointCloud parse_cloud_text(const std::string& s) {
  std::istringstream in(s);
  return parse_cloud(in, "t.cloud");
}

PredictionSet parse_pred_text(const std::string& s) {
  std::istringstream in(s);
  return parse_predictions(in, "t.pred");
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("roofseg_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST(FormatDouble, RoundTripsBitExact) {
  Rng rng(1);
  std::vector<double> values = {0.0, -0.0, 1.0, 0.1, 1e-310, std::numeric_limits<double>::max(),
                                std::numeric_limits<double>::min(), -123456.789};
  for (int i = 0; i < 2000; ++i) values.push_back(std::bit_cast<double>(rng.next_u64()));
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back), std::bit_cast<std::uint64_t>(v)) << s;
  }
}

TEST(CloudIo, LabeledRoundTrip) {
  PointCloud c = generate_building(random_roof_spec(RoofFamily::Hip, 2), 700, 0.03);
  c = add_nonroof_clutter(c, 0.2, 2);
  const std::string text = format_cloud(c);
  const PointCloud back = parse_cloud_text(text);
  EXPECT_EQ(back.points, c.points);
  ASSERT_TRUE(back.gt.has_value());
  EXPECT_EQ(back.gt->instance_id, c.gt->instance_id);
  EXPECT_EQ(back.gt->semantic, derive_labels(c).semantic);
  EXPECT_EQ(format_cloud(back), text);
}

TEST(CloudIo, NormalizedCloudWrittenInRawUnits) {
  const PointCloud c = generate_building(random_roof_spec(RoofFamily::Gable, 3), 300, 0.0);
  const PointCloud back = parse_cloud_text(format_cloud(normalize(c)));
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR((back.points[i] - c.points[i]).norm(), 0.0, 1e-9);
}

TEST(CloudIo, UnlabeledAndComments) {
  const PointCloud c = parse_cloud_text("# header comment\n\npointcloud v1 N=2\n1 2 3\n# mid\n  4 5 6  \n\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_FALSE(c.gt.has_value());
  EXPECT_EQ(c.points[1], Point3(4, 5, 6));
  EXPECT_EQ(format_cloud(c), "pointcloud v1 N=2\n1 2 3\n4 5 6\n");
}

TEST(CloudIo, Malformed) {
  EXPECT_EQ(kind_of([] { parse_cloud_text(""); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_cloud_text("pointcloud v2 N=1\n0 0 0\n"); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_cloud_text("pointcloud v1 N=1 colored\n0 0 0\n"); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_cloud_text("pointcloud v1 N=2\n0 0 0\n0 0 0\n0 0 0\n"); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_cloud_text("pointcloud v1 N=1\n0 nan 0\n"); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_cloud_text("pointcloud v1 N=1\n0 0\n"); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_cloud_text("pointcloud v1 N=1 labeled\n0 0 0 -1 1\n"); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_cloud_text("pointcloud v1 N=1 labeled\n0 0 0 2 0\n"); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_cloud_text("pointcloud v1 N=1 labeled\n0 0 0 0 3\n"); }), ErrorKind::FormatError);
}

TEST(CloudIo, TruncatedNamesMissingRecord) {
  const std::string msg = message_of([] { parse_cloud_text("pointcloud v1 N=3\n0 0 0\n1 1 1\n"); });
  EXPECT_NE(msg.find("truncated: record 3 of 3 is missing"), std::string::npos) << msg;
  EXPECT_NE(msg.find("t.cloud"), std::string::npos);
}

TEST(PredictionIo, RoundTripBitExact) {
  const PointCloud c = normalize(generate_building(random_roof_spec(RoofFamily::Saltbox, 4), 400, 0.02));
  NoiseSpec n;
  n.offset_sigma = 0.1;
  n.embedding_sigma = 0.3;
  n.semantic_flip_rate = 0.1;
  const PredictionSet p = oracle_predictions(c, derive_labels(c), n, 9);
  const PredictionSet back = parse_pred_text(format_predictions(p));
  EXPECT_EQ(back.semantic, p.semantic);
  EXPECT_EQ(back.offset, p.offset);
  EXPECT_EQ(back.embedding, p.embedding);
}

TEST(PredictionIo, DimensionMismatch) {
  const std::string msg = message_of([] { parse_pred_text("predictions v1 N=1 D=3\n2 0 0 0 1 2\n"); });
  EXPECT_NE(msg.find("expected 7 fields (D=3)"), std::string::npos) << msg;
  EXPECT_EQ(kind_of([] { parse_pred_text("predictions v1 N=1 D=1\n2 0 0 0 1 2\n"); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_pred_text("predictions v1 N=2 D=1\n2 0 0 0 1\n"); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_pred_text("predictions v1 N=1\n2 0 0 0\n"); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { parse_pred_text("predictions v1 N=1 D=0\n5 0 0 0\n"); }), ErrorKind::FormatError);
}

TEST(SegmentationIo, RoundTripAndRange) {
  const std::vector<int> labels = {0, -1, 2, 1, 1, -1};
  const std::string text = format_segmentation(labels);
  EXPECT_EQ(text.substr(0, text.find('\n')), "segmentation v1 N=6 M=3");
  std::istringstream in(text);
  EXPECT_EQ(parse_segmentation(in), labels);
  std::istringstream bad("segmentation v1 N=1 M=2\n2\n");
  EXPECT_EQ(kind_of([&] { parse_segmentation(bad); }), ErrorKind::FormatError);
  std::istringstream low("segmentation v1 N=1 M=2\n-2\n");
  EXPECT_EQ(kind_of([&] { parse_segmentation(low); }), ErrorKind::FormatError);
}

TEST(ManifestIo, RoundTrip) {
  const std::vector<ManifestEntry> m = {{"b00000", "b00000.cloud", true}, {"b00001", "b00001.cloud", false}};
  std::istringstream in("# manifest\n" + format_manifest(m));
  const auto back = parse_manifest(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].building_id, "b00000");
  EXPECT_TRUE(back[0].test);
  EXPECT_FALSE(back[1].test);
  std::istringstream bad("b0 b0.cloud validation\n");
  EXPECT_EQ(kind_of([&] { parse_manifest(bad); }), ErrorKind::FormatError);
}

TEST(Colored, PaletteAndGrey) {
  const std::vector<Point3> p = {{0, 0, 0}, {1, 2, 3}, {0.5, 0, 0}};
  const std::string s = format_colored(p, {-1, 0, 10});
  EXPECT_EQ(s, "0 0 0 128 128 128\n1 2 3 230 25 75\n0.5 0 0 230 25 75\n");
  EXPECT_EQ(kind_of([&] { format_colored(p, {0}); }), ErrorKind::LengthMismatch);
}

TEST_F(TempDir, AtomicWriteAndLoad) {
  const PointCloud c = generate_building(random_roof_spec(RoofFamily::Pyramid, 5), 200, 0.0);
  const fs::path path = dir_ / "nested" / "x.cloud";
  save_cloud(c, path);
  EXPECT_EQ(load_cloud(path).points, c.points);
  for (const auto& e : fs::directory_iterator(path.parent_path()))
    EXPECT_EQ(e.path().filename(), "x.cloud");
  save_segmentation({0, 1}, dir_ / "s.seg");
  EXPECT_EQ(load_segmentation(dir_ / "s.seg"), (std::vector<int>{0, 1}));
  EXPECT_EQ(kind_of([&] { load_cloud(dir_ / "missing.cloud"); }), ErrorKind::Io);
  EXPECT_EQ(kind_of([&] { load_manifest(dir_ / "missing.txt"); }), ErrorKind::Io);
}

}  // namespace
}  // namespace roofseg
