// Copyright 2026 The UnityGraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <cmath>
#include <fstream>

#include "gpl/annotations.hpp"
#include "gpl/clip_span.hpp"
#include "gpl/error.hpp"
#include "gpl/features.hpp"
#include "gpl/manifest.hpp"
#include "test_util.hpp"

using namespace gpl;
using gpl::test::Bytes;
using gpl::test::TempDir;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected gpl::Error");
  return ErrorCode::IoError;
}

// every window start over the subsampled sequence, enumerated directly
std::vector<std::pair<std::uint32_t, std::uint32_t>> enumerate_windows(std::uint32_t m,
                                                                       SamplerConfig c) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  const std::uint32_t sampled = m / c.sigma;
  for (std::uint32_t s = 0; s + c.psi <= sampled; s += c.omega) {
    out.emplace_back(s * c.sigma, (s + c.psi) * c.sigma);
  }
  return out;
}

}  // namespace

TEST_CASE("clip spans: worked examples") {
  const auto spans = compute_clip_spans(100, {1, 10, 10});
  REQUIRE(spans.size() == 10);
  CHECK(spans[0].start_frame == 0);
  CHECK(spans[0].end_frame == 10);
  CHECK(spans[9].start_frame == 90);
  CHECK(spans[9].end_frame == 100);

  const auto one = compute_clip_spans(5, {1, 1, 5});
  REQUIRE(one.size() == 1);
  CHECK(one[0].start_frame == 0);
  CHECK(one[0].end_frame == 5);

  CHECK(code_of([] { compute_clip_spans(3, {1, 1, 5}); }) == ErrorCode::ZeroClips);
}

TEST_CASE("clip spans: agree with window enumeration") {
  for (std::uint32_t m = 1; m <= 200; ++m) {
    for (std::uint32_t sigma = 1; sigma <= 4; ++sigma) {
      for (std::uint32_t omega = 1; omega <= 8; ++omega) {
        for (std::uint32_t psi = 1; psi <= 8; ++psi) {
          const SamplerConfig c{sigma, omega, psi};
          const auto expected = enumerate_windows(m, c);
          if (expected.empty()) {
            CHECK(code_of([&] { compute_clip_spans(m, c); }) == ErrorCode::ZeroClips);
            continue;
          }
          const auto spans = compute_clip_spans(m, c);
          REQUIRE(spans.size() == expected.size());
          for (std::size_t i = 0; i < spans.size(); ++i) {
            CHECK(spans[i].clip_index == i);
            CHECK(spans[i].start_frame == expected[i].first);
            CHECK(spans[i].end_frame == expected[i].second);
            CHECK(spans[i].mid_frame == (expected[i].first + expected[i].second - 1) / 2);
            if (i > 0) CHECK(normalized_time(spans[i], m) > normalized_time(spans[i - 1], m));
          }
        }
      }
    }
  }
}

TEST_CASE("clip spans: bad sampler") {
  CHECK(code_of([] { compute_clip_spans(10, {0, 1, 1}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { compute_clip_spans(10, {1, 0, 1}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { compute_clip_spans(10, {1, 1, 0}); }) == ErrorCode::ConfigError);
}

TEST_CASE("normalized time examples") {
  CHECK(normalized_time(make_span(0, 0, 10), 100) == doctest::Approx(0.04).epsilon(1e-15));
  CHECK(normalized_time(make_span(9, 90, 100), 100) == doctest::Approx(0.94).epsilon(1e-15));
  for (std::uint32_t m : {1u, 2u, 7u, 100u, 1001u}) {
    const double t = normalized_time(make_span(0, 0, m), m);
    CHECK(t == doctest::Approx((m - 1) / 2 / static_cast<double>(m)));
    CHECK(t < 0.5);
  }
}

TEST_CASE("feature file: hand-built bytes decode") {
  Bytes b;
  b.str("UGF1").u32(1).u32(2).str("v7").u32(6).f32(25.0f).u32(2).u32(2);
  b.u32(0).u32(3).u32(3).u32(6);
  b.f32(1.0f).f32(0.0f).f32(0.5f).f32(-2.0f);
  const auto vf = decode_features(b.data, "hand");
  CHECK(vf.video_id == "v7");
  CHECK(vf.m == 6);
  CHECK(vf.fps == 25.0f);
  REQUIRE(vf.z() == 2);
  CHECK(vf.d() == 2);
  CHECK(vf.spans[1].start_frame == 3);
  CHECK(vf.spans[1].mid_frame == 4);
  CHECK(vf.embeddings(1, 1) == -2.0f);
  // and the encoder reproduces those exact bytes
  CHECK(encode_features(vf) == b.data);
}

TEST_CASE("feature file: error cases") {
  const auto header = [](std::uint32_t d, std::uint32_t z) {
    Bytes b;
    b.str("UGF1").u32(1).u32(1).str("a").u32(4).f32(30.0f).u32(d).u32(z);
    return b;
  };
  auto truncated = header(2, 1);
  truncated.u32(0).u32(4).f32(1.0f);
  CHECK(code_of([&] { decode_features(truncated.data, "t"); }) == ErrorCode::DimensionError);

  auto d0 = header(0, 1);
  d0.u32(0).u32(4);
  CHECK(code_of([&] { decode_features(d0.data, "t"); }) == ErrorCode::FormatError);

  auto trailing = header(1, 1);
  trailing.u32(0).u32(4).f32(1.0f).u32(99);
  CHECK(code_of([&] { decode_features(trailing.data, "t"); }) == ErrorCode::FormatError);

  auto zero_row = header(2, 1);
  zero_row.u32(0).u32(4).f32(0.0f).f32(0.0f);
  CHECK(code_of([&] { decode_features(zero_row.data, "t"); }) == ErrorCode::ZeroVector);

  Bytes bad_magic;
  bad_magic.str("UGFX").u32(1);
  CHECK(code_of([&] { decode_features(bad_magic.data, "t"); }) == ErrorCode::FormatError);

  Bytes bad_version;
  bad_version.str("UGF1").u32(2);
  CHECK(code_of([&] { decode_features(bad_version.data, "t"); }) == ErrorCode::FormatError);

  CHECK(code_of([] { load_features("/nonexistent/x.ugf"); }) == ErrorCode::MissingArtifact);
}

TEST_CASE("feature file: randomized round trip is bit exact") {
  TempDir dir("features");
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto z = 1 + rng.index(12);
    const auto d = 1 + rng.index(16);
    auto vf = test::random_video(rng, "vid" + std::to_string(trial), z, d);
    vf.fps = static_cast<float>(rng.uniform(1.0, 60.0));
    const auto path = dir / ("v" + std::to_string(trial) + ".ugf");
    write_features(vf, path);
    const auto back = load_features(path);
    CHECK(back == vf);
    const auto bytes = test::slurp(path);
    write_features(back, dir / "again.ugf");
    CHECK(test::slurp(dir / "again.ugf") == bytes);
  }
}

TEST_CASE("annotations: examples") {
  const auto gt = parse_annotations(
      "start_frame,end_frame,keystep_id,keystep_name\n0,50,1,crack egg\n50,80,2,whisk\n", "a", 100);
  REQUIRE(gt.segments.size() == 2);
  CHECK(gt.segments[1].keystep_name == "whisk");
  CHECK(gt.max_keystep_id() == 2);
  const auto labels = gt.frame_labels(100);
  CHECK(labels[0] == 1);
  CHECK(labels[49] == 1);
  CHECK(labels[50] == 2);
  CHECK(labels[79] == 2);
  for (std::uint32_t f = 80; f < 100; ++f) CHECK(labels[f] == 0);

  CHECK(code_of([] {
          parse_annotations("start_frame,end_frame,keystep_id,keystep_name\n0,50,1,a\n40,80,2,b\n", "a");
        }) == ErrorCode::OverlapError);
  CHECK(parse_annotations("", "empty").segments.empty());
  CHECK(parse_annotations("start_frame,end_frame,keystep_id,keystep_name\n", "h").segments.empty());
  CHECK(code_of([] {
          parse_annotations("start_frame,end_frame,keystep_id,keystep_name\n0,120,1,a\n", "a", 100);
        }) == ErrorCode::RangeError);
  CHECK(code_of([] {
          parse_annotations("start_frame,end_frame,keystep_id,keystep_name\n5,5,1,a\n", "a");
        }) == ErrorCode::RangeError);
}

TEST_CASE("annotations: format round trip") {
  GroundTruth gt;
  gt.video_id = "x";
  gt.segments = {{0, 10, 3, "pour"}, {12, 20, 1, "stir"}};
  const auto back = parse_annotations(format_annotations(gt), "x");
  CHECK(back.segments == gt.segments);
}

TEST_CASE("manifest: relative paths and validation") {
  TempDir dir("manifest");
  {
    std::ofstream(dir / "m.json") << R"({"task_name":"t","K":3,"egocentric":true,
      "sampler":{"sigma":1,"omega":8,"psi":8},
      "videos":[{"features":"f/a.ugf","annotations":"a.csv","mask":"m.ugm"},{"features":"/abs/b.ugf"}]})";
  }
  const auto man = load_manifest(dir / "m.json");
  CHECK(man.task_name == "t");
  CHECK(man.K == 3);
  CHECK(man.egocentric);
  REQUIRE(man.sampler.has_value());
  CHECK(man.sampler->omega == 8);
  REQUIRE(man.entries.size() == 2);
  CHECK(man.entries[0].features == dir.path() / "f/a.ugf");
  CHECK(man.entries[1].features == "/abs/b.ugf");
  CHECK_FALSE(man.entries[1].annotations.has_value());

  const auto again = parse_manifest(format_manifest(man, dir.path()), dir.path());
  CHECK(again.entries[0].features == man.entries[0].features);
  CHECK(again.entries[0].mask == man.entries[0].mask);

  CHECK(code_of([&] { parse_manifest(R"({"task_name":"t","K":0,"videos":[{"features":"a"}]})", dir.path()); }) ==
        ErrorCode::ConfigError);
  CHECK(code_of([&] { parse_manifest(R"({"task_name":"t","K":2,"videos":[]})", dir.path()); }) ==
        ErrorCode::ConfigError);
  CHECK(code_of([&] { parse_manifest("{not json", dir.path()); }) == ErrorCode::ConfigError);

  const auto single = parse_manifest(R"({"task_name":"t","K":2,"videos":[{"features":"a"}]})", dir.path());
  CHECK(single.validate().has_value());
}
