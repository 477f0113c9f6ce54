#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "aigve/frames.hpp"
#include "corpus.hpp"
#include "test_util.hpp"

using namespace aigve;
using aigve::testing::scratch_dir;
using aigve::testing::write_file;

namespace {

FrameSequence solid(std::size_t t, std::size_t h, std::size_t w, std::uint8_t v) {
  FrameSequence f;
  f.count = t;
  f.height = h;
  f.width = w;
  f.pixels.assign(t * h * w * 3, v);
  return f;
}

/// One frame per index, every pixel equal to the frame index.
FrameSequence indexed(std::size_t t) {
  FrameSequence f = solid(t, 1, 1, 0);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t c = 0; c < 3; ++c) f.pixels[i * 3 + c] = static_cast<std::uint8_t>(i + 1);
  return f;
}

std::vector<int> frame_ids(const FrameSequence& f) {
  std::vector<int> out;
  for (std::size_t t = 0; t < f.count; ++t) out.push_back(static_cast<int>(f.at(t, 0, 0, 0)) - 1);
  return out;
}

void write_raw(const std::filesystem::path& path, const std::string& header, std::size_t payload) {
  std::ofstream out(path, std::ios::binary);
  out << header;
  for (std::size_t i = 0; i < payload; ++i) out.put(static_cast<char>(i % 200));
}

}  // namespace

TEST_CASE("read_frames orders frames and checks shapes") {
  const auto dir = scratch_dir("frames_ok");
  FrameSequence f = solid(3, 2, 2, 0);
  for (std::size_t i = 0; i < f.pixels.size(); ++i) f.pixels[i] = static_cast<std::uint8_t>(i);
  write_frames(dir, f);
  const auto back = read_frames(dir);
  CHECK(back.count == 3);
  CHECK(back.height == 2);
  CHECK(back.width == 2);
  CHECK(back == f);
}

TEST_CASE("read_frames errors") {
  SUBCASE("gap") {
    const auto dir = scratch_dir("frames_gap");
    const auto one = solid(1, 2, 2, 9);
    for (int i : {0, 1, 3}) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%06d.ppm", i);
      write_ppm(dir / name, 2, 2, one.frame(0));
    }
    try {
      read_frames(dir);
      FAIL("expected MissingFrameIndex");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::MissingFrameIndex);
      CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
  }
  SUBCASE("maxval") {
    const auto dir = scratch_dir("frames_maxval");
    write_raw(dir / "frame_000000.ppm", "P6\n2 2\n65535\n", 24);
    CHECK_ERRC(read_frames(dir), Errc::UnsupportedPixelFormat);
  }
  SUBCASE("ascii ppm") {
    const auto dir = scratch_dir("frames_p3");
    write_file(dir / "frame_000000.ppm", "P3\n1 1\n255\n0 0 0\n");
    CHECK_ERRC(read_frames(dir), Errc::UnsupportedPixelFormat);
  }
  SUBCASE("truncated") {
    const auto dir = scratch_dir("frames_trunc");
    write_raw(dir / "frame_000000.ppm", "P6\n2 2\n255\n", 11);
    CHECK_ERRC(read_frames(dir), Errc::TruncatedPayload);
  }
  SUBCASE("empty") {
    const auto dir = scratch_dir("frames_empty");
    write_file(dir / "notes.txt", "x");
    CHECK_ERRC(read_frames(dir), Errc::EmptyDirectory);
  }
  SUBCASE("size mismatch") {
    const auto dir = scratch_dir("frames_size");
    write_ppm(dir / "frame_000000.ppm", 2, 2, solid(1, 2, 2, 1).frame(0));
    write_ppm(dir / "frame_000001.ppm", 1, 2, solid(1, 1, 2, 1).frame(0));
    CHECK_ERRC(read_frames(dir), Errc::DimensionMismatch);
  }
  SUBCASE("not a directory") { CHECK_ERRC(read_frames("/nonexistent/frames"), Errc::IoError); }
}

TEST_CASE("ppm header comments are skipped") {
  const auto dir = scratch_dir("frames_comment");
  write_raw(dir / "frame_000000.ppm", "P6\n# made by hand\n1 1\n255\n", 3);
  const auto f = read_frames(dir);
  CHECK(f.count == 1);
  CHECK(f.at(0, 0, 0, 1) == 1);
}

TEST_CASE("png frames mix with ppm") {
  const auto dir = scratch_dir("frames_png");
  auto a = solid(1, 3, 2, 10);
  auto b = solid(1, 3, 2, 200);
  b.pixels[4] = 77;
  write_ppm(dir / "frame_000000.ppm", 3, 2, a.frame(0));
  write_png(dir / "frame_000001.png", 3, 2, b.frame(0));
  const auto f = read_frames(dir);
  REQUIRE(f.count == 2);
  CHECK(f.at(1, 0, 1, 1) == 77);
  CHECK(f.at(1, 2, 1, 2) == 200);
  CHECK(f.at(0, 2, 1, 2) == 10);

  write_ppm(dir / "frame_000001.ppm", 3, 2, a.frame(0));
  CHECK_ERRC(read_frames(dir), Errc::DuplicateFrameIndex);
}

TEST_CASE("resize_bilinear") {
  SUBCASE("identity is bit-identical") {
    auto f = aigve::testing::moving_gradient(2, 5, 7, 1, 0);
    CHECK(resize_bilinear(f, 5, 7) == f);
  }
  SUBCASE("constant frames stay constant") {
    const auto f = solid(1, 2, 2, 93);
    for (auto [h, w] : {std::pair{1, 1}, {3, 5}, {7, 2}, {16, 16}}) {
      const auto r = resize_bilinear(f, h, w);
      CHECK(r.height == static_cast<std::size_t>(h));
      CHECK(r.width == static_cast<std::size_t>(w));
      for (auto p : r.pixels) CHECK(p == 93);
    }
  }
  SUBCASE("half-pixel centers on [0,255] to width 3") {
    // Output centers map to source x = (i + 0.5) * 2/3 - 0.5 = -1/6, 1/2, 7/6;
    // clamped to [0, 1] that is 0, 0.5, 1 -> 0, 127.5, 255 -> 0, 128, 255.
    FrameSequence f = solid(1, 1, 2, 0);
    for (std::size_t c = 0; c < 3; ++c) f.pixels[3 + c] = 255;
    const auto r = resize_bilinear(f, 1, 3);
    CHECK(r.at(0, 0, 0, 0) == 0);
    CHECK(r.at(0, 0, 1, 0) == 128);
    CHECK(r.at(0, 0, 2, 0) == 255);
  }
  SUBCASE("2x upsampling of a ramp") {
    // 1x2 [0,100] to 1x4: sources -0.25, 0.25, 0.75, 1.25 -> 0, 25, 75, 100.
    FrameSequence f = solid(1, 1, 2, 0);
    for (std::size_t c = 0; c < 3; ++c) f.pixels[3 + c] = 100;
    const auto r = resize_bilinear(f, 1, 4);
    CHECK(r.at(0, 0, 0, 2) == 0);
    CHECK(r.at(0, 0, 1, 2) == 25);
    CHECK(r.at(0, 0, 2, 2) == 75);
    CHECK(r.at(0, 0, 3, 2) == 100);
  }
}

TEST_CASE("uniform sampling indices") {
  CHECK(uniform_indices(5, 3) == std::vector<std::size_t>{0, 2, 4});
  CHECK(uniform_indices(10, 4) == std::vector<std::size_t>{0, 3, 6, 9});
  // 8 frames to 3: 0, 3.5, 7 with the half rounded up.
  CHECK(uniform_indices(8, 3) == std::vector<std::size_t>{0, 4, 7});
  CHECK(uniform_indices(7, 1) == std::vector<std::size_t>{0});
}

TEST_CASE("sample_and_pad") {
  SamplingPolicy policy;
  policy.max_len = 10;
  CHECK(sample_and_pad(indexed(10), policy) == indexed(10));

  policy.max_len = 3;
  CHECK(frame_ids(sample_and_pad(indexed(5), policy)) == std::vector<int>{0, 2, 4});
  policy.strategy = SamplingStrategy::Head;
  CHECK(frame_ids(sample_and_pad(indexed(5), policy)) == std::vector<int>{0, 1, 2});

  policy.max_len = 4;
  policy.pad_mode = PadMode::RepeatLast;
  CHECK(frame_ids(sample_and_pad(indexed(2), policy)) == std::vector<int>{0, 1, 1, 1});
  policy.pad_mode = PadMode::Zero;
  const auto zero_padded = sample_and_pad(indexed(2), policy);
  CHECK(frame_ids(zero_padded) == std::vector<int>{0, 1, -1, -1});

  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    SamplingPolicy p;
    p.max_len = 1 + rng() % 12;
    p.strategy = rng() % 2 ? SamplingStrategy::Uniform : SamplingStrategy::Head;
    p.pad_mode = rng() % 2 ? PadMode::RepeatLast : PadMode::Zero;
    const std::size_t t = 1 + rng() % 20;
    const auto out = sample_and_pad(indexed(t), p);
    CHECK(out.count == p.max_len);
    if (p.strategy == SamplingStrategy::Uniform && t > p.max_len && p.max_len > 1) {
      CHECK(frame_ids(out).front() == 0);
      CHECK(frame_ids(out).back() == static_cast<int>(t - 1));
    }
  }
}

TEST_CASE("luma") {
  FrameSequence f = solid(1, 1, 1, 0);
  f.pixels = {255, 0, 0};
  CHECK(frame_luma(f, 0)[0] == doctest::Approx(0.299 * 255));
  f.pixels = {10, 20, 30};
  CHECK(frame_luma(f, 0)[0] == doctest::Approx(0.299 * 10 + 0.587 * 20 + 0.114 * 30));
}
