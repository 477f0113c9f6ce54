#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace aigve {

/// T x H x W x 3 interleaved 8-bit RGB.
struct FrameSequence {
  std::size_t count = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> pixels;
  std::optional<double> frame_rate;

  std::size_t frame_size() const noexcept { return height * width * 3; }
  std::span<const std::uint8_t> frame(std::size_t t) const noexcept {
    return {pixels.data() + t * frame_size(), frame_size()};
  }
  std::span<std::uint8_t> frame(std::size_t t) noexcept { return {pixels.data() + t * frame_size(), frame_size()}; }
  std::uint8_t at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) const noexcept {
    return pixels[((t * height + y) * width + x) * 3 + c];
  }

  friend bool operator==(const FrameSequence&, const FrameSequence&) = default;
};

enum class SamplingStrategy { Uniform, Head };
enum class PadMode { RepeatLast, Zero };

struct SamplingPolicy {
  std::size_t max_len = 1;
  SamplingStrategy strategy = SamplingStrategy::Uniform;
  PadMode pad_mode = PadMode::RepeatLast;
};

std::optional<SamplingStrategy> parse_strategy(std::string_view text) noexcept;
std::optional<PadMode> parse_pad_mode(std::string_view text) noexcept;

/// Decodes `frame_%06d.ppm` (binary P6, maxval 255) or `.png` files with
/// contiguous indices from 0.
FrameSequence read_frames(const std::filesystem::path& dir);

/// Single P6 image, returned as a one-frame sequence.
FrameSequence read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, std::size_t height, std::size_t width,
               std::span<const std::uint8_t> rgb);
/// Writes every frame of `frames` as `dir/frame_%06d.ppm`.
void write_frames(const std::filesystem::path& dir, const FrameSequence& frames);

FrameSequence read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, std::size_t height, std::size_t width,
               std::span<const std::uint8_t> rgb);

/// Bilinear resize with half-pixel centers, edge samples clamped.
FrameSequence resize_bilinear(const FrameSequence& frames, std::size_t height, std::size_t width);

/// Output always has exactly `policy.max_len` frames.
FrameSequence sample_and_pad(const FrameSequence& frames, const SamplingPolicy& policy);

/// Indices chosen by uniform sampling: round(i*(T-1)/(max_len-1)), halves
/// rounded up.
std::vector<std::size_t> uniform_indices(std::size_t count, std::size_t max_len);

/// Rec. 601 luma in [0,255] for every pixel of frame `t`, row-major H x W.
std::vector<double> frame_luma(const FrameSequence& frames, std::size_t t);

}  // namespace aigve
