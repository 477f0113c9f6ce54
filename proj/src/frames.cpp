#include "aigve/frames.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include <png.h>

#include "aigve/error.hpp"

namespace aigve {

namespace fs = std::filesystem;

std::optional<SamplingStrategy> parse_strategy(std::string_view text) noexcept {
  if (text == "uniform") return SamplingStrategy::Uniform;
  if (text == "head") return SamplingStrategy::Head;
  return std::nullopt;
}

std::optional<PadMode> parse_pad_mode(std::string_view text) noexcept {
  if (text == "repeat_last") return PadMode::RepeatLast;
  if (text == "zero") return PadMode::Zero;
  return std::nullopt;
}

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  while (c != EOF && !std::isspace(c) && c != '#') {
    token += static_cast<char>(c);
    c = in.get();
  }
  // `c` is the single whitespace byte that terminates the header field.
  return token;
}

std::size_t parse_dimension(const std::string& token, const fs::path& path) {
  if (token.empty() || !std::all_of(token.begin(), token.end(), [](unsigned char ch) { return std::isdigit(ch); }))
    throw Error(Errc::UnsupportedPixelFormat, path.string() + ": malformed PPM header");
  return std::stoul(token);
}

}  // namespace

FrameSequence read_ppm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  if (next_token(in) != "P6")
    throw Error(Errc::UnsupportedPixelFormat, path.string() + ": only binary PPM (P6) is supported");
  const auto width = parse_dimension(next_token(in), path);
  const auto height = parse_dimension(next_token(in), path);
  const auto maxval = parse_dimension(next_token(in), path);
  if (maxval != 255)
    throw Error(Errc::UnsupportedPixelFormat,
                path.string() + ": maxval " + std::to_string(maxval) + " (only 255 is supported)");
  if (width == 0 || height == 0) throw Error(Errc::UnsupportedPixelFormat, path.string() + ": empty image");

  FrameSequence seq;
  seq.count = 1;
  seq.height = height;
  seq.width = width;
  seq.pixels.resize(height * width * 3);
  in.read(reinterpret_cast<char*>(seq.pixels.data()), static_cast<std::streamsize>(seq.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(seq.pixels.size()))
    throw Error(Errc::TruncatedPayload, path.string() + ": pixel data shorter than header advertises");
  return seq;
}

void write_ppm(const fs::path& path, std::size_t height, std::size_t width, std::span<const std::uint8_t> rgb) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << "P6\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
}

FrameSequence read_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw Error(Errc::UnsupportedPixelFormat, path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGB;
  FrameSequence seq;
  seq.count = 1;
  seq.height = image.height;
  seq.width = image.width;
  seq.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, seq.pixels.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw Error(Errc::UnsupportedPixelFormat, path.string() + ": " + message);
  }
  return seq;
}

void write_png(const fs::path& path, std::size_t height, std::size_t width, std::span<const std::uint8_t> rgb) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, rgb.data(), 0, nullptr))
    throw Error(Errc::IoError, "cannot write " + path.string() + ": " + image.message);
}

void write_frames(const fs::path& dir, const FrameSequence& frames) {
  fs::create_directories(dir);
  char name[32];
  for (std::size_t t = 0; t < frames.count; ++t) {
    std::snprintf(name, sizeof(name), "frame_%06zu.ppm", t);
    write_ppm(dir / name, frames.height, frames.width, frames.frame(t));
  }
}

FrameSequence read_frames(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(Errc::IoError, "frame directory not found: " + dir.string());

  static const std::regex kFrameName(R"(frame_(\d{6})\.(ppm|png))");
  std::map<std::size_t, fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch match;
    const std::string name = entry.path().filename().string();
    if (!std::regex_match(name, match, kFrameName)) continue;
    const auto index = std::stoul(match[1].str());
    if (!files.emplace(index, entry.path()).second)
      throw Error(Errc::DuplicateFrameIndex, dir.string() + ": index " + std::to_string(index) + " appears twice");
  }
  if (files.empty()) throw Error(Errc::EmptyDirectory, "no frame_%06d files in " + dir.string());

  FrameSequence seq;
  std::size_t expected = 0;
  for (const auto& [index, path] : files) {
    if (index != expected) throw Error(Errc::MissingFrameIndex, dir.string() + ": missing frame index " + std::to_string(expected));
    const auto frame = path.extension() == ".png" ? read_png(path) : read_ppm(path);
    if (expected == 0) {
      seq.height = frame.height;
      seq.width = frame.width;
    } else if (frame.height != seq.height || frame.width != seq.width) {
      throw Error(Errc::DimensionMismatch, path.string() + ": frame size differs from frame 0");
    }
    seq.pixels.insert(seq.pixels.end(), frame.pixels.begin(), frame.pixels.end());
    ++expected;
  }
  seq.count = expected;
  return seq;
}

FrameSequence resize_bilinear(const FrameSequence& frames, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) throw Error(Errc::InvalidArgument, "resize target must be at least 1x1");
  if (height == frames.height && width == frames.width) return frames;

  struct Tap {
    std::size_t lo, hi;
    double weight;
  };
  auto taps = [](std::size_t out, std::size_t in) {
    std::vector<Tap> result(out);
    const double scale = static_cast<double>(in) / static_cast<double>(out);
    for (std::size_t i = 0; i < out; ++i) {
      double src = (static_cast<double>(i) + 0.5) * scale - 0.5;
      src = std::clamp(src, 0.0, static_cast<double>(in - 1));
      const auto lo = static_cast<std::size_t>(std::floor(src));
      result[i] = {lo, std::min(lo + 1, in - 1), src - static_cast<double>(lo)};
    }
    return result;
  };
  const auto ytaps = taps(height, frames.height);
  const auto xtaps = taps(width, frames.width);

  FrameSequence out;
  out.count = frames.count;
  out.height = height;
  out.width = width;
  out.frame_rate = frames.frame_rate;
  out.pixels.resize(out.count * out.frame_size());
  for (std::size_t t = 0; t < frames.count; ++t) {
    for (std::size_t y = 0; y < height; ++y) {
      const auto& ty = ytaps[y];
      for (std::size_t x = 0; x < width; ++x) {
        const auto& tx = xtaps[x];
        for (std::size_t c = 0; c < 3; ++c) {
          const double top = frames.at(t, ty.lo, tx.lo, c) * (1.0 - tx.weight) + frames.at(t, ty.lo, tx.hi, c) * tx.weight;
          const double bottom = frames.at(t, ty.hi, tx.lo, c) * (1.0 - tx.weight) + frames.at(t, ty.hi, tx.hi, c) * tx.weight;
          const double value = top * (1.0 - ty.weight) + bottom * ty.weight;
          out.pixels[((t * height + y) * width + x) * 3 + c] =
              static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
        }
      }
    }
  }
  return out;
}

std::vector<std::size_t> uniform_indices(std::size_t count, std::size_t max_len) {
  std::vector<std::size_t> indices(max_len, 0);
  if (max_len <= 1 || count == 0) return indices;
  const std::size_t span = max_len - 1;
  for (std::size_t i = 0; i < max_len; ++i) indices[i] = (2 * i * (count - 1) + span) / (2 * span);
  return indices;
}

FrameSequence sample_and_pad(const FrameSequence& frames, const SamplingPolicy& policy) {
  if (policy.max_len == 0) throw Error(Errc::InvalidArgument, "max_len must be at least 1");
  const std::size_t target = policy.max_len;
  if (frames.count == target) return frames;

  FrameSequence out;
  out.count = target;
  out.height = frames.height;
  out.width = frames.width;
  out.frame_rate = frames.frame_rate;
  out.pixels.reserve(target * frames.frame_size());

  auto append = [&](std::size_t t) {
    const auto f = frames.frame(t);
    out.pixels.insert(out.pixels.end(), f.begin(), f.end());
  };

  if (frames.count > target) {
    if (policy.strategy == SamplingStrategy::Head) {
      for (std::size_t t = 0; t < target; ++t) append(t);
    } else {
      for (auto t : uniform_indices(frames.count, target)) append(t);
    }
    return out;
  }

  for (std::size_t t = 0; t < frames.count; ++t) append(t);
  for (std::size_t t = frames.count; t < target; ++t) {
    if (policy.pad_mode == PadMode::RepeatLast && frames.count > 0)
      append(frames.count - 1);
    else
      out.pixels.insert(out.pixels.end(), frames.frame_size(), std::uint8_t{0});
  }
  return out;
}

std::vector<double> frame_luma(const FrameSequence& frames, std::size_t t) {
  const auto f = frames.frame(t);
  std::vector<double> luma(frames.height * frames.width);
  for (std::size_t i = 0; i < luma.size(); ++i)
    luma[i] = 0.299 * f[3 * i] + 0.587 * f[3 * i + 1] + 0.114 * f[3 * i + 2];
  return luma;
}

}  // namespace aigve
