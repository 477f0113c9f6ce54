#include "aigve/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "aigve/error.hpp"
#include "aigve/frames.hpp"

namespace aigve {

namespace fs = std::filesystem;

FeatureMatrix::FeatureMatrix(std::vector<std::size_t> dims, std::vector<float> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  if (dims_.empty() || dims_.size() > 3)
    throw Error(Errc::InvalidArgument, "feature tensors have rank 1-3, got " + std::to_string(dims_.size()));
  std::size_t count = 1;
  for (auto d : dims_) {
    if (d == 0) throw Error(Errc::InvalidArgument, "feature tensor dimensions must be positive");
    count *= d;
  }
  if (count != data_.size())
    throw Error(Errc::InvalidArgument, "shape holds " + std::to_string(count) + " elements but data has " +
                                           std::to_string(data_.size()));
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i]))
      throw Error(Errc::NonFiniteValue, "element " + std::to_string(i) + " is not finite");
  }
}

std::size_t FeatureMatrix::rows() const noexcept {
  if (dims_.empty()) return 0;
  return dims_.size() == 1 ? 1 : dims_[0];
}

std::size_t FeatureMatrix::cols() const noexcept {
  if (dims_.empty()) return 0;
  if (dims_.size() == 1) return dims_[0];
  std::size_t c = 1;
  for (std::size_t i = 1; i < dims_.size(); ++i) c *= dims_[i];
  return c;
}

namespace {

constexpr std::uint8_t kMagic[4] = {'A', 'G', 'V', 'F'};
constexpr std::size_t kFixedHeader = 8;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* in) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(in[i]) << (8 * i);
  return value;
}

}  // namespace

std::vector<std::uint8_t> encode_agvf(const FeatureMatrix& m) {
  if (m.rank() < 1 || m.rank() > 3) throw Error(Errc::InvalidArgument, "cannot encode an empty feature tensor");
  std::vector<std::uint8_t> out;
  out.reserve(kFixedHeader + 8 * m.rank() + 4 * m.size());
  for (auto b : kMagic) out.push_back(b);
  out.push_back(kAgvfVersion);
  out.push_back(kAgvfDtypeFloat32);
  out.push_back(static_cast<std::uint8_t>(m.rank()));
  out.push_back(0);
  for (auto d : m.dims()) put_le<std::uint64_t>(out, d);
  for (float v : m.data()) {
    if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "refusing to write a non-finite value");
    put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

FeatureMatrix decode_agvf(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw Error(Errc::TruncatedPayload, "file shorter than the AGVF magic");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin()))
    throw Error(Errc::BadMagic, "missing AGVF magic");
  if (bytes.size() < kFixedHeader) throw Error(Errc::TruncatedPayload, "header truncated");
  if (bytes[4] != kAgvfVersion)
    throw Error(Errc::UnsupportedVersion, "AGVF version " + std::to_string(bytes[4]));
  if (bytes[5] != kAgvfDtypeFloat32) throw Error(Errc::UnsupportedDtype, "AGVF dtype " + std::to_string(bytes[5]));
  const std::size_t rank = bytes[6];
  if (rank < 1 || rank > 3) throw Error(Errc::MalformedHeader, "AGVF rank " + std::to_string(rank));
  if (bytes[7] != 0) throw Error(Errc::MalformedHeader, "reserved header byte must be zero");
  if (bytes.size() < kFixedHeader + 8 * rank) throw Error(Errc::TruncatedPayload, "dimension table truncated");

  std::vector<std::size_t> dims(rank);
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    const auto d = get_le<std::uint64_t>(bytes.data() + kFixedHeader + 8 * i);
    if (d == 0) throw Error(Errc::MalformedHeader, "zero-length dimension");
    if (count > std::numeric_limits<std::uint64_t>::max() / 4 / d)
      throw Error(Errc::MalformedHeader, "dimension product overflows");
    count *= d;
    dims[i] = static_cast<std::size_t>(d);
  }

  const std::size_t offset = kFixedHeader + 8 * rank;
  const std::uint64_t available = bytes.size() - offset;
  if (available < 4 * count)
    throw Error(Errc::TruncatedPayload, "header advertises " + std::to_string(count) + " floats, payload holds " +
                                            std::to_string(available / 4));
  if (available > 4 * count) throw Error(Errc::MalformedHeader, "trailing bytes after payload");

  std::vector<float> data(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<float>(get_le<std::uint32_t>(bytes.data() + offset + 4 * i));
    if (!std::isfinite(data[i])) throw Error(Errc::NonFiniteValue, "element " + std::to_string(i) + " is not finite");
  }
  return FeatureMatrix(std::move(dims), std::move(data));
}

FeatureMatrix read_feature_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open feature file " + path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  try {
    return decode_agvf(bytes);
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

void write_feature_file(const fs::path& path, const FeatureMatrix& m) {
  const auto bytes = encode_agvf(m);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write feature file " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoError, "cannot write feature file " + path.string());
}

FeatureMatrix extract_classical_frame_features(const FrameSequence& frames, std::size_t grid) {
  if (grid == 0 || grid > std::min(frames.height, frames.width))
    throw Error(Errc::GridTooFine, "grid " + std::to_string(grid) + " does not fit a " +
                                       std::to_string(frames.height) + "x" + std::to_string(frames.width) + " frame");
  const std::size_t h = frames.height;
  const std::size_t w = frames.width;
  const std::size_t cell_h = h / grid;
  const std::size_t cell_w = w / grid;
  const std::size_t per_frame = 4 * grid * grid;
  const double gradient_scale = 255.0 * std::sqrt(2.0);

  std::vector<float> out;
  out.reserve(frames.count * per_frame);
  std::vector<double> magnitude(h * w);
  for (std::size_t t = 0; t < frames.count; ++t) {
    const auto luma = frame_luma(frames, t);
    for (std::size_t y = 0; y < h; ++y) {
      const std::size_t up = y == 0 ? 0 : y - 1;
      const std::size_t down = std::min(y + 1, h - 1);
      for (std::size_t x = 0; x < w; ++x) {
        const std::size_t left = x == 0 ? 0 : x - 1;
        const std::size_t right = std::min(x + 1, w - 1);
        const double gx = luma[y * w + right] - luma[y * w + left];
        const double gy = luma[down * w + x] - luma[up * w + x];
        magnitude[y * w + x] = std::hypot(gx, gy);
      }
    }

    for (std::size_t gy = 0; gy < grid; ++gy) {
      const std::size_t y0 = gy * cell_h;
      const std::size_t y1 = gy + 1 == grid ? h : y0 + cell_h;
      for (std::size_t gx = 0; gx < grid; ++gx) {
        const std::size_t x0 = gx * cell_w;
        const std::size_t x1 = gx + 1 == grid ? w : x0 + cell_w;
        double r = 0, g = 0, b = 0, m = 0;
        for (std::size_t y = y0; y < y1; ++y) {
          for (std::size_t x = x0; x < x1; ++x) {
            r += frames.at(t, y, x, 0);
            g += frames.at(t, y, x, 1);
            b += frames.at(t, y, x, 2);
            m += magnitude[y * w + x];
          }
        }
        const double n = static_cast<double>((y1 - y0) * (x1 - x0));
        out.push_back(static_cast<float>(r / n / 255.0));
        out.push_back(static_cast<float>(g / n / 255.0));
        out.push_back(static_cast<float>(b / n / 255.0));
        out.push_back(static_cast<float>(std::min(1.0, m / n / gradient_scale)));
      }
    }
  }
  return FeatureMatrix::matrix(frames.count, per_frame, std::move(out));
}

FeatureMatrix pool_mean_std(const FeatureMatrix& per_frame) {
  const std::size_t t = per_frame.rows();
  const std::size_t d = per_frame.cols();
  if (t == 0) throw Error(Errc::TooFewFrames, "pooling needs at least one row");
  std::vector<float> out(2 * d);
  std::vector<double> column(t);
  for (std::size_t c = 0; c < d; ++c) {
    // Summing in sorted order makes the result exactly independent of frame order.
    for (std::size_t r = 0; r < t; ++r) column[r] = per_frame.at(r, c);
    std::sort(column.begin(), column.end());
    double mean = 0.0;
    for (double v : column) mean += v;
    mean /= static_cast<double>(t);
    double var = 0.0;
    for (double v : column) var += (v - mean) * (v - mean);
    out[c] = static_cast<float>(mean);
    out[d + c] = static_cast<float>(std::sqrt(var / static_cast<double>(t)));
  }
  return FeatureMatrix::matrix(1, 2 * d, std::move(out));
}

}  // namespace aigve
