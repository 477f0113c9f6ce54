#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace aigve {

struct FrameSequence;

/// Dense float32 tensor of rank 1-3, row-major.
///
/// Feature consumers view it as a matrix: rank 1 is a single row, rank 2 is
/// rows x cols, rank 3 flattens the trailing two dimensions into columns.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  /// Throws InvalidArgument for rank outside 1-3, a zero dimension or a size
  /// mismatch; NonFiniteValue if any element is NaN/inf.
  FeatureMatrix(std::vector<std::size_t> dims, std::vector<float> data);

  static FeatureMatrix matrix(std::size_t rows, std::size_t cols, std::vector<float> data) {
    return FeatureMatrix({rows, cols}, std::move(data));
  }

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<const float> data() const noexcept { return data_; }

  std::size_t rows() const noexcept;
  std::size_t cols() const noexcept;
  std::span<const float> row(std::size_t r) const noexcept { return {data_.data() + r * cols(), cols()}; }
  float at(std::size_t r, std::size_t c) const noexcept { return data_[r * cols() + c]; }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<float> data_;
};

// AGVF container: "AGVF", u8 version=1, u8 dtype=1 (float32), u8 rank, u8 0,
// rank x u64 dims, float32 payload. All little-endian.
inline constexpr std::uint8_t kAgvfVersion = 1;
inline constexpr std::uint8_t kAgvfDtypeFloat32 = 1;

std::vector<std::uint8_t> encode_agvf(const FeatureMatrix& m);
FeatureMatrix decode_agvf(std::span<const std::uint8_t> bytes);

FeatureMatrix read_feature_file(const std::filesystem::path& path);
void write_feature_file(const std::filesystem::path& path, const FeatureMatrix& m);

/// Per-frame grid statistics: for each of the grid x grid cells, in row-major
/// cell order, [mean R, mean G, mean B, mean luma gradient magnitude], all in
/// [0,1]. Returns T x 4*grid^2.
FeatureMatrix extract_classical_frame_features(const FrameSequence& frames, std::size_t grid);

/// [mean over rows ; population std over rows] as a 1 x 2D matrix.
FeatureMatrix pool_mean_std(const FeatureMatrix& per_frame);

}  // namespace aigve
