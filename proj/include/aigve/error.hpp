#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aigve {

/// Error classes raised across the toolkit. Each maps to a stable name that
/// appears in CLI messages and report error entries.
enum class Errc {
  // configuration
  SyntaxError,
  TopLevelNotMap,
  CycleDetected,
  BaseNotFound,
  MissingEnvVar,
  IndexOutOfRange,
  TypeConflict,
  // registry
  DuplicateName,
  UnknownType,
  FactoryError,
  RegistryFrozen,
  // data pipeline
  SchemaError,
  DuplicateId,
  MissingFrameIndex,
  DuplicateFrameIndex,
  UnsupportedPixelFormat,
  EmptyDirectory,
  BadMagic,
  UnsupportedVersion,
  UnsupportedDtype,
  MalformedHeader,
  TruncatedPayload,
  NonFiniteValue,
  GridTooFine,
  IoError,
  // loop and metrics
  MissingFeatureSource,
  InsufficientSamples,
  UnknownSampleId,
  MetricFailure,
  TooFewSamples,
  NotSymmetric,
  IndefiniteBeyondTolerance,
  DimensionMismatch,
  RowNotDistribution,
  ZeroNormVector,
  TooFewFrames,
  UnknownActivation,
  // meta-evaluation
  HeaderMismatch,
  NonNumericScore,
  DuplicateKey,
  LengthMismatch,
  DegenerateInput,
  InsufficientRatings,
  ZeroExpectedDisagreement,
  NoOverlap,
  TooFewRows,
  AllFeaturesConstant,
  MissingFeature,
  InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  /// Message without the "<ErrorName>: " prefix that what() carries.
  const std::string& detail() const noexcept { return detail_; }

  /// Same error class, message prefixed with `context`.
  Error with_context(std::string_view context) const;

 private:
  Errc code_;
  std::string detail_;
};

/// Parse failure with the byte offset (0-based) of the offending input position
/// when the parser reports one.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::optional<std::size_t> offset);

  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  std::optional<std::size_t> offset_;
};

}  // namespace aigve
