#include "aigve/error.hpp"

namespace aigve {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::TopLevelNotMap: return "TopLevelNotMap";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::BaseNotFound: return "BaseNotFound";
    case Errc::MissingEnvVar: return "MissingEnvVar";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::TypeConflict: return "TypeConflict";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::UnknownType: return "UnknownType";
    case Errc::FactoryError: return "FactoryError";
    case Errc::RegistryFrozen: return "RegistryFrozen";
    case Errc::SchemaError: return "SchemaError";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::MissingFrameIndex: return "MissingFrameIndex";
    case Errc::DuplicateFrameIndex: return "DuplicateFrameIndex";
    case Errc::UnsupportedPixelFormat: return "UnsupportedPixelFormat";
    case Errc::EmptyDirectory: return "EmptyDirectory";
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::UnsupportedDtype: return "UnsupportedDtype";
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::GridTooFine: return "GridTooFine";
    case Errc::IoError: return "IoError";
    case Errc::MissingFeatureSource: return "MissingFeatureSource";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::UnknownSampleId: return "UnknownSampleId";
    case Errc::MetricFailure: return "MetricFailure";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::IndefiniteBeyondTolerance: return "IndefiniteBeyondTolerance";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::RowNotDistribution: return "RowNotDistribution";
    case Errc::ZeroNormVector: return "ZeroNormVector";
    case Errc::TooFewFrames: return "TooFewFrames";
    case Errc::UnknownActivation: return "UnknownActivation";
    case Errc::HeaderMismatch: return "HeaderMismatch";
    case Errc::NonNumericScore: return "NonNumericScore";
    case Errc::DuplicateKey: return "DuplicateKey";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::InsufficientRatings: return "InsufficientRatings";
    case Errc::ZeroExpectedDisagreement: return "ZeroExpectedDisagreement";
    case Errc::NoOverlap: return "NoOverlap";
    case Errc::TooFewRows: return "TooFewRows";
    case Errc::AllFeaturesConstant: return "AllFeaturesConstant";
    case Errc::MissingFeature: return "MissingFeature";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(message) {}

Error Error::with_context(std::string_view context) const {
  return Error(code_, std::string(context) + ": " + detail_);
}

SyntaxError::SyntaxError(const std::string& message, std::optional<std::size_t> offset)
    : Error(Errc::SyntaxError,
            offset ? message + " (at offset " + std::to_string(*offset) + ")" : message),
      offset_(offset) {}

}  // namespace aigve
