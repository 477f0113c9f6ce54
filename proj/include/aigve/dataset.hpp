#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "aigve/annotations.hpp"
#include "aigve/features.hpp"
#include "aigve/frames.hpp"

namespace aigve {

/// Everything a metric sees for one record.
struct EvalSample {
  SampleRecord record;
  std::optional<FrameSequence> frames;
  std::map<std::string, FeatureMatrix> features;
  std::size_t index = 0;

  const std::string& id() const noexcept { return record.id; }
};

struct FrameSize {
  std::size_t height = 0;
  std::size_t width = 0;
};

/// Per-video preprocessing applied after decoding.
struct PreprocessOptions {
  std::optional<SamplingPolicy> sampling;
  std::optional<FrameSize> resize;
};

/// Injection points for file access.
struct SampleLoaders {
  std::function<FrameSequence(const std::filesystem::path&)> frames = read_frames;
  std::function<FeatureMatrix(const std::filesystem::path&)> features = read_feature_file;
};

/// Decodes, samples and resizes frames when the record has a video source and
/// loads every declared feature file. Loader errors are rethrown with the
/// record id (and feature source name) in the message.
EvalSample get_eval_sample(const AnnotationSet& set, std::size_t index, const PreprocessOptions& preprocess,
                           const SampleLoaders& loaders = {});

/// Random-access source of evaluation samples.
class Dataset {
 public:
  virtual ~Dataset() = default;
  virtual std::size_t size() const = 0;
  /// Must be safe to call concurrently for distinct indices.
  virtual EvalSample get(std::size_t index) const = 0;
  virtual const AnnotationSet& annotations() const = 0;
};

/// Dataset backed by an annotation JSON file.
class AnnotationDataset final : public Dataset {
 public:
  AnnotationDataset(AnnotationSet annotations, PreprocessOptions preprocess, SampleLoaders loaders = {});

  std::size_t size() const override { return annotations_.size(); }
  EvalSample get(std::size_t index) const override;
  const AnnotationSet& annotations() const override { return annotations_; }
  const PreprocessOptions& preprocess() const noexcept { return preprocess_; }

 private:
  AnnotationSet annotations_;
  PreprocessOptions preprocess_;
  SampleLoaders loaders_;
};

}  // namespace aigve
