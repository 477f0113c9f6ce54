#include "aigve/dataset.hpp"

#include "aigve/error.hpp"

namespace aigve {

EvalSample get_eval_sample(const AnnotationSet& set, std::size_t index, const PreprocessOptions& preprocess,
                           const SampleLoaders& loaders) {
  if (index >= set.size())
    throw Error(Errc::IndexOutOfRange,
                "sample index " + std::to_string(index) + " out of range (size " + std::to_string(set.size()) + ")");
  EvalSample sample;
  sample.record = set.records[index];
  sample.index = index;
  const std::string context = "record '" + sample.record.id + "'";

  if (sample.record.video_source) {
    try {
      FrameSequence frames = loaders.frames(*sample.record.video_source);
      if (preprocess.sampling) frames = sample_and_pad(frames, *preprocess.sampling);
      if (preprocess.resize) frames = resize_bilinear(frames, preprocess.resize->height, preprocess.resize->width);
      sample.frames = std::move(frames);
    } catch (const Error& e) {
      throw e.with_context(context + " video_source");
    }
  }

  for (const auto& [name, path] : sample.record.features) {
    try {
      sample.features.emplace(name, loaders.features(path));
    } catch (const Error& e) {
      throw e.with_context(context + " feature '" + name + "'");
    }
  }
  return sample;
}

AnnotationDataset::AnnotationDataset(AnnotationSet annotations, PreprocessOptions preprocess, SampleLoaders loaders)
    : annotations_(std::move(annotations)), preprocess_(std::move(preprocess)), loaders_(std::move(loaders)) {}

EvalSample AnnotationDataset::get(std::size_t index) const {
  return get_eval_sample(annotations_, index, preprocess_, loaders_);
}

}  // namespace aigve
