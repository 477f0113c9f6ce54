#include "aigve/metric.hpp"

#include <cmath>

#include "aigve/error.hpp"

namespace aigve {

void ProcessOutput::add_score(const EvalSample& sample, double score, std::map<std::string, double> extras) {
  records_.push_back(MetricRecord{sample.id(), {}, score, std::move(extras), sample.index});
}

void ProcessOutput::add_error(const EvalSample& sample, std::string message) {
  errors_.push_back(SampleError{sample.id(), {}, std::move(message), sample.index});
}

void PerSampleMetric::process(std::span<const EvalSample> batch, ProcessOutput& out) {
  for (const auto& sample : batch) {
    try {
      Score score = score_sample(sample);
      if (!std::isfinite(score.value)) {
        out.add_error(sample, "non-finite score");
        continue;
      }
      scores_.push_back(score.value);
      out.add_score(sample, score.value, std::move(score.extras));
    } catch (const std::exception& e) {
      out.add_error(sample, e.what());
    }
  }
}

std::map<std::string, double> PerSampleMetric::compute_metrics() {
  if (scores_.empty()) throw Error(Errc::InsufficientSamples, "metric '" + name() + "' scored no samples");
  double sum = 0.0;
  for (double s : scores_) sum += s;
  return {{name() + "_mean_score", sum / static_cast<double>(scores_.size())}};
}

const FeatureMatrix& require_feature(const EvalSample& sample, const std::string& source) {
  auto it = sample.features.find(source);
  if (it == sample.features.end())
    throw Error(Errc::MissingFeatureSource, "sample '" + sample.id() + "' has no feature source '" + source + "'");
  return it->second;
}

const FrameSequence& require_frames(const EvalSample& sample) {
  if (!sample.frames)
    throw Error(Errc::MissingFeatureSource, "sample '" + sample.id() + "' has no frames (video_source)");
  return *sample.frames;
}

}  // namespace aigve
