#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "aigve/dataset.hpp"

namespace aigve {

struct MetricRecord {
  std::string sample_id;
  std::string metric;
  double score = 0.0;
  std::map<std::string, double> extras;
  /// Position of the sample in its annotation set; orders the results file.
  std::size_t sample_index = 0;

  friend bool operator==(const MetricRecord&, const MetricRecord&) = default;
};

struct SampleError {
  std::string sample_id;
  std::string metric;
  std::string message;
  std::size_t sample_index = 0;

  friend bool operator==(const SampleError&, const SampleError&) = default;
};

/// Collects what one process() call produced. The loop stamps the metric name.
class ProcessOutput {
 public:
  void add_score(const EvalSample& sample, double score, std::map<std::string, double> extras = {});
  void add_error(const EvalSample& sample, std::string message);

  std::vector<MetricRecord>& records() noexcept { return records_; }
  std::vector<SampleError>& errors() noexcept { return errors_; }

 private:
  std::vector<MetricRecord> records_;
  std::vector<SampleError> errors_;
};

/// Contract every metric implements: process() sees each batch once, in sample
/// order, and compute_metrics() is called once after the last batch. Results
/// must not depend on how the samples were partitioned into batches.
class Metric {
 public:
  virtual ~Metric() = default;

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  virtual void process(std::span<const EvalSample> batch, ProcessOutput& out) = 0;
  /// Returns at least `<name>_mean_score`. Throws InsufficientSamples when
  /// nothing usable was accumulated.
  virtual std::map<std::string, double> compute_metrics() = 0;

 private:
  std::string name_;
};

/// Base for metrics that score each sample independently. Failures on one
/// sample become error entries; the mean covers the successful samples.
class PerSampleMetric : public Metric {
 public:
  struct Score {
    double value = 0.0;
    std::map<std::string, double> extras;
  };

  void process(std::span<const EvalSample> batch, ProcessOutput& out) final;
  std::map<std::string, double> compute_metrics() override;

 protected:
  virtual Score score_sample(const EvalSample& sample) const = 0;

 private:
  std::vector<double> scores_;
};

/// Feature matrix `source` of `sample`, or MissingFeatureSource.
const FeatureMatrix& require_feature(const EvalSample& sample, const std::string& source);
/// Decoded frames of `sample`, or MissingFeatureSource.
const FrameSequence& require_frames(const EvalSample& sample);

}  // namespace aigve
