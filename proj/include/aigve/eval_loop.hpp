#pragma once

// Three-phase evaluation: load samples, feed every metric batch by batch,
// aggregate per-metric and per-group summaries.

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aigve/dataset.hpp"
#include "aigve/metric.hpp"
#include "aigve/registry.hpp"

namespace aigve {

struct SummaryReport {
  std::size_t num_samples = 0;
  /// Metric names in declaration order.
  std::vector<std::string> metric_order;
  /// Taxonomy tag per metric, when known.
  std::map<std::string, std::string> metric_categories;
  /// Mean over each metric's finite per-sample records.
  std::map<std::string, double> per_metric_mean;
  /// compute_metrics() output per metric (corpus-level scores live here).
  std::map<std::string, std::map<std::string, double>> metric_outputs;
  /// group key ("model", "category", "subject") -> group -> metric -> mean.
  std::map<std::string, std::map<std::string, std::map<std::string, double>>> per_category;
  /// group key -> group -> number of samples.
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  std::vector<SampleError> errors;
  std::string config_digest;
};

struct LoopOptions {
  std::size_t batch_size = 1;
  /// Parallel sample loaders per batch; 0 or 1 loads inline.
  std::size_t num_workers = 0;
  std::string config_digest;
};

struct EvaluationResult {
  /// Records in emission order: per batch, metrics in declaration order.
  std::vector<MetricRecord> records;
  SummaryReport report;
};

/// Group label used when a record has no model or category.
inline constexpr const char* kUnlabeledGroup = "unknown";

/// Runs every metric over every sample. A metric failing on one sample is
/// recorded in report.errors and excluded from means; a failure inside
/// compute_metrics() aborts with MetricFailure naming the metric.
EvaluationResult run_evaluation(const Dataset& dataset, std::span<const std::unique_ptr<Metric>> metrics,
                                const LoopOptions& options);

/// Per-metric means and group-by means (model, category, each subject label).
/// Records must reference ids in `annotations` (UnknownSampleId otherwise).
SummaryReport aggregate_summary(std::span<const MetricRecord> records, const AnnotationSet& annotations,
                                std::span<const std::string> metric_order);

/// Sample order, then metric declaration order.
std::vector<MetricRecord> sorted_records(std::span<const MetricRecord> records,
                                         std::span<const std::string> metric_order);

std::string record_to_json_line(const MetricRecord& record);
std::string summary_to_json(const SummaryReport& report);

/// Writes `results.jsonl` and `summary.json` into `work_dir` (created if
/// needed). Throws IoError.
void write_results(std::span<const MetricRecord> records, const SummaryReport& report,
                   const std::filesystem::path& work_dir);

/// Loop component built from the `val_cfg` section.
class EvalLoop {
 public:
  EvaluationResult run(const Dataset& dataset, std::span<const std::unique_ptr<Metric>> metrics,
                       const LoopOptions& options) const {
    return run_evaluation(dataset, metrics, options);
  }
};

}  // namespace aigve
