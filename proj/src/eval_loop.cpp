#include "aigve/eval_loop.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "aigve/error.hpp"

namespace aigve {

namespace fs = std::filesystem;

namespace {

struct LoadedSample {
  std::optional<EvalSample> sample;
  std::string error;
};

LoadedSample load_one(const Dataset& dataset, std::size_t index) {
  LoadedSample out;
  try {
    out.sample = dataset.get(index);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

// Loads [begin, end) with up to `workers` threads; results come back in index order.
std::vector<LoadedSample> load_batch(const Dataset& dataset, std::size_t begin, std::size_t end, std::size_t workers) {
  const std::size_t n = end - begin;
  std::vector<LoadedSample> loaded(n);
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) loaded[i] = load_one(dataset, begin + i);
    return loaded;
  }
  const std::size_t lanes = std::min(workers, n);
  std::vector<std::future<void>> tasks;
  tasks.reserve(lanes);
  for (std::size_t lane = 0; lane < lanes; ++lane) {
    tasks.push_back(std::async(std::launch::async, [&, lane] {
      for (std::size_t i = lane; i < n; i += lanes) loaded[i] = load_one(dataset, begin + i);
    }));
  }
  for (auto& task : tasks) task.get();
  return loaded;
}

void check_metric_names(std::span<const std::unique_ptr<Metric>> metrics) {
  std::set<std::string> names;
  for (const auto& metric : metrics) {
    if (metric->name().empty()) throw Error(Errc::InvalidArgument, "metric without a name");
    if (!names.insert(metric->name()).second)
      throw Error(Errc::DuplicateName, "metric name '" + metric->name() + "' is configured twice");
  }
}

std::unordered_map<std::string, std::size_t> positions(std::span<const std::string> names) {
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < names.size(); ++i) pos.emplace(names[i], i);
  return pos;
}

}  // namespace

std::vector<MetricRecord> sorted_records(std::span<const MetricRecord> records,
                                         std::span<const std::string> metric_order) {
  const auto pos = positions(metric_order);
  auto rank = [&](const std::string& metric) {
    auto it = pos.find(metric);
    return it == pos.end() ? metric_order.size() : it->second;
  };
  std::vector<MetricRecord> out(records.begin(), records.end());
  std::stable_sort(out.begin(), out.end(), [&](const MetricRecord& a, const MetricRecord& b) {
    if (a.sample_index != b.sample_index) return a.sample_index < b.sample_index;
    const auto ra = rank(a.metric), rb = rank(b.metric);
    if (ra != rb) return ra < rb;
    return a.metric < b.metric;
  });
  return out;
}

SummaryReport aggregate_summary(std::span<const MetricRecord> records, const AnnotationSet& annotations,
                                std::span<const std::string> metric_order) {
  SummaryReport report;
  report.num_samples = annotations.size();
  report.metric_order.assign(metric_order.begin(), metric_order.end());

  std::unordered_map<std::string, std::size_t> index_of_id;
  for (std::size_t i = 0; i < annotations.size(); ++i) index_of_id.emplace(annotations.records[i].id, i);

  auto groups_of = [](const SampleRecord& r) {
    std::vector<std::pair<std::string, std::string>> groups;
    groups.emplace_back("model", r.model.value_or(kUnlabeledGroup));
    groups.emplace_back("category", r.category.value_or(kUnlabeledGroup));
    for (const auto& subject : std::set<std::string>(r.subjects.begin(), r.subjects.end()))
      groups.emplace_back("subject", subject);
    return groups;
  };

  for (const auto& r : annotations.records)
    for (const auto& [key, group] : groups_of(r)) ++report.counts[key][group];

  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::map<std::string, Acc> metric_acc;
  std::map<std::string, std::map<std::string, std::map<std::string, Acc>>> group_acc;

  for (const auto& record : sorted_records(records, metric_order)) {
    auto it = index_of_id.find(record.sample_id);
    if (it == index_of_id.end())
      throw Error(Errc::UnknownSampleId, "record for unknown sample '" + record.sample_id + "'");
    if (!std::isfinite(record.score)) continue;
    auto& acc = metric_acc[record.metric];
    acc.sum += record.score;
    ++acc.n;
    for (const auto& [key, group] : groups_of(annotations.records[it->second])) {
      auto& g = group_acc[key][group][record.metric];
      g.sum += record.score;
      ++g.n;
    }
  }

  for (const auto& [metric, acc] : metric_acc) report.per_metric_mean[metric] = acc.sum / static_cast<double>(acc.n);
  for (const auto& [key, groups] : group_acc)
    for (const auto& [group, metrics] : groups)
      for (const auto& [metric, acc] : metrics)
        report.per_category[key][group][metric] = acc.sum / static_cast<double>(acc.n);
  return report;
}

EvaluationResult run_evaluation(const Dataset& dataset, std::span<const std::unique_ptr<Metric>> metrics,
                                const LoopOptions& options) {
  if (options.batch_size == 0) throw Error(Errc::InvalidArgument, "batch_size must be at least 1");
  check_metric_names(metrics);

  std::vector<std::string> metric_order;
  for (const auto& metric : metrics) metric_order.push_back(metric->name());

  EvaluationResult result;
  std::vector<SampleError> errors;
  const std::size_t total = dataset.size();

  for (std::size_t begin = 0; begin < total; begin += options.batch_size) {
    const std::size_t end = std::min(total, begin + options.batch_size);
    auto loaded = load_batch(dataset, begin, end, options.num_workers);

    std::vector<EvalSample> batch;
    batch.reserve(loaded.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
      if (loaded[i].sample) {
        batch.push_back(std::move(*loaded[i].sample));
        continue;
      }
      const auto& id = dataset.annotations().records[begin + i].id;
      for (const auto& name : metric_order) errors.push_back(SampleError{id, name, loaded[i].error, begin + i});
    }
    if (batch.empty()) continue;

    for (const auto& metric : metrics) {
      ProcessOutput out;
      try {
        metric->process(batch, out);
      } catch (const std::exception& e) {
        // A batch-level failure cannot be attributed; every sample gets the error.
        out = ProcessOutput{};
        for (const auto& sample : batch) out.add_error(sample, e.what());
      }
      for (auto& record : out.records()) {
        record.metric = metric->name();
        if (!std::isfinite(record.score)) {
          errors.push_back(SampleError{record.sample_id, record.metric, "non-finite score", record.sample_index});
          continue;
        }
        result.records.push_back(std::move(record));
      }
      for (auto& error : out.errors()) {
        error.metric = metric->name();
        errors.push_back(std::move(error));
      }
    }
  }

  std::map<std::string, std::map<std::string, double>> outputs;
  for (const auto& metric : metrics) {
    try {
      outputs[metric->name()] = metric->compute_metrics();
    } catch (const std::exception& e) {
      throw Error(Errc::MetricFailure, "compute_metrics failed for '" + metric->name() + "': " + e.what());
    }
  }

  result.report = aggregate_summary(result.records, dataset.annotations(), metric_order);
  result.report.metric_outputs = std::move(outputs);
  result.report.config_digest = options.config_digest;

  const auto pos = positions(metric_order);
  std::stable_sort(errors.begin(), errors.end(), [&](const SampleError& a, const SampleError& b) {
    if (a.sample_index != b.sample_index) return a.sample_index < b.sample_index;
    return pos.at(a.metric) < pos.at(b.metric);
  });
  result.report.errors = std::move(errors);
  return result;
}

std::string record_to_json_line(const MetricRecord& record) {
  nlohmann::ordered_json line;
  line["sample_id"] = record.sample_id;
  line["metric"] = record.metric;
  line["score"] = record.score;
  line["extras"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : record.extras) line["extras"][key] = value;
  return line.dump();
}

std::string summary_to_json(const SummaryReport& report) {
  nlohmann::json doc;
  doc["num_samples"] = report.num_samples;
  doc["metric_order"] = report.metric_order;
  doc["metric_categories"] = report.metric_categories;
  doc["per_metric_mean"] = report.per_metric_mean;
  doc["metric_outputs"] = report.metric_outputs;
  doc["per_category"] = report.per_category;
  doc["counts"] = report.counts;
  doc["errors"] = nlohmann::json::array();
  for (const auto& e : report.errors)
    doc["errors"].push_back({{"sample_id", e.sample_id}, {"metric", e.metric}, {"message", e.message}});
  doc["provenance"] = {{"config_digest", report.config_digest}};
  return doc.dump(2) + "\n";
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
}

}  // namespace

void write_results(std::span<const MetricRecord> records, const SummaryReport& report, const fs::path& work_dir) {
  std::error_code ec;
  fs::create_directories(work_dir, ec);
  if (ec || !fs::is_directory(work_dir))
    throw Error(Errc::IoError, "cannot create work dir " + work_dir.string() + (ec ? ": " + ec.message() : ""));

  std::string lines;
  for (const auto& record : sorted_records(records, report.metric_order)) lines += record_to_json_line(record) + "\n";
  write_file(work_dir / "results.jsonl", lines);
  write_file(work_dir / "summary.json", summary_to_json(report));
}

}  // namespace aigve
