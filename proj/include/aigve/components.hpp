#pragma once

// Built-in datasets, metrics and loops, and the config-driven run that wires
// them together.

#include <filesystem>
#include <memory>
#include <vector>

#include "aigve/config.hpp"
#include "aigve/dataset.hpp"
#include "aigve/eval_loop.hpp"
#include "aigve/metric.hpp"
#include "aigve/registry.hpp"

namespace aigve {

struct Registries {
  Registry<Dataset> datasets{ComponentKind::Dataset};
  Registry<Metric> metrics{ComponentKind::Metric};
  Registry<EvalLoop> loops{ComponentKind::Loop};

  void freeze() noexcept {
    datasets.freeze();
    metrics.freeze();
    loops.freeze();
  }
};

void register_builtin_components(Registries& registries);

/// Process-wide registries with the built-ins registered and frozen.
const Registries& builtin_registries();

/// Builds a metric from `{"type": ..., "name"?: ..., ...}`; the instance is
/// named after `name`, defaulting to the type.
std::unique_ptr<Metric> build_metric(const Registries& registries, const config::ConfigNode& spec,
                                     const BuildContext& ctx);

/// `val_evaluator` may be one metric spec or a list of them.
std::vector<std::unique_ptr<Metric>> build_metrics(const Registries& registries, const config::ConfigNode& evaluator,
                                                   const BuildContext& ctx);

struct RunPlan {
  std::unique_ptr<Dataset> dataset;
  std::vector<std::unique_ptr<Metric>> metrics;
  std::unique_ptr<EvalLoop> loop;
  LoopOptions options;
  std::map<std::string, std::string> metric_categories;
};

/// Interprets a resolved run config: `val_dataloader` (batch_size,
/// num_workers, dataset), `val_evaluator` and optional `val_cfg`.
RunPlan plan_run(const Registries& registries, const config::ConfigNode& resolved, const BuildContext& ctx);

/// plan_run followed by the loop; the report carries categories and digest.
EvaluationResult execute_run(const Registries& registries, const config::ConfigNode& resolved,
                             const BuildContext& ctx);

}  // namespace aigve
