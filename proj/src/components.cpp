#include "aigve/components.hpp"

#include "aigve/distribution.hpp"
#include "aigve/error.hpp"
#include "aigve/params.hpp"
#include "aigve/perception.hpp"

namespace aigve {

namespace {

std::unique_ptr<Dataset> make_annotation_dataset(const config::ConfigNode& params, const BuildContext& ctx) {
  ParamReader reader(params);
  const auto ann_file = ctx.base_dir / reader.require_string("ann_file");

  AnnotationOptions annotation_options;
  annotation_options.strict_vocabulary = reader.get_bool("strict_vocabulary", false);

  PreprocessOptions preprocess;
  if (auto max_len = reader.get_optional_size("max_len")) {
    SamplingPolicy policy;
    if (*max_len == 0) throw Error(Errc::InvalidArgument, "max_len must be at least 1");
    policy.max_len = *max_len;
    const auto strategy = reader.get_string("strategy", "uniform");
    const auto pad = reader.get_string("pad_mode", "repeat_last");
    auto parsed_strategy = parse_strategy(strategy);
    auto parsed_pad = parse_pad_mode(pad);
    if (!parsed_strategy) throw Error(Errc::InvalidArgument, "strategy must be 'uniform' or 'head', got '" + strategy + "'");
    if (!parsed_pad) throw Error(Errc::InvalidArgument, "pad_mode must be 'repeat_last' or 'zero', got '" + pad + "'");
    policy.strategy = *parsed_strategy;
    policy.pad_mode = *parsed_pad;
    preprocess.sampling = policy;
  } else {
    reader.ignore("strategy");
    reader.ignore("pad_mode");
  }
  if (auto resize = reader.get_optional_size_list("resize")) {
    if (resize->size() != 2 || (*resize)[0] == 0 || (*resize)[1] == 0)
      throw Error(Errc::InvalidArgument, "resize must be [height, width] with positive entries");
    preprocess.resize = FrameSize{(*resize)[0], (*resize)[1]};
  }
  reader.finish();

  auto annotations = load_annotations(ann_file, annotation_options);
  return std::make_unique<AnnotationDataset>(std::move(annotations), preprocess);
}

std::unique_ptr<Metric> make_similarity(const config::ConfigNode& params, EmbeddingSimilarityMetric::Mode mode,
                                        const std::string& text_source, const std::string& frame_source) {
  ParamReader reader(params);
  EmbeddingSimilarityMetric::Options options;
  options.mode = mode;
  if (mode == EmbeddingSimilarityMetric::Mode::TextToFrame) {
    options.text_source = reader.get_string("text_source", text_source);
    options.sim.scale = reader.get_double("scale", 1.0);
    options.sim.clamp_negative = reader.get_bool("clamp_negative", false);
  }
  options.frame_source = reader.get_string("frame_source", frame_source);
  reader.finish();
  return std::make_unique<EmbeddingSimilarityMetric>(std::move(options));
}

std::unique_ptr<Metric> make_vqa(const config::ConfigNode& params, const BuildContext& ctx) {
  ParamReader reader(params);
  const auto weights_path = ctx.base_dir / reader.require_string("weights_path");
  const auto source = reader.get_string("feature_source", "frame_features");
  const auto grid = reader.get_size("grid", 2);
  reader.finish();
  return std::make_unique<VqaHeadMetric>(load_mlp_weights(weights_path), source, grid);
}

std::unique_ptr<Metric> make_frame_statistic(const config::ConfigNode& params, FrameStatisticMetric::Kind kind) {
  ParamReader(params).finish();
  return std::make_unique<FrameStatisticMetric>(kind);
}

}  // namespace

void register_builtin_components(Registries& r) {
  using Mode = EmbeddingSimilarityMetric::Mode;

  r.datasets.register_component("annotation_dataset", std::nullopt, make_annotation_dataset);

  r.loops.register_component("eval_loop", std::nullopt, [](const config::ConfigNode& params, const BuildContext&) {
    ParamReader(params).finish();
    return std::make_unique<EvalLoop>();
  });

  r.metrics.register_component("fid", MetricCategory::DistributionComparison,
                               [](const config::ConfigNode& p, const BuildContext& ctx) {
                                 return FrechetMetric::from_config(p, ctx.base_dir, "frame_features");
                               });
  r.metrics.register_component("fvd", MetricCategory::DistributionComparison,
                               [](const config::ConfigNode& p, const BuildContext& ctx) {
                                 return FrechetMetric::from_config(p, ctx.base_dir, "video_features");
                               });
  r.metrics.register_component("inception_score", MetricCategory::DistributionComparison,
                               [](const config::ConfigNode& p, const BuildContext&) -> std::unique_ptr<Metric> {
                                 ParamReader reader(p);
                                 auto source = reader.get_string("feature_source", "class_probs");
                                 auto splits = reader.get_size("splits", 1);
                                 reader.finish();
                                 return std::make_unique<InceptionScoreMetric>(source, splits);
                               });

  r.metrics.register_component("clip_sim", MetricCategory::VLSimilarity,
                               [](const config::ConfigNode& p, const BuildContext&) {
                                 return make_similarity(p, Mode::TextToFrame, "text_embedding", "frame_embeddings");
                               });
  // BLIPSim and PickScore differ only in which precomputed embeddings they read.
  r.metrics.register_component("blip_sim", MetricCategory::VLSimilarity,
                               [](const config::ConfigNode& p, const BuildContext&) {
                                 return make_similarity(p, Mode::TextToFrame, "blip_text_embedding",
                                                        "blip_frame_embeddings");
                               });
  r.metrics.register_component("pick_score", MetricCategory::VLSimilarity,
                               [](const config::ConfigNode& p, const BuildContext&) {
                                 return make_similarity(p, Mode::TextToFrame, "pick_text_embedding",
                                                        "pick_frame_embeddings");
                               });
  r.metrics.register_component("clip_temp", MetricCategory::VLSimilarity,
                               [](const config::ConfigNode& p, const BuildContext&) {
                                 return make_similarity(p, Mode::FrameToFrame, "", "frame_embeddings");
                               });

  r.metrics.register_component("gst_vqa_style", MetricCategory::VideoOnlyNN, make_vqa);
  r.metrics.register_component("technical_sharpness", MetricCategory::VideoOnlyNN,
                               [](const config::ConfigNode& p, const BuildContext&) {
                                 return make_frame_statistic(p, FrameStatisticMetric::Kind::Sharpness);
                               });
  r.metrics.register_component("dynamics_energy", MetricCategory::VideoOnlyNN,
                               [](const config::ConfigNode& p, const BuildContext&) {
                                 return make_frame_statistic(p, FrameStatisticMetric::Kind::Dynamics);
                               });
}

const Registries& builtin_registries() {
  static const Registries registries = [] {
    Registries r;
    register_builtin_components(r);
    r.freeze();
    return r;
  }();
  return registries;
}

std::unique_ptr<Metric> build_metric(const Registries& registries, const config::ConfigNode& spec,
                                     const BuildContext& ctx) {
  if (!spec.is_object()) throw Error(Errc::SchemaError, "metric spec must be a map");
  config::ConfigNode params = spec;
  std::string name;
  if (auto it = params.find("name"); it != params.end()) {
    if (!it->is_string()) throw Error(Errc::TypeConflict, "metric 'name' must be a string");
    name = it->get<std::string>();
    params.erase("name");
  }
  auto metric = registries.metrics.build(params, ctx);
  metric->set_name(name.empty() ? params["type"].get<std::string>() : name);
  return metric;
}

std::vector<std::unique_ptr<Metric>> build_metrics(const Registries& registries, const config::ConfigNode& evaluator,
                                                   const BuildContext& ctx) {
  std::vector<std::unique_ptr<Metric>> metrics;
  if (evaluator.is_object()) {
    metrics.push_back(build_metric(registries, evaluator, ctx));
  } else if (evaluator.is_array()) {
    for (const auto& spec : evaluator) metrics.push_back(build_metric(registries, spec, ctx));
  } else {
    throw Error(Errc::SchemaError, "val_evaluator must be a metric spec or a list of them");
  }
  if (metrics.empty()) throw Error(Errc::SchemaError, "val_evaluator lists no metrics");
  return metrics;
}

RunPlan plan_run(const Registries& registries, const config::ConfigNode& resolved, const BuildContext& ctx) {
  if (!resolved.contains("val_dataloader")) throw Error(Errc::SchemaError, "config has no 'val_dataloader'");
  if (!resolved.contains("val_evaluator")) throw Error(Errc::SchemaError, "config has no 'val_evaluator'");

  RunPlan plan;
  {
    ParamReader loader(resolved["val_dataloader"]);
    plan.options.batch_size = loader.get_size("batch_size", 1);
    plan.options.num_workers = loader.get_size("num_workers", 0);
    if (plan.options.batch_size == 0) throw Error(Errc::InvalidArgument, "val_dataloader.batch_size must be at least 1");
    // Accepted for compatibility with dataloader-style configs; evaluation is
    // always sequential and complete.
    loader.ignore("persistent_workers");
    loader.ignore("drop_last");
    loader.ignore("sampler");
    loader.ignore("dataset");
    loader.finish();
  }
  const auto& dataset_spec = resolved["val_dataloader"];
  if (!dataset_spec.contains("dataset")) throw Error(Errc::SchemaError, "val_dataloader has no 'dataset'");
  plan.dataset = registries.datasets.build(dataset_spec["dataset"], ctx);

  plan.metrics = build_metrics(registries, resolved["val_evaluator"], ctx);
  for (const auto& spec : resolved["val_evaluator"].is_array() ? resolved["val_evaluator"]
                                                               : config::ConfigNode::array({resolved["val_evaluator"]})) {
    const auto type = spec["type"].get<std::string>();
    const auto name = spec.contains("name") ? spec["name"].get<std::string>() : type;
    if (auto category = registries.metrics.category(type)) plan.metric_categories[name] = std::string(to_string(*category));
  }

  const config::ConfigNode loop_spec =
      resolved.contains("val_cfg") ? resolved["val_cfg"] : config::ConfigNode{{"type", "eval_loop"}};
  plan.loop = registries.loops.build(loop_spec, ctx);
  plan.options.config_digest = config::digest(resolved);
  return plan;
}

EvaluationResult execute_run(const Registries& registries, const config::ConfigNode& resolved,
                             const BuildContext& ctx) {
  auto plan = plan_run(registries, resolved, ctx);
  auto result = plan.loop->run(*plan.dataset, plan.metrics, plan.options);
  result.report.metric_categories = plan.metric_categories;
  return result;
}

}  // namespace aigve
