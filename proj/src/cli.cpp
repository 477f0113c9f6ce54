#include "aigve/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "aigve/components.hpp"
#include "aigve/config.hpp"
#include "aigve/csv.hpp"
#include "aigve/error.hpp"
#include "aigve/features.hpp"
#include "aigve/meta_eval.hpp"

namespace aigve {

namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out.flush()) throw Error(Errc::IoError, "cannot write " + path.string());
}

config::ConfigNode resolved_config(const std::string& path, const std::vector<std::string>& overrides) {
  auto node = config::load_config(path);
  return config::apply_overrides(std::move(node), overrides);
}

std::string format_score(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

struct RunArgs {
  std::string config;
  std::string work_dir;
  std::vector<std::string> cfg_options;
};

void cmd_run(const RunArgs& args, std::ostream& out) {
  const auto resolved = resolved_config(args.config, args.cfg_options);
  const BuildContext ctx{fs::absolute(args.config).parent_path()};
  const auto result = execute_run(builtin_registries(), resolved, ctx);

  const fs::path work_dir(args.work_dir);
  write_results(result.records, result.report, work_dir);
  write_text(work_dir / "resolved_config.json", config::to_sorted_string(resolved) + "\n");

  const auto& report = result.report;
  out << "evaluated " << report.num_samples << " samples\n";
  for (const auto& metric : report.metric_order) {
    out << metric << ":";
    if (auto it = report.per_metric_mean.find(metric); it != report.per_metric_mean.end()) {
      out << " mean " << format_score(it->second);
    } else if (auto outputs = report.metric_outputs.find(metric); outputs != report.metric_outputs.end()) {
      if (auto corpus = outputs->second.find(metric); corpus != outputs->second.end())
        out << " " << format_score(corpus->second);
    }
    out << "\n";
  }
  if (!report.errors.empty()) out << report.errors.size() << " sample errors, see summary.json\n";
  out << "results written to " << work_dir.string() << "\n";
}

struct MetaArgs {
  std::string metrics;
  std::string human;
  std::string out;
  bool fit_fusion = false;
  bool single_feature = false;
  std::size_t kfold = 0;
  std::uint64_t seed = 0;
};

void cmd_meta(const MetaArgs& args, std::ostream& out) {
  const auto scores = meta::load_results_jsonl(args.metrics);
  const auto human = meta::load_human_scores(args.human);
  meta::MetaOptions options;
  options.fit_fusion = args.fit_fusion;
  options.single_feature = args.single_feature;
  options.seed = args.seed;
  if (args.kfold > 0) options.kfold = args.kfold;

  const auto doc = meta::run_meta(scores, human, options);
  write_text(args.out, doc.dump(2) + "\n");

  for (const auto& [aspect, metric] : doc["recommended"].items()) {
    out << aspect << ": " << metric.get<std::string>() << " (srcc "
        << format_score(doc["srcc"][metric.get<std::string>()][aspect].get<double>()) << ")";
    if (doc.contains("fusion") && doc["fusion"].contains(aspect) && doc["fusion"][aspect]["srcc_reg"].is_number())
      out << ", fused srcc " << format_score(doc["fusion"][aspect]["srcc_reg"].get<double>());
    out << "\n";
  }
  out << "meta-evaluation written to " << args.out << "\n";
}

struct PackArgs {
  std::string csv;
  std::string out;
  std::size_t rank = 2;
};

void cmd_pack_features(const PackArgs& args, std::ostream& out) {
  std::ifstream in(args.csv);
  if (!in) throw Error(Errc::IoError, "cannot open " + args.csv);
  const auto rows = csv::read_rows(in);
  if (rows.empty()) throw Error(Errc::SchemaError, args.csv + ": no rows");

  const std::size_t cols = rows.front().size();
  std::vector<float> data;
  data.reserve(rows.size() * cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols)
      throw Error(Errc::DimensionMismatch, args.csv + ": row " + std::to_string(r + 1) + " has " +
                                               std::to_string(rows[r].size()) + " values, expected " +
                                               std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) {
      auto value = csv::parse_float(rows[r][c]);
      if (!value)
        throw Error(Errc::NonNumericScore, args.csv + ": row " + std::to_string(r + 1) + " column " +
                                               std::to_string(c + 1) + " is not a finite number: '" + rows[r][c] + "'");
      data.push_back(*value);
    }
  }

  std::vector<std::size_t> dims;
  if (args.rank == 1) {
    if (rows.size() != 1) throw Error(Errc::DimensionMismatch, "rank 1 needs a single CSV row");
    dims = {cols};
  } else {
    dims = {rows.size(), cols};
  }
  write_feature_file(args.out, FeatureMatrix(dims, std::move(data)));
  out << "wrote " << args.out << " [";
  for (std::size_t i = 0; i < dims.size(); ++i) out << (i ? "," : "") << dims[i];
  out << "]\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Configuration-driven evaluation of generated videos", "aigve"};
  app.require_subcommand(1, 1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run the evaluation described by a config");
  run->add_option("config", run_args.config, "Config file (.json)")->required()->check(CLI::ExistingFile);
  run->add_option("--work-dir", run_args.work_dir, "Output directory")->required();
  run->add_option("--cfg-options", run_args.cfg_options, "Overrides as dotted.path=value")->expected(1, -1);

  MetaArgs meta_args;
  auto* meta = app.add_subcommand("meta", "Correlate metric results with human scores");
  meta->add_option("--metrics", meta_args.metrics, "results.jsonl from a run")->required();
  meta->add_option("--human", meta_args.human, "Human score CSV")->required();
  meta->add_option("--out", meta_args.out, "Output meta.json")->required();
  auto* fit = meta->add_flag("--fit-fusion", meta_args.fit_fusion, "Fit per-aspect regression fusion");
  meta->add_flag("--single-feature", meta_args.single_feature, "Fuse only the aspect's own recommended metric")
      ->needs(fit);
  meta->add_option("--kfold", meta_args.kfold, "Also report k-fold cross-validated fusion SRCC")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
      ->needs(fit);
  meta->add_option("--seed", meta_args.seed, "Seed for the k-fold split");

  std::string inspect_path;
  std::vector<std::string> inspect_overrides;
  auto* inspect = app.add_subcommand("inspect-config", "Print the fully resolved config");
  inspect->add_option("config", inspect_path, "Config file (.json)")->required()->check(CLI::ExistingFile);
  inspect->add_option("--cfg-options", inspect_overrides, "Overrides as dotted.path=value")->expected(1, -1);

  auto* list = app.add_subcommand("list-metrics", "List registered metrics and their categories");

  PackArgs pack_args;
  auto* pack = app.add_subcommand("pack-features", "Convert a CSV of floats into an AGVF feature file");
  pack->add_option("--csv", pack_args.csv, "Input CSV")->required();
  pack->add_option("--out", pack_args.out, "Output .agvf")->required();
  pack->add_option("--rank", pack_args.rank, "Tensor rank (1 or 2)")->check(CLI::IsMember({1, 2}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      cmd_run(run_args, out);
    } else if (*meta) {
      cmd_meta(meta_args, out);
    } else if (*inspect) {
      out << config::to_sorted_string(resolved_config(inspect_path, inspect_overrides)) << "\n";
    } else if (*list) {
      for (const auto& entry : builtin_registries().metrics.list())
        out << entry.name << "\t" << (entry.category ? to_string(*entry.category) : std::string_view("-")) << "\n";
    } else if (*pack) {
      cmd_pack_features(pack_args, out);
    }
  } catch (const std::exception& e) {
    err << "aigve: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace aigve
