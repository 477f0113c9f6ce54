#pragma once

// Meta-evaluation: how well automatic metrics track human aspect scores.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace aigve::meta {

enum class Aspect {
  TechnicalQuality,
  Dynamic,
  Consistency,
  Physics,
  ElementPresence,
  ElementQuality,
  ActionPresence,
  ActionQuality,
  Overall,
};

inline constexpr std::size_t kAspectCount = 9;

/// All aspects in CSV column order.
std::span<const Aspect> all_aspects() noexcept;
std::string_view to_string(Aspect aspect) noexcept;
std::optional<Aspect> parse_aspect(std::string_view text) noexcept;

using AspectScores = std::array<std::optional<double>, kAspectCount>;

struct HumanScoreRow {
  std::string video_id;
  std::string model;
  std::optional<std::string> annotator;
  AspectScores scores;
};

class HumanScoreTable {
 public:
  HumanScoreTable() = default;
  HumanScoreTable(bool multi_annotator, std::vector<HumanScoreRow> rows);

  bool multi_annotator() const noexcept { return multi_annotator_; }
  const std::vector<HumanScoreRow>& rows() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_.empty(); }

  /// Video ids in order of first appearance.
  std::vector<std::string> video_ids() const;
  /// Single-score mode: the score. Multi-annotator mode: mean of the present
  /// ratings, nullopt when none.
  std::optional<double> score(const std::string& video_id, Aspect aspect) const;
  /// Aspect score of every video that has one.
  std::map<std::string, double> aspect_scores(Aspect aspect) const;
  /// Present ratings per video (the reliability units), in first-appearance order.
  std::vector<std::vector<double>> ratings_by_unit(Aspect aspect) const;

 private:
  bool multi_annotator_ = false;
  std::vector<HumanScoreRow> rows_;
};

/// Header `video_id,model[,annotator_id],<9 aspects in order>`. Empty cells are
/// missing ratings and only allowed with an annotator column.
HumanScoreTable parse_human_scores(std::istream& in);
HumanScoreTable load_human_scores(const std::filesystem::path& path);

/// 1-based ranks; ties share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> x);
double pearson(std::span<const double> x, std::span<const double> y);
double spearman_srcc(std::span<const double> x, std::span<const double> y);

/// Interval-metric Krippendorff's alpha over reliability units (one vector of
/// ratings per unit). Units with fewer than two ratings are skipped.
double krippendorff_alpha(std::span<const std::vector<double>> units);
double krippendorff_alpha(const HumanScoreTable& table, Aspect aspect);

/// video id -> metric name -> score.
using MetricScores = std::map<std::string, std::map<std::string, double>>;

/// Per-sample scores from a results.jsonl stream.
MetricScores parse_results_jsonl(std::istream& in);
MetricScores load_results_jsonl(const std::filesystem::path& path);

struct CorrelationReport {
  std::map<std::string, std::map<Aspect, double>> srcc;
  std::map<std::string, std::map<Aspect, std::size_t>> n_pairs;
  /// (metric, aspect) pairs where one side is constant over the overlap.
  std::vector<std::pair<std::string, Aspect>> degenerate;
  std::map<Aspect, std::string> recommended;
  /// Aspects whose best SRCC was shared by several metrics.
  std::set<Aspect> tied;
};

/// SRCC for every (metric, aspect) over shared video ids and the per-aspect
/// best metric (ties go to the lexicographically first name).
CorrelationReport correlate_all(const MetricScores& metric_scores, const HumanScoreTable& human);

struct FusionModel {
  std::vector<std::string> feature_names;
  std::vector<double> coefficients;
  double intercept = 0.0;
  std::vector<double> means;
  std::vector<double> stds;
  std::vector<std::string> dropped;
  std::size_t n_rows = 0;
};

inline constexpr double kFusionRidge = 1e-8;

/// Z-scores each feature (population std; constant features dropped) and fits
/// least squares with an intercept through ridge-regularized normal equations.
FusionModel fit_fusion(const MetricScores& features, const std::map<std::string, double>& target,
                       std::span<const std::string> feature_names);

struct FusionEvaluation {
  std::vector<std::string> video_ids;
  std::vector<double> predictions;
  std::vector<double> targets;
  double srcc_reg = 0.0;
};

/// Predicts every target video (MissingFeature if one lacks a kept feature)
/// and scores the predictions against the target by SRCC.
FusionEvaluation evaluate_fusion(const FusionModel& model, const MetricScores& features,
                                 const std::map<std::string, double>& target);

/// Out-of-fold predictions from `folds`-fold cross-validation over a seeded
/// shuffle of the shared video ids.
FusionEvaluation cross_validate_fusion(const MetricScores& features, const std::map<std::string, double>& target,
                                       std::span<const std::string> feature_names, std::size_t folds,
                                       std::uint64_t seed);

struct MetaOptions {
  bool fit_fusion = false;
  /// Use only the aspect's own recommended metric instead of the union.
  bool single_feature = false;
  std::optional<std::size_t> kfold;
  std::uint64_t seed = 0;
};

/// Full meta-evaluation report (the meta.json document).
nlohmann::json run_meta(const MetricScores& metric_scores, const HumanScoreTable& human, const MetaOptions& options);

}  // namespace aigve::meta
