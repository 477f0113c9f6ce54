#include "aigve/meta_eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "aigve/csv.hpp"
#include "aigve/error.hpp"

namespace aigve::meta {

namespace {

constexpr std::array<Aspect, kAspectCount> kAspects = {
    Aspect::TechnicalQuality, Aspect::Dynamic,        Aspect::Consistency,
    Aspect::Physics,          Aspect::ElementPresence, Aspect::ElementQuality,
    Aspect::ActionPresence,   Aspect::ActionQuality,   Aspect::Overall,
};

constexpr std::array<std::string_view, kAspectCount> kAspectNames = {
    "technical_quality", "dynamic",         "consistency",   "physics", "element_presence",
    "element_quality",   "action_presence", "action_quality", "overall",
};

constexpr double kTieTolerance = 1e-12;

std::size_t index_of(Aspect a) { return static_cast<std::size_t>(a); }

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sum_sq_dev(std::span<const double> x) {
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s;
}

std::string header_text(bool multi) {
  std::string h = multi ? "video_id,model,annotator_id" : "video_id,model";
  for (auto name : kAspectNames) h += "," + std::string(name);
  return h;
}

}  // namespace

std::span<const Aspect> all_aspects() noexcept { return kAspects; }

std::string_view to_string(Aspect aspect) noexcept { return kAspectNames[index_of(aspect)]; }

std::optional<Aspect> parse_aspect(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kAspectCount; ++i)
    if (kAspectNames[i] == text) return kAspects[i];
  return std::nullopt;
}

HumanScoreTable::HumanScoreTable(bool multi_annotator, std::vector<HumanScoreRow> rows)
    : multi_annotator_(multi_annotator), rows_(std::move(rows)) {}

std::vector<std::string> HumanScoreTable::video_ids() const {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& row : rows_)
    if (seen.insert(row.video_id).second) ids.push_back(row.video_id);
  return ids;
}

std::optional<double> HumanScoreTable::score(const std::string& video_id, Aspect aspect) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& row : rows_) {
    if (row.video_id != video_id) continue;
    if (const auto& v = row.scores[index_of(aspect)]) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::map<std::string, double> HumanScoreTable::aspect_scores(Aspect aspect) const {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& row : rows_) {
    if (const auto& v = row.scores[index_of(aspect)]) {
      auto& [sum, n] = acc[row.video_id];
      sum += *v;
      ++n;
    }
  }
  std::map<std::string, double> out;
  for (const auto& [id, sn] : acc) out[id] = sn.first / static_cast<double>(sn.second);
  return out;
}

std::vector<std::vector<double>> HumanScoreTable::ratings_by_unit(Aspect aspect) const {
  std::vector<std::vector<double>> units;
  std::map<std::string, std::size_t> slot;
  for (const auto& row : rows_) {
    auto [it, inserted] = slot.try_emplace(row.video_id, units.size());
    if (inserted) units.emplace_back();
    if (const auto& v = row.scores[index_of(aspect)]) units[it->second].push_back(*v);
  }
  return units;
}

HumanScoreTable parse_human_scores(std::istream& in) {
  const auto rows = csv::read_rows(in);
  if (rows.empty()) throw Error(Errc::HeaderMismatch, "human score CSV is empty");

  const auto& header = rows.front();
  const bool multi = header.size() == kAspectCount + 3;
  const std::size_t offset = multi ? 3 : 2;
  bool header_ok = (header.size() == kAspectCount + 2 || multi) && header[0] == "video_id" && header[1] == "model" &&
                   (!multi || header[2] == "annotator_id");
  for (std::size_t i = 0; header_ok && i < kAspectCount; ++i) header_ok = header[offset + i] == kAspectNames[i];
  if (!header_ok)
    throw Error(Errc::HeaderMismatch, "expected header '" + header_text(false) + "' or '" + header_text(true) + "'");

  std::vector<HumanScoreRow> parsed;
  std::set<std::pair<std::string, std::string>> keys;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const std::string where = "line " + std::to_string(r + 1);
    if (cells.size() != header.size())
      throw Error(Errc::HeaderMismatch, where + ": " + std::to_string(cells.size()) + " cells, header has " +
                                            std::to_string(header.size()));
    HumanScoreRow row;
    row.video_id = cells[0];
    row.model = cells[1];
    if (row.video_id.empty()) throw Error(Errc::HeaderMismatch, where + ": empty video_id");
    if (multi) row.annotator = cells[2];
    if (!keys.emplace(row.video_id, row.annotator.value_or("")).second)
      throw Error(Errc::DuplicateKey, where + ": repeated video_id '" + row.video_id + "'" +
                                          (multi ? " for annotator '" + *row.annotator + "'" : std::string()));
    for (std::size_t i = 0; i < kAspectCount; ++i) {
      const auto& cell = cells[offset + i];
      if (cell.empty() && multi) continue;
      auto value = csv::parse_double(cell);
      if (!value)
        throw Error(Errc::NonNumericScore, where + ": " + std::string(kAspectNames[i]) + " = '" + cell + "'");
      row.scores[i] = *value;
    }
    parsed.push_back(std::move(row));
  }
  return HumanScoreTable(multi, std::move(parsed));
}

HumanScoreTable load_human_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open human scores " + path.string());
  try {
    return parse_human_scores(in);
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    // Positions i..j (0-based) share ranks i+1..j+1.
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(Errc::LengthMismatch, "lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  if (x.size() < 2) throw Error(Errc::DegenerateInput, "need at least 2 pairs");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(Errc::DegenerateInput, "constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman_srcc(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(Errc::LengthMismatch, "lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double krippendorff_alpha(std::span<const std::vector<double>> units) {
  // Interval metric: the ordered-pair sum of squared differences within a set
  // of m values equals 2m times its sum of squared deviations.
  std::vector<double> pooled;
  double within = 0.0;
  std::size_t pairable_units = 0;
  for (const auto& unit : units) {
    const std::size_t m = unit.size();
    if (m < 2) continue;
    ++pairable_units;
    within += 2.0 * static_cast<double>(m) * sum_sq_dev(unit) / static_cast<double>(m - 1);
    pooled.insert(pooled.end(), unit.begin(), unit.end());
  }
  if (pairable_units < 2)
    throw Error(Errc::InsufficientRatings, "need at least 2 units with 2 or more ratings, got " +
                                               std::to_string(pairable_units));
  const double n = static_cast<double>(pooled.size());
  const double d_o = within / n;
  const double d_e = 2.0 * n * sum_sq_dev(pooled) / (n * (n - 1.0));
  if (d_e == 0.0) throw Error(Errc::ZeroExpectedDisagreement, "all pooled ratings are identical");
  return 1.0 - d_o / d_e;
}

double krippendorff_alpha(const HumanScoreTable& table, Aspect aspect) {
  try {
    return krippendorff_alpha(table.ratings_by_unit(aspect));
  } catch (const Error& e) {
    throw e.with_context(std::string(to_string(aspect)));
  }
}

MetricScores parse_results_jsonl(std::istream& in) {
  MetricScores scores;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::SchemaError, where + ": " + e.what());
    }
    if (!record.is_object() || !record.contains("sample_id") || !record["sample_id"].is_string() ||
        !record.contains("metric") || !record["metric"].is_string() || !record.contains("score") ||
        !record["score"].is_number())
      throw Error(Errc::SchemaError, where + ": needs string 'sample_id', string 'metric' and numeric 'score'");
    const auto id = record["sample_id"].get<std::string>();
    const auto metric = record["metric"].get<std::string>();
    if (!scores[id].emplace(metric, record["score"].get<double>()).second)
      throw Error(Errc::DuplicateKey, where + ": second score for ('" + id + "', '" + metric + "')");
  }
  return scores;
}

MetricScores load_results_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open metric results " + path.string());
  try {
    return parse_results_jsonl(in);
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

CorrelationReport correlate_all(const MetricScores& metric_scores, const HumanScoreTable& human) {
  std::set<std::string> metric_names;
  for (const auto& [id, by_metric] : metric_scores)
    for (const auto& [metric, score] : by_metric) metric_names.insert(metric);
  if (metric_names.empty()) throw Error(Errc::NoOverlap, "no metric scores");

  CorrelationReport report;
  for (Aspect aspect : kAspects) {
    const auto target = human.aspect_scores(aspect);
    for (const auto& metric : metric_names) {
      std::vector<double> xs, ys;
      for (const auto& [id, h] : target) {
        auto row = metric_scores.find(id);
        if (row == metric_scores.end()) continue;
        auto it = row->second.find(metric);
        if (it == row->second.end()) continue;
        xs.push_back(it->second);
        ys.push_back(h);
      }
      if (xs.size() < 2)
        throw Error(Errc::NoOverlap, "metric '" + metric + "' and aspect '" + std::string(to_string(aspect)) +
                                         "' share " + std::to_string(xs.size()) + " videos, need 2");
      report.n_pairs[metric][aspect] = xs.size();
      try {
        report.srcc[metric][aspect] = spearman_srcc(xs, ys);
      } catch (const Error& e) {
        if (e.code() != Errc::DegenerateInput) throw;
        report.degenerate.emplace_back(metric, aspect);
      }
    }

    std::optional<std::pair<std::string, double>> best;
    bool tied = false;
    for (const auto& metric : metric_names) {  // lexicographic order
      auto by_metric = report.srcc.find(metric);
      if (by_metric == report.srcc.end()) continue;
      auto it = by_metric->second.find(aspect);
      if (it == by_metric->second.end()) continue;
      if (!best || it->second > best->second + kTieTolerance) {
        best = {metric, it->second};
        tied = false;
      } else if (std::abs(it->second - best->second) <= kTieTolerance) {
        tied = true;
      }
    }
    if (best) {
      report.recommended[aspect] = best->first;
      if (tied) report.tied.insert(aspect);
    }
  }
  return report;
}

namespace {

struct FusionRows {
  std::vector<std::string> ids;
  Eigen::MatrixXd x;  // rows x features
  Eigen::VectorXd y;
};

FusionRows intersect_rows(const MetricScores& features, const std::map<std::string, double>& target,
                          std::span<const std::string> names) {
  FusionRows rows;
  std::vector<std::vector<double>> values;
  for (const auto& [id, y] : target) {
    auto row = features.find(id);
    if (row == features.end()) continue;
    std::vector<double> v;
    for (const auto& name : names) {
      auto it = row->second.find(name);
      if (it == row->second.end()) break;
      v.push_back(it->second);
    }
    if (v.size() != names.size()) continue;
    rows.ids.push_back(id);
    values.push_back(std::move(v));
  }
  rows.x.resize(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(names.size()));
  rows.y.resize(static_cast<Eigen::Index>(values.size()));
  for (std::size_t r = 0; r < values.size(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c)
      rows.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r][c];
    rows.y(static_cast<Eigen::Index>(r)) = target.at(rows.ids[r]);
  }
  return rows;
}

FusionModel fit_rows(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const std::string> names) {
  const auto n = x.rows();
  const auto k = x.cols();
  if (k == 0) throw Error(Errc::InvalidArgument, "fusion needs at least one feature");
  if (n < k + 2)
    throw Error(Errc::TooFewRows, std::to_string(n) + " rows for " + std::to_string(k) + " features, need " +
                                      std::to_string(k + 2));
  for (Eigen::Index r = 0; r < n; ++r) {
    if (!std::isfinite(y(r))) throw Error(Errc::NonFiniteValue, "non-finite target");
    for (Eigen::Index c = 0; c < k; ++c)
      if (!std::isfinite(x(r, c)))
        throw Error(Errc::NonFiniteValue, "non-finite value for feature '" + names[static_cast<std::size_t>(c)] + "'");
  }

  FusionModel model;
  model.n_rows = static_cast<std::size_t>(n);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::VectorXd col = x.col(c);
    const double mean = col.mean();
    const double std = std::sqrt((col.array() - mean).square().sum() / static_cast<double>(n));
    const auto& name = names[static_cast<std::size_t>(c)];
    if (std <= 1e-12 * std::max(1.0, std::abs(mean))) {
      model.dropped.push_back(name);
      continue;
    }
    kept.push_back(c);
    model.feature_names.push_back(name);
    model.means.push_back(mean);
    model.stds.push_back(std);
  }
  if (kept.empty()) throw Error(Errc::AllFeaturesConstant, "every fusion feature is constant");

  const auto p = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd design(n, p + 1);
  design.col(0).setOnes();
  for (Eigen::Index j = 0; j < p; ++j)
    design.col(j + 1) = (x.col(kept[static_cast<std::size_t>(j)]).array() - model.means[static_cast<std::size_t>(j)]) /
                        model.stds[static_cast<std::size_t>(j)];

  const Eigen::MatrixXd gram = design.transpose() * design;
  const Eigen::VectorXd rhs = design.transpose() * y;
  Eigen::MatrixXd normal = gram;
  for (Eigen::Index j = 1; j <= p; ++j) normal(j, j) += kFusionRidge;
  const auto solver = normal.ldlt();
  Eigen::VectorXd beta = solver.solve(rhs);
  // Refinement against the unregularized system removes the ridge bias on
  // well-posed data; directions the ridge had to pin stay pinned.
  for (int step = 0; step < 2; ++step) beta += solver.solve(rhs - gram * beta);

  model.intercept = beta(0);
  model.coefficients.assign(beta.data() + 1, beta.data() + 1 + p);
  return model;
}

double predict_row(const FusionModel& model, const std::map<std::string, double>& row, const std::string& id) {
  double value = model.intercept;
  for (std::size_t j = 0; j < model.feature_names.size(); ++j) {
    auto it = row.find(model.feature_names[j]);
    if (it == row.end())
      throw Error(Errc::MissingFeature, "video '" + id + "' has no value for '" + model.feature_names[j] + "'");
    value += model.coefficients[j] * (it->second - model.means[j]) / model.stds[j];
  }
  return value;
}

}  // namespace

FusionModel fit_fusion(const MetricScores& features, const std::map<std::string, double>& target,
                       std::span<const std::string> feature_names) {
  const auto rows = intersect_rows(features, target, feature_names);
  return fit_rows(rows.x, rows.y, feature_names);
}

FusionEvaluation evaluate_fusion(const FusionModel& model, const MetricScores& features,
                                 const std::map<std::string, double>& target) {
  static const std::map<std::string, double> kNoFeatures;
  FusionEvaluation eval;
  for (const auto& [id, y] : target) {
    auto row = features.find(id);
    eval.predictions.push_back(predict_row(model, row == features.end() ? kNoFeatures : row->second, id));
    eval.targets.push_back(y);
    eval.video_ids.push_back(id);
  }
  eval.srcc_reg = spearman_srcc(eval.predictions, eval.targets);
  return eval;
}

FusionEvaluation cross_validate_fusion(const MetricScores& features, const std::map<std::string, double>& target,
                                       std::span<const std::string> feature_names, std::size_t folds,
                                       std::uint64_t seed) {
  if (folds < 2) throw Error(Errc::InvalidArgument, "k-fold needs at least 2 folds");
  const auto rows = intersect_rows(features, target, feature_names);
  const auto n = static_cast<std::size_t>(rows.x.rows());
  if (n < folds) throw Error(Errc::TooFewRows, std::to_string(n) + " rows for " + std::to_string(folds) + " folds");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  // Fisher-Yates with explicit draws so the split does not depend on the
  // standard library's shuffle implementation.
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

  FusionEvaluation eval;
  eval.predictions.assign(n, 0.0);
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t lo = f * n / folds;
    const std::size_t hi = (f + 1) * n / folds;
    std::vector<Eigen::Index> train;
    for (std::size_t i = 0; i < n; ++i)
      if (i < lo || i >= hi) train.push_back(static_cast<Eigen::Index>(order[i]));
    Eigen::MatrixXd x(static_cast<Eigen::Index>(train.size()), rows.x.cols());
    Eigen::VectorXd y(static_cast<Eigen::Index>(train.size()));
    for (std::size_t r = 0; r < train.size(); ++r) {
      x.row(static_cast<Eigen::Index>(r)) = rows.x.row(train[r]);
      y(static_cast<Eigen::Index>(r)) = rows.y(train[r]);
    }
    const auto model = fit_rows(x, y, feature_names);
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& id = rows.ids[order[i]];
      eval.predictions[order[i]] = predict_row(model, features.at(id), id);
    }
  }
  eval.video_ids = rows.ids;
  eval.targets.assign(rows.y.data(), rows.y.data() + rows.y.size());
  eval.srcc_reg = spearman_srcc(eval.predictions, eval.targets);
  return eval;
}

namespace {

/// SRCC from `compute`, or null when predictions or targets are constant.
template <typename F>
nlohmann::json srcc_or_null(F compute) {
  try {
    return compute();
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateInput) throw;
    return nullptr;
  }
}

}  // namespace

nlohmann::json run_meta(const MetricScores& metric_scores, const HumanScoreTable& human, const MetaOptions& options) {
  if (human.empty()) throw Error(Errc::NoOverlap, "human score table has no rows");
  const auto report = correlate_all(metric_scores, human);

  nlohmann::json doc;
  doc["srcc"] = nlohmann::json::object();
  doc["n_pairs"] = nlohmann::json::object();
  for (const auto& [metric, by_aspect] : report.srcc)
    for (const auto& [aspect, r] : by_aspect) doc["srcc"][metric][std::string(to_string(aspect))] = r;
  for (const auto& [metric, by_aspect] : report.n_pairs)
    for (const auto& [aspect, n] : by_aspect) doc["n_pairs"][metric][std::string(to_string(aspect))] = n;
  doc["degenerate"] = nlohmann::json::array();
  for (const auto& [metric, aspect] : report.degenerate)
    doc["degenerate"].push_back({{"metric", metric}, {"aspect", std::string(to_string(aspect))}});
  doc["recommended"] = nlohmann::json::object();
  for (const auto& [aspect, metric] : report.recommended) doc["recommended"][std::string(to_string(aspect))] = metric;
  doc["recommended_ties"] = nlohmann::json::array();
  for (Aspect aspect : report.tied) doc["recommended_ties"].push_back(std::string(to_string(aspect)));

  if (human.multi_annotator()) {
    doc["krippendorff_alpha"] = nlohmann::json::object();
    for (Aspect aspect : kAspects) {
      try {
        doc["krippendorff_alpha"][std::string(to_string(aspect))] = krippendorff_alpha(human, aspect);
      } catch (const Error& e) {
        if (e.code() != Errc::InsufficientRatings && e.code() != Errc::ZeroExpectedDisagreement) throw;
        doc["krippendorff_alpha"][std::string(to_string(aspect))] = nullptr;
      }
    }
  }

  if (!options.fit_fusion) return doc;

  std::vector<std::string> shared_features;
  for (Aspect aspect : kAspects) {
    auto it = report.recommended.find(aspect);
    if (it != report.recommended.end() &&
        std::find(shared_features.begin(), shared_features.end(), it->second) == shared_features.end())
      shared_features.push_back(it->second);
  }

  doc["fusion"] = nlohmann::json::object();
  for (Aspect aspect : kAspects) {
    const std::string key(to_string(aspect));
    std::vector<std::string> names;
    if (options.single_feature) {
      auto it = report.recommended.find(aspect);
      if (it == report.recommended.end()) continue;
      names.push_back(it->second);
    } else {
      names = shared_features;
    }
    if (names.empty()) continue;

    const auto target = human.aspect_scores(aspect);
    FusionModel model;
    try {
      model = fit_fusion(metric_scores, target, names);
    } catch (const Error& e) {
      throw e.with_context("fusion for '" + key + "'");
    }
    // Score only the videos the model was fit on.
    std::map<std::string, double> fitted_target;
    for (const auto& [id, y] : target) {
      auto row = metric_scores.find(id);
      if (row == metric_scores.end()) continue;
      if (std::all_of(names.begin(), names.end(), [&](const auto& n) { return row->second.count(n) > 0; }))
        fitted_target[id] = y;
    }

    nlohmann::json entry;
    entry["features"] = model.feature_names;
    entry["coefficients"] = model.coefficients;
    entry["intercept"] = model.intercept;
    entry["srcc_reg"] = srcc_or_null([&] { return evaluate_fusion(model, metric_scores, fitted_target).srcc_reg; });
    entry["dropped"] = model.dropped;
    entry["n_rows"] = model.n_rows;
    entry["standardization"] = nlohmann::json::object();
    for (std::size_t j = 0; j < model.feature_names.size(); ++j)
      entry["standardization"][model.feature_names[j]] = {{"mean", model.means[j]}, {"std", model.stds[j]}};
    if (options.kfold) {
      try {
        entry["srcc_reg_kfold"] = srcc_or_null([&] {
          return cross_validate_fusion(metric_scores, target, names, *options.kfold, options.seed).srcc_reg;
        });
      } catch (const Error& e) {
        throw e.with_context("k-fold fusion for '" + key + "'");
      }
      entry["kfold"] = {{"folds", *options.kfold}, {"seed", options.seed}};
    }
    doc["fusion"][key] = std::move(entry);
  }
  return doc;
}

}  // namespace aigve::meta
