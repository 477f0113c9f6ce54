#include "aigve/registry.hpp"

#include <array>
#include <numeric>

namespace aigve {

namespace {

constexpr std::array<std::pair<MetricCategory, std::string_view>, 5> kCategoryNames{{
    {MetricCategory::DistributionComparison, "distribution_comparison"},
    {MetricCategory::VideoOnlyNN, "video_only_nn"},
    {MetricCategory::VLSimilarity, "vl_similarity"},
    {MetricCategory::VLUnderstanding, "vl_understanding"},
    {MetricCategory::MultiFaceted, "multi_faceted"},
}};

}  // namespace

std::string_view to_string(ComponentKind kind) noexcept {
  switch (kind) {
    case ComponentKind::Dataset: return "dataset";
    case ComponentKind::Metric: return "metric";
    case ComponentKind::Loop: return "loop";
  }
  return "unknown";
}

std::string_view to_string(MetricCategory category) noexcept {
  for (const auto& [value, name] : kCategoryNames)
    if (value == category) return name;
  return "unknown";
}

std::optional<MetricCategory> parse_category(std::string_view text) noexcept {
  for (const auto& [value, name] : kCategoryNames)
    if (name == text) return value;
  return std::nullopt;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      const std::size_t substitution = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitution});
      diagonal = above;
    }
  }
  return row[b.size()];
}

}  // namespace aigve
