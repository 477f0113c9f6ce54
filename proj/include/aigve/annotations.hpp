#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace aigve {

/// One benchmark entry: a prompt, where its frames and/or precomputed features
/// live, and its taxonomy labels. Paths are absolute (resolved against the
/// annotation file's directory on load).
struct SampleRecord {
  std::string id;
  std::string prompt_gt;
  std::optional<std::filesystem::path> video_source;
  std::map<std::string, std::filesystem::path> features;
  std::optional<std::string> model;
  std::optional<std::string> category;
  std::vector<std::string> subjects;
  std::vector<std::string> dynamics;
  /// Any other keys of the record object, e.g. a "role" tag.
  nlohmann::ordered_json attributes = nlohmann::ordered_json::object();

  /// String attribute `key`, if present.
  std::optional<std::string> attribute(const std::string& key) const;
};

struct AnnotationSet {
  std::string name;
  std::vector<SampleRecord> records;
  /// Vocabulary violations tolerated in non-strict mode.
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return records.size(); }
  /// Position of `id`, or nullopt.
  std::optional<std::size_t> index_of(std::string_view id) const;
};

struct AnnotationOptions {
  /// Unknown category/subject/dynamic labels become SchemaError instead of warnings.
  bool strict_vocabulary = false;
};

AnnotationSet load_annotations(const std::filesystem::path& path, const AnnotationOptions& options = {});
AnnotationSet parse_annotations(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                                const AnnotationOptions& options = {});

std::span<const std::string_view> category_vocabulary() noexcept;
std::span<const std::string_view> subject_vocabulary() noexcept;
std::span<const std::string_view> dynamics_vocabulary() noexcept;

}  // namespace aigve
