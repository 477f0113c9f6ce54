#include "aigve/annotations.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include "aigve/error.hpp"

namespace aigve {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 2> kCategories{"global_view", "close_shot"};

constexpr std::array<std::string_view, 13> kSubjects{
    // global view
    "Mountains", "Oceans", "Plains", "Rivers", "Lakes", "Deserts", "Cities", "Architecture", "Streets",
    // close shot
    "Humans", "Animals", "Plants", "Objects"};

constexpr std::array<std::string_view, 6> kDynamics{
    "Camera Movements",      "Daylight Transitions",  "Weather Changes",
    "Seasonal Shifts",       "Single-Object Actions", "Multiple-Object Interactions"};

const std::set<std::string_view> kKnownFields{"id",    "prompt_gt", "video_source", "features",
                                              "model", "category",  "subjects",     "dynamics"};

[[noreturn]] void schema_error(const std::string& where, const std::string& reason) {
  throw Error(Errc::SchemaError, where + ": " + reason);
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const auto& value = obj.at(key);
  if (!value.is_string()) schema_error(where + "." + key, "must be a string");
  return value.get<std::string>();
}

std::vector<std::string> label_list(const json& obj, const char* key, const std::string& where) {
  std::vector<std::string> labels;
  if (!obj.contains(key)) return labels;
  const auto& value = obj.at(key);
  if (!value.is_array()) schema_error(where + "." + key, "must be a list of strings");
  for (const auto& item : value) {
    if (!item.is_string()) schema_error(where + "." + key, "must be a list of strings");
    labels.push_back(item.get<std::string>());
  }
  return labels;
}

template <std::size_t N>
bool in_vocabulary(const std::array<std::string_view, N>& vocab, const std::string& label) {
  return std::find(vocab.begin(), vocab.end(), label) != vocab.end();
}

}  // namespace

std::span<const std::string_view> category_vocabulary() noexcept { return kCategories; }
std::span<const std::string_view> subject_vocabulary() noexcept { return kSubjects; }
std::span<const std::string_view> dynamics_vocabulary() noexcept { return kDynamics; }

std::optional<std::string> SampleRecord::attribute(const std::string& key) const {
  auto it = attributes.find(key);
  if (it == attributes.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

std::optional<std::size_t> AnnotationSet::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].id == id) return i;
  return std::nullopt;
}

AnnotationSet parse_annotations(const json& doc, const fs::path& base_dir, const AnnotationOptions& options) {
  if (!doc.is_object()) schema_error("annotations", "top level must be a map");
  if (!doc.contains("data_list") || !doc["data_list"].is_array()) schema_error("data_list", "missing or not a list");

  AnnotationSet set;
  std::optional<std::size_t> declared_length;
  if (doc.contains("metainfo")) {
    const auto& meta = doc["metainfo"];
    if (!meta.is_object()) schema_error("metainfo", "must be a map");
    if (meta.contains("name")) set.name = string_field(meta, "name", "metainfo");
    if (meta.contains("length")) {
      if (!meta["length"].is_number_integer() || meta["length"].get<long long>() < 0) schema_error("metainfo.length", "must be a non-negative integer");
      declared_length = meta["length"].get<std::size_t>();
    }
  }

  auto check_label = [&](std::string_view vocab_name, bool known, const std::string& where, const std::string& label) {
    if (known) return;
    std::string message = where + ": '" + label + "' is not a known " + std::string(vocab_name);
    if (options.strict_vocabulary) throw Error(Errc::SchemaError, message);
    set.warnings.push_back(std::move(message));
  };

  std::set<std::string> seen;
  const auto& list = doc["data_list"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& item = list[i];
    std::string where = "data_list[" + std::to_string(i) + "]";
    if (!item.is_object()) schema_error(where, "record must be a map");
    if (!item.contains("id")) schema_error(where + ".id", "required");
    if (!item.contains("prompt_gt")) schema_error(where + ".prompt_gt", "required");

    SampleRecord record;
    record.id = string_field(item, "id", where);
    if (record.id.empty()) schema_error(where + ".id", "must be non-empty");
    record.prompt_gt = string_field(item, "prompt_gt", where);
    if (!seen.insert(record.id).second) throw Error(Errc::DuplicateId, "record id '" + record.id + "' appears twice");
    where += " ('" + record.id + "')";

    if (item.contains("video_source"))
      record.video_source = (base_dir / string_field(item, "video_source", where)).lexically_normal();
    if (item.contains("features")) {
      const auto& features = item["features"];
      if (!features.is_object()) schema_error(where + ".features", "must be a map of name to path");
      for (const auto& [name, path] : features.items()) {
        if (!path.is_string()) schema_error(where + ".features." + name, "must be a path string");
        record.features.emplace(name, (base_dir / path.get<std::string>()).lexically_normal());
      }
    }
    if (!record.video_source && record.features.empty())
      schema_error(where, "needs video_source or features");

    if (item.contains("model")) record.model = string_field(item, "model", where);
    if (item.contains("category")) {
      record.category = string_field(item, "category", where);
      check_label("category", in_vocabulary(kCategories, *record.category), where, *record.category);
    }
    record.subjects = label_list(item, "subjects", where);
    for (const auto& s : record.subjects) check_label("subject", in_vocabulary(kSubjects, s), where, s);
    record.dynamics = label_list(item, "dynamics", where);
    for (const auto& d : record.dynamics) check_label("dynamic", in_vocabulary(kDynamics, d), where, d);

    for (const auto& [key, value] : item.items())
      if (!kKnownFields.contains(key)) record.attributes[key] = value;

    set.records.push_back(std::move(record));
  }

  if (declared_length && *declared_length != set.records.size())
    schema_error("metainfo.length", "declares " + std::to_string(*declared_length) + " records but data_list has " +
                                        std::to_string(set.records.size()));
  return set;
}

AnnotationSet load_annotations(const fs::path& path, const AnnotationOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open annotation file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::SchemaError, path.string() + ": " + e.what());
  }
  const fs::path base_dir = fs::absolute(path).parent_path();
  try {
    auto set = parse_annotations(doc, base_dir, options);
    if (set.name.empty()) set.name = path.stem().string();
    return set;
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

}  // namespace aigve
