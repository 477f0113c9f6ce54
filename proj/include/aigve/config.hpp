#pragma once

// Hierarchical JSON configuration: parsing, `_base_` inheritance, deep merge,
// `${ENV:NAME[:default]}` interpolation and dotted-path overrides.

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace aigve::config {

/// Ordered tree of maps, lists and scalars. Map key order follows the source
/// document.
using ConfigNode = nlohmann::ordered_json;

inline constexpr std::string_view kBaseKey = "_base_";
inline constexpr std::string_view kDeleteKey = "_delete_";

struct ConfigSource {
  std::filesystem::path path;
  std::string text;
};

/// Returns the document text for a path, or nullopt if it does not exist.
using TextLoader = std::function<std::optional<std::string>(const std::filesystem::path&)>;
/// Returns the value of an environment variable, or nullopt if unset.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

TextLoader file_loader();
EnvLookup process_env();

/// Parses a JSON document whose top level must be a map. Duplicate keys within
/// one map are rejected.
ConfigNode parse_config(std::string_view text);

/// Maps merge key-by-key; lists and scalars in `override_node` replace the base
/// value. A map carrying `"_delete_": true` replaces the base subtree instead of
/// merging into it. `_delete_` keys never appear in the result.
ConfigNode deep_merge(const ConfigNode& base, const ConfigNode& override_node);

/// Resolves `_base_` chains depth-first (left to right), merges the child on
/// top, interpolates environment placeholders in string scalars and strips the
/// reserved keys. `source.text` is used for the root document; bases are read
/// through `loader` relative to the including file.
ConfigNode resolve_config(const ConfigSource& source, const TextLoader& loader = file_loader(),
                          const EnvLookup& env = process_env());

/// Reads `path` through `loader` and resolves it.
ConfigNode load_config(const std::filesystem::path& path, const TextLoader& loader = file_loader(),
                       const EnvLookup& env = process_env());

/// Substitutes `${ENV:NAME}` / `${ENV:NAME:default}` in every string scalar.
ConfigNode interpolate_env(const ConfigNode& node, const EnvLookup& env);

/// Applies `dotted.path=value` assignments in order. Values are parsed as JSON
/// when possible and kept as strings otherwise. Missing intermediate maps are
/// created; list segments must be in-range decimal indices.
ConfigNode apply_overrides(ConfigNode node, std::span<const std::string> assignments);

/// Serialization with map keys sorted, used for inspect output, provenance
/// files and digests.
std::string to_sorted_string(const ConfigNode& node, int indent = 2);

/// Hex SHA-256 of the compact sorted serialization.
std::string digest(const ConfigNode& node);

}  // namespace aigve::config
