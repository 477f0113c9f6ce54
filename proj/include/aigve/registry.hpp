#pragma once

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aigve/config.hpp"
#include "aigve/error.hpp"

namespace aigve {

enum class ComponentKind { Dataset, Metric, Loop };

/// Five-way metric taxonomy. Used for reporting only.
enum class MetricCategory {
  DistributionComparison,
  VideoOnlyNN,
  VLSimilarity,
  VLUnderstanding,
  MultiFaceted,
};

std::string_view to_string(ComponentKind kind) noexcept;
std::string_view to_string(MetricCategory category) noexcept;
std::optional<MetricCategory> parse_category(std::string_view text) noexcept;

/// Ambient information available to factories, e.g. the directory relative
/// paths in the configuration are resolved against.
struct BuildContext {
  std::filesystem::path base_dir;
};

struct RegistryEntry {
  std::string name;
  std::optional<MetricCategory> category;
};

/// Edit distance, used to suggest the closest registered name.
std::size_t levenshtein(std::string_view a, std::string_view b);

template <typename Component>
class Registry {
 public:
  using Factory =
      std::function<std::unique_ptr<Component>(const config::ConfigNode& params, const BuildContext& ctx)>;

  explicit Registry(ComponentKind kind) : kind_(kind) {}

  ComponentKind kind() const noexcept { return kind_; }

  void register_component(const std::string& name, std::optional<MetricCategory> category, Factory factory) {
    if (frozen_)
      throw Error(Errc::RegistryFrozen, std::string(to_string(kind_)) + " registry is frozen");
    if (kind_ == ComponentKind::Metric && !category)
      throw Error(Errc::InvalidArgument, "metric '" + name + "' needs a taxonomy category");
    if (entries_.contains(name))
      throw Error(Errc::DuplicateName,
                  std::string(to_string(kind_)) + " '" + name + "' is already registered");
    entries_.emplace(name, Entry{category, std::move(factory)});
  }

  void freeze() noexcept { frozen_ = true; }
  bool frozen() const noexcept { return frozen_; }

  /// Builds from `{"type": name, ...}`; the factory sees the map minus `type`.
  std::unique_ptr<Component> build(const config::ConfigNode& spec, const BuildContext& ctx = {}) const {
    if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string())
      throw Error(Errc::SchemaError,
                  std::string(to_string(kind_)) + " spec must be a map with a string 'type'");
    const auto type = spec["type"].template get<std::string>();
    auto it = entries_.find(type);
    if (it == entries_.end()) {
      std::string message = "unknown " + std::string(to_string(kind_)) + " type '" + type + "'";
      if (auto nearest = nearest_name(type)) message += "; did you mean '" + *nearest + "'?";
      throw Error(Errc::UnknownType, message);
    }
    config::ConfigNode params = spec;
    params.erase("type");
    try {
      return it->second.factory(params, ctx);
    } catch (const std::exception& e) {
      throw Error(Errc::FactoryError, "building " + std::string(to_string(kind_)) + " '" + type + "': " + e.what());
    }
  }

  std::optional<MetricCategory> category(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) return std::nullopt;
    return it->second.category;
  }

  bool contains(const std::string& name) const { return entries_.contains(name); }

  /// Registered names in lexicographic order.
  std::vector<RegistryEntry> list() const {
    std::vector<RegistryEntry> out;
    out.reserve(entries_.size());
    for (const auto& [name, entry] : entries_) out.push_back({name, entry.category});
    return out;
  }

 private:
  struct Entry {
    std::optional<MetricCategory> category;
    Factory factory;
  };

  std::optional<std::string> nearest_name(std::string_view query) const {
    std::optional<std::string> best;
    std::size_t best_distance = 0;
    for (const auto& [name, entry] : entries_) {
      const auto d = levenshtein(query, name);
      if (!best || d < best_distance) {
        best = name;
        best_distance = d;
      }
    }
    return best;
  }

  ComponentKind kind_;
  bool frozen_ = false;
  std::map<std::string, Entry> entries_;
};

}  // namespace aigve
