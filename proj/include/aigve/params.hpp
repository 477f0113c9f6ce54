#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aigve/config.hpp"

namespace aigve {

/// Typed access to a component's config map. finish() rejects keys that were
/// never read, so misspelled options fail at build time.
class ParamReader {
 public:
  explicit ParamReader(const config::ConfigNode& params);

  std::string get_string(const std::string& key, const std::string& fallback);
  std::string require_string(const std::string& key);
  std::optional<std::string> get_optional_string(const std::string& key);
  double get_double(const std::string& key, double fallback);
  std::size_t get_size(const std::string& key, std::size_t fallback);
  std::optional<std::size_t> get_optional_size(const std::string& key);
  bool get_bool(const std::string& key, bool fallback);
  std::optional<std::vector<std::size_t>> get_optional_size_list(const std::string& key);
  /// Marks `key` as consumed without reading it.
  void ignore(const std::string& key);

  void finish() const;

 private:
  const config::ConfigNode* lookup(const std::string& key);

  const config::ConfigNode& params_;
  std::set<std::string> seen_;
};

}  // namespace aigve
