#include "aigve/params.hpp"

#include "aigve/error.hpp"

namespace aigve {

namespace {

[[noreturn]] void wrong_type(const std::string& key, const char* expected) {
  throw Error(Errc::TypeConflict, "option '" + key + "' must be " + expected);
}

}  // namespace

ParamReader::ParamReader(const config::ConfigNode& params) : params_(params) {
  if (!params_.is_object()) throw Error(Errc::TypeConflict, "component options must be a map");
}

const config::ConfigNode* ParamReader::lookup(const std::string& key) {
  seen_.insert(key);
  auto it = params_.find(key);
  if (it == params_.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string ParamReader::get_string(const std::string& key, const std::string& fallback) {
  return get_optional_string(key).value_or(fallback);
}

std::string ParamReader::require_string(const std::string& key) {
  auto value = get_optional_string(key);
  if (!value) throw Error(Errc::SchemaError, "option '" + key + "' is required");
  return *value;
}

std::optional<std::string> ParamReader::get_optional_string(const std::string& key) {
  const auto* node = lookup(key);
  if (!node) return std::nullopt;
  if (!node->is_string()) wrong_type(key, "a string");
  return node->get<std::string>();
}

double ParamReader::get_double(const std::string& key, double fallback) {
  const auto* node = lookup(key);
  if (!node) return fallback;
  if (!node->is_number()) wrong_type(key, "a number");
  return node->get<double>();
}

std::size_t ParamReader::get_size(const std::string& key, std::size_t fallback) {
  return get_optional_size(key).value_or(fallback);
}

std::optional<std::size_t> ParamReader::get_optional_size(const std::string& key) {
  const auto* node = lookup(key);
  if (!node) return std::nullopt;
  if (!node->is_number_unsigned()) wrong_type(key, "a non-negative integer");
  return node->get<std::size_t>();
}

bool ParamReader::get_bool(const std::string& key, bool fallback) {
  const auto* node = lookup(key);
  if (!node) return fallback;
  if (!node->is_boolean()) wrong_type(key, "a boolean");
  return node->get<bool>();
}

std::optional<std::vector<std::size_t>> ParamReader::get_optional_size_list(const std::string& key) {
  const auto* node = lookup(key);
  if (!node) return std::nullopt;
  if (!node->is_array()) wrong_type(key, "a list of non-negative integers");
  std::vector<std::size_t> out;
  for (const auto& item : *node) {
    if (!item.is_number_unsigned()) wrong_type(key, "a list of non-negative integers");
    out.push_back(item.get<std::size_t>());
  }
  return out;
}

void ParamReader::ignore(const std::string& key) { seen_.insert(key); }

void ParamReader::finish() const {
  std::string unknown;
  for (const auto& [key, value] : params_.items()) {
    if (seen_.contains(key)) continue;
    unknown += (unknown.empty() ? "'" : ", '") + key + "'";
  }
  if (!unknown.empty()) throw Error(Errc::SchemaError, "unknown option(s) " + unknown);
}

}  // namespace aigve
