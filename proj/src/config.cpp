#include "aigve/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "aigve/error.hpp"

namespace aigve::config {

namespace fs = std::filesystem;

TextLoader file_loader() {
  return [](const fs::path& path) -> std::optional<std::string> {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* value = std::getenv(name.c_str())) return std::string(value);
    return std::nullopt;
  };
}

ConfigNode parse_config(std::string_view text) {
  // One key set per open object; nlohmann would otherwise keep the last value.
  std::vector<std::set<std::string>> open_keys;
  auto reject_duplicates = [&](int /*depth*/, nlohmann::json::parse_event_t event,
                               ConfigNode& parsed) {
    using Event = nlohmann::json::parse_event_t;
    if (event == Event::object_start) {
      open_keys.emplace_back();
    } else if (event == Event::object_end) {
      open_keys.pop_back();
    } else if (event == Event::key) {
      auto key = parsed.get<std::string>();
      if (!open_keys.back().insert(key).second)
        throw SyntaxError("duplicate key '" + key + "'", std::nullopt);
    }
    return true;
  };

  ConfigNode node;
  try {
    node = ConfigNode::parse(text.begin(), text.end(), reject_duplicates);
  } catch (const nlohmann::json::parse_error& e) {
    std::optional<std::size_t> offset;
    if (e.byte > 0) offset = e.byte - 1;
    std::string message = e.what();
    if (auto pos = message.find("] "); pos != std::string::npos) message.erase(0, pos + 2);
    throw SyntaxError(message, offset);
  }
  if (!node.is_object()) throw Error(Errc::TopLevelNotMap, "configuration top level must be a map");
  return node;
}

namespace {

bool delete_requested(const ConfigNode& node) {
  if (!node.is_object()) return false;
  auto it = node.find(kDeleteKey);
  return it != node.end() && it->is_boolean() && it->get<bool>();
}

ConfigNode strip_keys(const ConfigNode& node, bool strip_base) {
  if (node.is_object()) {
    ConfigNode out = ConfigNode::object();
    for (const auto& [key, value] : node.items()) {
      if (key == kDeleteKey || (strip_base && key == kBaseKey)) continue;
      out[key] = strip_keys(value, strip_base);
    }
    return out;
  }
  if (node.is_array()) {
    ConfigNode out = ConfigNode::array();
    for (const auto& value : node) out.push_back(strip_keys(value, strip_base));
    return out;
  }
  return node;
}

}  // namespace

ConfigNode deep_merge(const ConfigNode& base, const ConfigNode& override_node) {
  if (!override_node.is_object()) return strip_keys(override_node, false);
  if (!base.is_object() || delete_requested(override_node))
    return strip_keys(override_node, false);

  ConfigNode result = base;
  for (const auto& [key, value] : override_node.items()) {
    if (key == kDeleteKey) continue;
    auto it = result.find(key);
    if (it != result.end())
      *it = deep_merge(*it, value);
    else
      result[key] = strip_keys(value, false);
  }
  return result;
}

namespace {

std::vector<std::string> base_list(const ConfigNode& node, const fs::path& path) {
  std::vector<std::string> bases;
  auto it = node.find(kBaseKey);
  if (it == node.end()) return bases;
  if (it->is_string()) {
    bases.push_back(it->get<std::string>());
  } else if (it->is_array()) {
    for (const auto& entry : *it) {
      if (!entry.is_string())
        throw Error(Errc::TypeConflict, path.string() + ": _base_ entries must be strings");
      bases.push_back(entry.get<std::string>());
    }
  } else {
    throw Error(Errc::TypeConflict, path.string() + ": _base_ must be a string or list of strings");
  }
  return bases;
}

std::string chain_string(const std::vector<fs::path>& chain, const fs::path& repeated) {
  std::string out;
  for (const auto& p : chain) out += p.string() + " -> ";
  return out + repeated.string();
}

ConfigNode resolve_recursive(const fs::path& path, const std::string* text, const TextLoader& loader,
                             std::vector<fs::path>& chain) {
  const fs::path canonical = fs::weakly_canonical(path);
  for (const auto& open : chain) {
    if (open == canonical)
      throw Error(Errc::CycleDetected, chain_string(chain, canonical));
  }

  std::string loaded;
  if (text == nullptr) {
    auto maybe = loader(canonical);
    if (!maybe) throw Error(Errc::BaseNotFound, "cannot read " + canonical.string());
    loaded = std::move(*maybe);
    text = &loaded;
  }

  ConfigNode node;
  try {
    node = parse_config(*text);
  } catch (const Error& e) {
    if (e.code() == Errc::SyntaxError) {
      const auto& syntax = static_cast<const SyntaxError&>(e);
      throw SyntaxError(canonical.string() + ": " + e.detail(), syntax.offset());
    }
    throw e.with_context(canonical.string());
  }

  chain.push_back(canonical);
  ConfigNode merged = ConfigNode::object();
  for (const auto& base : base_list(node, canonical)) {
    merged = deep_merge(merged, resolve_recursive(canonical.parent_path() / base, nullptr, loader, chain));
  }
  chain.pop_back();

  node.erase(std::string(kBaseKey));
  return deep_merge(merged, node);
}

std::string interpolate_string(const std::string& text, const EnvLookup& env) {
  static constexpr std::string_view kOpen = "${ENV:";
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto start = text.find(kOpen, pos);
    if (start == std::string::npos) break;
    auto close = text.find('}', start);
    if (close == std::string::npos) break;
    out.append(text, pos, start - pos);

    std::string body = text.substr(start + kOpen.size(), close - start - kOpen.size());
    std::optional<std::string> fallback;
    if (auto colon = body.find(':'); colon != std::string::npos) {
      fallback = body.substr(colon + 1);
      body.resize(colon);
    }
    if (auto value = env(body))
      out += *value;
    else if (fallback)
      out += *fallback;
    else
      throw Error(Errc::MissingEnvVar, "environment variable '" + body + "' is not set and has no default");
    pos = close + 1;
  }
  out.append(text, pos, std::string::npos);
  return out;
}

}  // namespace

ConfigNode interpolate_env(const ConfigNode& node, const EnvLookup& env) {
  if (node.is_string()) return interpolate_string(node.get<std::string>(), env);
  if (node.is_object()) {
    ConfigNode out = ConfigNode::object();
    for (const auto& [key, value] : node.items()) out[key] = interpolate_env(value, env);
    return out;
  }
  if (node.is_array()) {
    ConfigNode out = ConfigNode::array();
    for (const auto& value : node) out.push_back(interpolate_env(value, env));
    return out;
  }
  return node;
}

ConfigNode resolve_config(const ConfigSource& source, const TextLoader& loader, const EnvLookup& env) {
  std::vector<fs::path> chain;
  ConfigNode merged = resolve_recursive(source.path, &source.text, loader, chain);
  return strip_keys(interpolate_env(merged, env), true);
}

ConfigNode load_config(const fs::path& path, const TextLoader& loader, const EnvLookup& env) {
  auto text = loader(fs::weakly_canonical(path));
  if (!text) throw Error(Errc::BaseNotFound, "cannot read " + path.string());
  return resolve_config(ConfigSource{path, std::move(*text)}, loader, env);
}

namespace {

std::vector<std::string> split_path(const std::string& dotted) {
  std::vector<std::string> segments;
  std::size_t start = 0;
  while (true) {
    auto dot = dotted.find('.', start);
    segments.push_back(dotted.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return segments;
}

std::optional<std::size_t> parse_index(const std::string& segment) {
  if (segment.empty() || segment.size() > 18) return std::nullopt;
  std::size_t value = 0;
  for (char c : segment) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  return value;
}

ConfigNode parse_override_value(const std::string& text) {
  try {
    return ConfigNode::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return text;
  }
}

void assign(ConfigNode& root, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(Errc::InvalidArgument, "override '" + assignment + "' is not of the form key.path=value");
  const std::string dotted = assignment.substr(0, eq);
  const auto segments = split_path(dotted);
  ConfigNode value = parse_override_value(assignment.substr(eq + 1));

  ConfigNode* cursor = &root;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& segment = segments[i];
    const bool last = i + 1 == segments.size();
    if (segment.empty()) throw Error(Errc::InvalidArgument, "empty path segment in '" + dotted + "'");

    if (cursor->is_object()) {
      if (last) {
        (*cursor)[segment] = std::move(value);
        return;
      }
      auto it = cursor->find(segment);
      if (it == cursor->end()) it = cursor->emplace(segment, ConfigNode::object()).first;
      cursor = &*it;
    } else if (cursor->is_array()) {
      auto index = parse_index(segment);
      if (!index)
        throw Error(Errc::TypeConflict, "'" + dotted + "': list addressed with non-index '" + segment + "'");
      if (*index >= cursor->size())
        throw Error(Errc::IndexOutOfRange, "'" + dotted + "': index " + segment + " out of range (size " +
                                               std::to_string(cursor->size()) + ")");
      if (last) {
        (*cursor)[*index] = std::move(value);
        return;
      }
      cursor = &(*cursor)[*index];
    } else {
      throw Error(Errc::TypeConflict, "'" + dotted + "': cannot traverse scalar at '" + segment + "'");
    }
  }
}

}  // namespace

ConfigNode apply_overrides(ConfigNode node, std::span<const std::string> assignments) {
  for (const auto& assignment : assignments) assign(node, assignment);
  return node;
}

std::string to_sorted_string(const ConfigNode& node, int indent) {
  const nlohmann::json sorted = nlohmann::json::parse(node.dump());
  return sorted.dump(indent);
}

std::string digest(const ConfigNode& node) {
  const std::string canonical = to_sorted_string(node, -1);
  unsigned char hash[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(canonical.data(), canonical.size(), hash, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[hash[i] >> 4];
    hex += kHex[hash[i] & 0xF];
  }
  return hex;
}

}  // namespace aigve::config
