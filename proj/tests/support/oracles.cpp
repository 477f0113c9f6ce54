#include "oracles.hpp"

#include <cmath>
#include <map>
#include <string>

namespace aigve::testing {

std::vector<double> brute_ranks(const std::vector<double>& x) {
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double less = 0.0, equal = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] < x[i]) less += 1.0;
      if (x[j] == x[i]) equal += 1.0;
    }
    ranks[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return ranks;
}

double brute_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = brute_ranks(x);
  const auto ry = brute_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

double brute_krippendorff(const std::vector<std::vector<double>>& units) {
  std::vector<double> pooled;
  double observed = 0.0;
  for (const auto& unit : units) {
    if (unit.size() < 2) continue;
    double pairs = 0.0;
    for (std::size_t i = 0; i < unit.size(); ++i)
      for (std::size_t j = 0; j < unit.size(); ++j)
        if (i != j) pairs += (unit[i] - unit[j]) * (unit[i] - unit[j]);
    observed += pairs / static_cast<double>(unit.size() - 1);
    pooled.insert(pooled.end(), unit.begin(), unit.end());
  }
  const double n = static_cast<double>(pooled.size());
  double expected = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i)
    for (std::size_t j = 0; j < pooled.size(); ++j)
      if (i != j) expected += (pooled[i] - pooled[j]) * (pooled[i] - pooled[j]);
  return 1.0 - (observed / n) / (expected / (n * (n - 1.0)));
}

double brute_inception_score(const std::vector<std::vector<double>>& rows) {
  const std::size_t k = rows.front().size();
  std::vector<double> marginal(k, 0.0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < k; ++c) marginal[c] += row[c] / static_cast<double>(rows.size());
  double kl_sum = 0.0;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < k; ++c)
      if (row[c] > 0.0) kl_sum += row[c] * std::log(row[c] / marginal[c]);
  return std::exp(kl_sum / static_cast<double>(rows.size()));
}

namespace {

using Path = std::vector<std::string>;

bool is_prefix(const Path& prefix, const Path& path) {
  if (prefix.size() > path.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (prefix[i] != path[i]) return false;
  return true;
}

bool marks_delete(const nlohmann::json& node) {
  auto it = node.find("_delete_");
  return it != node.end() && it->is_boolean() && it->get<bool>();
}

std::size_t visible_keys(const nlohmann::json& node) {
  std::size_t n = 0;
  for (const auto& [key, value] : node.items())
    if (key != "_delete_") ++n;
  return n;
}

void collect_leaves(const nlohmann::json& node, Path& path, std::map<Path, nlohmann::json>& out) {
  if (node.is_object() && visible_keys(node) > 0) {
    for (const auto& [key, value] : node.items()) {
      if (key == "_delete_") continue;
      path.push_back(key);
      collect_leaves(value, path, out);
      path.pop_back();
    }
  } else {
    out[path] = node.is_object() ? nlohmann::json::object() : node;
  }
}

void apply_override(const nlohmann::json& node, Path& path, std::map<Path, nlohmann::json>& result) {
  if (node.is_object()) {
    if (marks_delete(node) && !path.empty())
      for (auto it = result.begin(); it != result.end();)
        it = is_prefix(path, it->first) ? result.erase(it) : std::next(it);

    if (visible_keys(node) == 0) {
      for (auto it = result.begin(); it != result.end();)
        it = (is_prefix(it->first, path) && it->first.size() < path.size()) ? result.erase(it) : std::next(it);
      bool has_children = false;
      for (const auto& [p, v] : result)
        if (is_prefix(path, p) && p.size() > path.size()) has_children = true;
      if (!has_children) result[path] = nlohmann::json::object();
      return;
    }
    for (const auto& [key, value] : node.items()) {
      if (key == "_delete_") continue;
      path.push_back(key);
      apply_override(value, path, result);
      path.pop_back();
    }
    return;
  }
  for (auto it = result.begin(); it != result.end();)
    it = (is_prefix(path, it->first) || is_prefix(it->first, path)) ? result.erase(it) : std::next(it);
  result[path] = node;
}

}  // namespace

nlohmann::json flatten_merge(const nlohmann::json& base, const nlohmann::json& override_node) {
  std::map<Path, nlohmann::json> result;
  Path path;
  collect_leaves(base, path, result);
  if (result.size() == 1 && result.begin()->first.empty()) result.clear();
  apply_override(override_node, path, result);

  nlohmann::json out = nlohmann::json::object();
  for (const auto& [p, value] : result) {
    if (p.empty()) continue;
    std::string pointer;
    for (const auto& key : p) pointer += "/" + key;
    out[nlohmann::json::json_pointer(pointer)] = value;
  }
  return out;
}

namespace {

nlohmann::ordered_json random_scalar(std::mt19937_64& rng) {
  switch (rng() % 5) {
    case 0:
      return static_cast<int>(rng() % 10);
    case 1:
      return std::string(1, static_cast<char>('p' + rng() % 4));
    case 2:
      return rng() % 2 == 0;
    case 3:
      return nullptr;
    default: {
      auto list = nlohmann::ordered_json::array();
      for (std::size_t i = rng() % 3; i > 0; --i) list.push_back(static_cast<int>(rng() % 10));
      return list;
    }
  }
}

nlohmann::ordered_json tree(std::mt19937_64& rng, int depth, double delete_probability, bool root) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto node = nlohmann::ordered_json::object();
  if (!root && unit(rng) < delete_probability) node["_delete_"] = true;
  const std::size_t keys = rng() % 4;
  for (std::size_t i = 0; i < keys; ++i) {
    const std::string key(1, static_cast<char>('a' + rng() % 4));
    if (depth > 1 && rng() % 2 == 0)
      node[key] = tree(rng, depth - 1, delete_probability, false);
    else
      node[key] = random_scalar(rng);
  }
  return node;
}

nlohmann::ordered_json schema_tree(std::mt19937_64& rng, int depth) {
  auto node = nlohmann::ordered_json::object();
  const std::size_t keys = rng() % 4;
  for (std::size_t i = 0; i < keys; ++i) {
    const char key = static_cast<char>('a' + rng() % 4);
    if (key <= 'b' && depth > 1)
      node[std::string(1, key)] = schema_tree(rng, depth - 1);
    else if (key <= 'b')
      node[std::string(1, key)] = nlohmann::ordered_json::object();
    else
      node[std::string(1, key)] = random_scalar(rng);
  }
  return node;
}

}  // namespace

nlohmann::ordered_json random_schema_tree(std::mt19937_64& rng, int max_depth) { return schema_tree(rng, max_depth); }

nlohmann::ordered_json random_tree(std::mt19937_64& rng, int max_depth) { return tree(rng, max_depth, 0.0, true); }

nlohmann::ordered_json random_tree_with_delete(std::mt19937_64& rng, int max_depth, double delete_probability) {
  return tree(rng, max_depth, delete_probability, true);
}

}  // namespace aigve::testing
