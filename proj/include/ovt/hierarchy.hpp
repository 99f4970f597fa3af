#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ovt/geom.hpp"
#include "ovt/segmentation.hpp"

namespace ovt {

class HierarchyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HierarchyNode {
  std::string name;
  double value = 0.0;
  std::vector<HierarchyNode> children;
  std::optional<RectilinearPolygon> cell;
  std::optional<Site> site;

  bool is_leaf() const { return children.empty(); }
};

/// Recomputes every internal value as the sum of its children. Input values on
/// internal nodes are discarded.
inline double aggregate_in_place(HierarchyNode& node) {
  if (node.is_leaf()) return node.value;
  double sum = 0.0;
  for (HierarchyNode& c : node.children) sum += aggregate_in_place(c);
  node.value = sum;
  return sum;
}

inline HierarchyNode aggregate_values(HierarchyNode root) {
  aggregate_in_place(root);
  return root;
}

inline std::size_t leaf_count(const HierarchyNode& node) {
  if (node.is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : node.children) n += leaf_count(c);
  return n;
}

inline std::size_t depth(const HierarchyNode& node) {
  std::size_t d = 0;
  for (const auto& c : node.children) d = std::max(d, depth(c));
  return d + 1;
}

namespace detail {

inline HierarchyNode parse_node(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw HierarchyError(path + ": node must be a JSON object");
  HierarchyNode node;
  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) throw HierarchyError(path + ": \"name\" must be a string");
    node.name = it->get<std::string>();
  }
  const std::string here = path.empty() ? node.name : path + "/" + node.name;
  if (auto it = j.find("children"); it != j.end()) {
    if (!it->is_array()) throw HierarchyError(here + ": \"children\" must be an array");
    if (it->empty()) throw HierarchyError(here + ": internal node has an empty children list");
    node.children.reserve(it->size());
    for (const auto& c : *it) node.children.push_back(parse_node(c, here));
    return node;
  }
  auto it = j.find("value");
  if (it == j.end()) throw HierarchyError(here + ": leaf has no \"value\"");
  if (!it->is_number()) throw HierarchyError(here + ": \"value\" must be a number");
  node.value = it->get<double>();
  if (!std::isfinite(node.value) || node.value <= 0.0)
    throw HierarchyError(here + ": leaf value must be positive");
  return node;
}

}  // namespace detail

/// Parses a flare-style hierarchy ({"name", "value"?, "children"?}) and
/// aggregates internal values.
inline HierarchyNode parse_hierarchy(std::string_view document) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw HierarchyError(std::string("malformed hierarchy document: ") + e.what());
  }
  return aggregate_values(detail::parse_node(j, ""));
}

inline HierarchyNode load_hierarchy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_hierarchy(ss.str());
}

}  // namespace ovt
