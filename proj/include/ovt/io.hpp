#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ovt/geom.hpp"
#include "ovt/hierarchy.hpp"
#include "ovt/recursion.hpp"
#include "ovt/segmentation.hpp"
#include "ovt/sweep.hpp"

namespace ovt {

struct LayoutNode {
  std::string path;
  int depth = 0;
  int parent = -1;  // index into LayoutDocument::nodes
  std::optional<Site> site;
  std::vector<Point> cell;
  double area = 0.0;
  double target_area = 0.0;
};

/// Flat, serializable view of a laid-out hierarchy; nodes in depth-first order.
struct LayoutDocument {
  double width = 0.0;
  double height = 0.0;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json layers = nlohmann::json::array();
  std::vector<LayoutNode> nodes;
};

namespace detail {

inline void flatten(const HierarchyNode& node, const std::string& path, int depth, int parent,
                    double scale, LayoutDocument& doc) {
  LayoutNode ln;
  ln.path = path;
  ln.depth = depth;
  ln.parent = parent;
  ln.site = node.site;
  if (node.cell) {
    const auto v = node.cell->vertices();
    ln.cell.assign(v.begin(), v.end());
    ln.area = ovt::area(*node.cell);
  }
  ln.target_area = node.value * scale;
  const int me = static_cast<int>(doc.nodes.size());
  doc.nodes.push_back(std::move(ln));
  for (const auto& c : node.children) flatten(c, path + "/" + c.name, depth + 1, me, scale, doc);
}

}  // namespace detail

inline LayoutDocument make_document(const TreeLayout& tl, const Rect& canvas,
                                    nlohmann::json params = nlohmann::json::object()) {
  LayoutDocument doc;
  doc.width = canvas.width;
  doc.height = canvas.height;
  doc.params = std::move(params);
  for (const auto& l : tl.layers) {
    doc.layers.push_back({{"path", l.path},
                          {"depth", l.depth},
                          {"area_error", l.area_error},
                          {"iterations", l.iterations},
                          {"converged", l.converged},
                          {"retried", l.retried}});
  }
  detail::flatten(tl.root, tl.root.name, 0, -1, canvas.area() / tl.root.value, doc);
  return doc;
}

/// A single diagram as a two-level document: the region, then one cell per site.
inline LayoutDocument make_document(const Diagram& d, const std::vector<Site>& sites,
                                    const Rect& region) {
  LayoutDocument doc;
  doc.width = region.width;
  doc.height = region.height;
  doc.params = {{"pairs_checked", d.counters.pairs_checked},
                {"valid_neighbors", d.counters.valid_neighbors}};
  auto ring = [](const RectilinearPolygon& p) {
    const auto v = p.vertices();
    return std::vector<Point>(v.begin(), v.end());
  };
  doc.nodes.push_back({"region", 0, -1, std::nullopt,
                       ring(RectilinearPolygon::from_rect(region)), region.area(), region.area()});
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const auto& c = d.cells[k];
    doc.nodes.push_back({"region/" + std::to_string(sites[k].id), 1, 0, sites[k], ring(c),
                         area(c), area(c)});
  }
  return doc;
}

inline nlohmann::json to_json(const LayoutDocument& doc) {
  nlohmann::json j;
  j["canvas"] = {{"w", doc.width}, {"h", doc.height}};
  j["params"] = doc.params;
  j["layers"] = doc.layers;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const auto& n : doc.nodes) {
    nlohmann::json jn;
    jn["path"] = n.path;
    jn["depth"] = n.depth;
    jn["parent"] = n.parent;
    if (n.site) {
      jn["site"] = {{"x", n.site->position.x}, {"y", n.site->position.y}, {"weight", n.site->weight}};
    } else {
      jn["site"] = nullptr;
    }
    auto& cell = jn["cell"] = nlohmann::json::array();
    for (const Point& p : n.cell) cell.push_back({p.x, p.y});
    jn["area"] = n.area;
    jn["target_area"] = n.target_area;
    nodes.push_back(std::move(jn));
  }
  return j;
}

inline LayoutDocument document_from_json(const nlohmann::json& j) {
  try {
    LayoutDocument doc;
    doc.width = j.at("canvas").at("w").get<double>();
    doc.height = j.at("canvas").at("h").get<double>();
    if (j.contains("params")) doc.params = j["params"];
    if (j.contains("layers")) doc.layers = j["layers"];
    for (const auto& jn : j.at("nodes")) {
      LayoutNode n;
      n.path = jn.at("path").get<std::string>();
      n.depth = jn.at("depth").get<int>();
      n.parent = jn.value("parent", -1);
      if (jn.contains("site") && !jn["site"].is_null()) {
        Site s;
        s.position = {jn["site"].at("x").get<double>(), jn["site"].at("y").get<double>()};
        s.weight = jn["site"].at("weight").get<double>();
        n.site = s;
      }
      for (const auto& p : jn.at("cell")) n.cell.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      n.area = jn.at("area").get<double>();
      n.target_area = jn.at("target_area").get<double>();
      doc.nodes.push_back(std::move(n));
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed layout document: ") + e.what());
  }
}

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

}  // namespace detail

/// SVG 1.1 with one path per cell. Siblings split their parent's hue range;
/// deeper cells are lighter.
inline std::string render_svg(const LayoutDocument& doc) {
  const std::size_t n = doc.nodes.size();
  std::vector<double> hue_lo(n, 0.0), hue_hi(n, 360.0);
  std::vector<std::vector<std::size_t>> kids(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int p = doc.nodes[k].parent;
    if (p >= 0 && static_cast<std::size_t>(p) < n) kids[p].push_back(k);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double span = (hue_hi[k] - hue_lo[k]) / static_cast<double>(std::max<std::size_t>(kids[k].size(), 1));
    for (std::size_t i = 0; i < kids[k].size(); ++i) {
      hue_lo[kids[k][i]] = hue_lo[k] + span * static_cast<double>(i);
      hue_hi[kids[k][i]] = hue_lo[k] + span * static_cast<double>(i + 1);
    }
  }

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << detail::num(doc.width)
     << "\" height=\"" << detail::num(doc.height) << "\" viewBox=\"0 0 " << detail::num(doc.width)
     << ' ' << detail::num(doc.height) << "\">\n";
  for (std::size_t k = 0; k < n; ++k) {
    const LayoutNode& node = doc.nodes[k];
    if (node.cell.empty()) continue;
    std::string fill;
    if (node.depth == 0) {
      fill = "hsl(0,0%,100%)";
    } else {
      const int hue = static_cast<int>(0.5 * (hue_lo[k] + hue_hi[k])) % 360;
      const int light = std::min(90, 35 + 12 * node.depth);
      fill = "hsl(" + std::to_string(hue) + ",60%," + std::to_string(light) + "%)";
    }
    os << "<path d=\"M";
    for (std::size_t v = 0; v < node.cell.size(); ++v) {
      os << (v == 0 ? "" : " L") << ' ' << detail::num(node.cell[v].x) << ' '
         << detail::num(node.cell[v].y);
    }
    os << " Z\" fill=\"" << fill << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline nlohmann::json hierarchy_to_json(const HierarchyNode& node) {
  nlohmann::json j;
  j["name"] = node.name;
  if (node.is_leaf()) {
    j["value"] = node.value;
  } else {
    auto& ch = j["children"] = nlohmann::json::array();
    for (const auto& c : node.children) ch.push_back(hierarchy_to_json(c));
  }
  return j;
}

/// Sites file: a JSON array of {x, y, weight?}. Ids follow array order.
inline std::vector<Site> parse_sites(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed sites file: ") + e.what());
  }
  if (!j.is_array() || j.empty()) throw std::invalid_argument("sites file must be a non-empty array");
  std::vector<Site> sites;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto& e = j[k];
    const std::string where = "site " + std::to_string(k);
    if (!e.is_object() || !e.contains("x") || !e.contains("y") || !e["x"].is_number() ||
        !e["y"].is_number()) {
      throw std::invalid_argument(where + ": needs numeric x and y");
    }
    Site s;
    s.id = static_cast<int>(k);
    s.position = {e["x"].get<double>(), e["y"].get<double>()};
    if (e.contains("weight")) {
      if (!e["weight"].is_number() || e["weight"].get<double>() < 0.0) {
        throw std::invalid_argument(where + ": weight must be a nonnegative number");
      }
      s.weight = e["weight"].get<double>();
    }
    sites.push_back(s);
  }
  return sites;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace ovt
