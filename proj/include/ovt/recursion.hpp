#pragma once

#include <cstdint>
#include <future>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "ovt/adaptation.hpp"
#include "ovt/geom.hpp"
#include "ovt/hierarchy.hpp"
#include "ovt/initialization.hpp"
#include "ovt/random.hpp"

namespace ovt {

class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TreeLayoutOptions {
  double rho = 0.3;
  double epsilon_scale = 1e-6;  // weight floor relative to the canvas diagonal
  int max_iterations = 500;
  double error_threshold = 0.01;
  FactorHistory history = FactorHistory::previous_site;
  InitMode init = InitMode::squarified;
  InitWeight init_weight = InitWeight::half_area;
  std::uint64_t seed = 0;
  bool jitter = false;
  bool parallel = false;
  bool keep_best = true;  // every layer returns its lowest-error state, not only clipped ones
  bool retry_unconverged = true;  // a layer left above the threshold gets one random restart

  AdaptParams adapt_params(const Rect& canvas) const {
    AdaptParams p;
    p.rho = rho;
    p.epsilon = epsilon_scale * canvas.diagonal();
    p.max_iterations = max_iterations;
    p.error_threshold = error_threshold;
    p.history = history;
    return p;
  }
};

/// Outcome of one internal node's single-layer layout.
struct LayerSummary {
  std::string path;
  std::size_t depth = 0;
  std::size_t children = 0;
  double area_error = 0.0;
  int iterations = 0;
  bool converged = false;
  bool retried = false;
};

struct TreeLayout {
  HierarchyNode root;
  std::vector<LayerSummary> layers;  // depth-first order
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct LayerAttempt {
  LayerResult result;
  bool ok = false;
};

inline LayerAttempt run_layer(const std::vector<double>& values, const RectilinearPolygon& cell,
                              const AdaptParams& params, InitOptions init, bool jitter,
                              bool keep_best) {
  LayerOptions lopt;
  lopt.sweep.jitter = jitter;
  lopt.sweep.jitter_seed = init.seed;
  lopt.keep_best = keep_best;
  if (!cell.is_rectangle()) {
    lopt.clip_region = cell;
    lopt.keep_best = true;
  }
  LayerAttempt a;
  a.result = layout_single_layer(initialize_sites(values, cell, init), cell.bbox(), params, lopt);
  a.ok = a.result.connected;
  for (const CellShape& s : a.result.cells) a.ok = a.ok && s.connected();
  return a;
}

inline void layout_subtree(HierarchyNode& node, const std::string& path,
                           const std::string& seed_path, std::size_t depth, const Rect& canvas,
                           const TreeLayoutOptions& opt, std::vector<LayerSummary>& layers,
                           std::mutex& mu) {
  if (node.is_leaf()) return;
  const RectilinearPolygon& cell = *node.cell;
  std::vector<double> values;
  values.reserve(node.children.size());
  for (const auto& c : node.children) values.push_back(c.value);

  const AdaptParams params = opt.adapt_params(canvas);
  InitOptions init;
  init.mode = opt.init;
  init.weight = opt.init_weight;
  init.epsilon = params.epsilon;
  init.seed = derive_seed(opt.seed, fnv1a(seed_path));

  LayerSummary summary;
  summary.path = path;
  summary.depth = depth;
  summary.children = node.children.size();
  LayerAttempt attempt = run_layer(values, cell, params, init, opt.jitter, opt.keep_best);
  if (!attempt.ok) {
    // A cell cut apart by a concave parent: retry once from a random start.
    init.mode = InitMode::random;
    init.seed = derive_seed(init.seed, 1);
    attempt = run_layer(values, cell, params, init, opt.jitter, opt.keep_best);
    summary.retried = true;
    if (!attempt.ok) throw LayoutError("layer at '" + path + "' left a child cell disconnected");
  } else if (opt.retry_unconverged && !attempt.result.converged) {
    init.mode = InitMode::random;
    init.seed = derive_seed(init.seed, 1);
    LayerAttempt second = run_layer(values, cell, params, init, opt.jitter, opt.keep_best);
    if (second.ok && second.result.area_error < attempt.result.area_error) {
      attempt = std::move(second);
      summary.retried = true;
    }
  }
  const LayerResult& res = attempt.result;
  summary.area_error = res.area_error;
  summary.iterations = res.diagram_calls - 1;
  summary.converged = res.converged;
  {
    std::lock_guard lock(mu);
    layers.push_back(summary);
  }

  for (std::size_t k = 0; k < node.children.size(); ++k) {
    HierarchyNode& child = node.children[k];
    child.cell = res.cells[k].pieces.front();
    child.site = res.sites[k];
  }

  auto recurse = [&](std::size_t k) {
    HierarchyNode& child = node.children[k];
    layout_subtree(child, path + "/" + child.name, seed_path + "/" + std::to_string(k),
                   depth + 1, canvas, opt, layers, mu);
  };
  if (opt.parallel) {
    std::vector<std::future<void>> tasks;
    for (std::size_t k = 0; k < node.children.size(); ++k) {
      if (!node.children[k].is_leaf()) tasks.push_back(std::async(std::launch::async, recurse, k));
    }
    for (auto& t : tasks) t.get();
  } else {
    for (std::size_t k = 0; k < node.children.size(); ++k) recurse(k);
  }
}

}  // namespace detail

/// Lays out the whole hierarchy depth first: each internal node's children are
/// arranged inside the node's cell. Non-rectangular cells are handled by
/// sweeping their bounding box and clipping every child cell back to the parent.
inline TreeLayout layout_tree(HierarchyNode root, const Rect& canvas,
                              const TreeLayoutOptions& opt = {}) {
  require_valid(canvas);
  aggregate_in_place(root);
  root.cell = RectilinearPolygon::from_rect(canvas);
  TreeLayout out;
  std::mutex mu;
  detail::layout_subtree(root, root.name, "0", 0, canvas, opt, out.layers, mu);
  if (opt.parallel) {
    std::sort(out.layers.begin(), out.layers.end(),
              [](const LayerSummary& a, const LayerSummary& b) { return a.path < b.path; });
  }
  out.root = std::move(root);
  return out;
}

}  // namespace ovt
