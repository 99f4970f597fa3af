#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ovt/adaptation.hpp"
#include "ovt/geom.hpp"
#include "ovt/hierarchy.hpp"
#include "ovt/initialization.hpp"
#include "ovt/random.hpp"
#include "ovt/recursion.hpp"
#include "ovt/segmentation.hpp"
#include "ovt/sweep.hpp"

namespace ovt {

class BenchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ValueMix {
  double fraction_high = 0.3;
  std::pair<double, double> high_range{0.0, 10.0};
  std::pair<double, double> low_range{0.0, 1.0};
};

struct BenchConfig {
  std::vector<int> site_counts;
  int repeats = 1;
  std::uint64_t seed = 0;
  ValueMix value_mix;
  Rect canvas{0.0, 0.0, 900.0, 900.0};

  void validate() const {
    if (!(value_mix.fraction_high >= 0.0 && value_mix.fraction_high <= 1.0)) {
      throw BenchError("fraction_high must lie in [0, 1]");
    }
    for (const auto& r : {value_mix.high_range, value_mix.low_range}) {
      if (!(r.first >= 0.0 && r.second > r.first)) throw BenchError("bad value range");
    }
    if (repeats < 1) throw BenchError("repeats must be at least 1");
    for (int n : site_counts) {
      if (n < 1) throw BenchError("site counts must be positive");
    }
    if (!canvas.valid()) throw BenchError("canvas must have positive extent");
  }
};

/// `n` sites uniform in the canvas with zero weight; target values follow the
/// mix, drawn from the half-open range (lo, hi] so every value is positive.
inline std::vector<Site> gen_random_layer(int n, const BenchConfig& cfg, std::uint64_t seed) {
  if (n < 1) throw BenchError("n must be at least 1");
  SplitMix64 rng(seed);
  const Rect& c = cfg.canvas;
  std::vector<Site> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Site& s = out[k];
    s.id = k;
    do {
      s.position = {rng.uniform(c.x0, c.x1()), rng.uniform(c.y0, c.y1())};
    } while (!c.strictly_contains(s.position));
    const bool high = rng.uniform() < cfg.value_mix.fraction_high;
    const auto& r = high ? cfg.value_mix.high_range : cfg.value_mix.low_range;
    s.target_value = r.second - rng.uniform() * (r.second - r.first);
    s.weight = 0.0;
  }
  return out;
}

inline std::vector<double> values_of(const std::vector<Site>& sites) {
  std::vector<double> v;
  v.reserve(sites.size());
  for (const Site& s : sites) v.push_back(s.target_value);
  return v;
}

inline std::uint64_t run_seed(std::uint64_t base, int n, int repeat) {
  return derive_seed(derive_seed(base, static_cast<std::uint64_t>(n)),
                     static_cast<std::uint64_t>(repeat));
}

struct NeighborRow {
  int n = 0;
  int repeat = 0;
  double pairs_per_site = 0.0;
  double valid_per_site = 0.0;
};

inline std::vector<NeighborRow> run_neighbor_scaling(const BenchConfig& cfg) {
  cfg.validate();
  std::vector<NeighborRow> rows;
  for (int n : cfg.site_counts) {
    for (int r = 0; r < cfg.repeats; ++r) {
      const auto sites = gen_random_layer(n, cfg, run_seed(cfg.seed, n, r));
      const Diagram d = compute_wov_diagram(sites, cfg.canvas);
      rows.push_back({n, r, static_cast<double>(d.counters.pairs_checked) / n,
                      static_cast<double>(d.counters.valid_neighbors) / n});
    }
  }
  return rows;
}

struct TimingOptions {
  int iterations = 1000;
  int warmup = 10;
};

struct TimingRow {
  int n = 0;
  double ms_per_iter = 0.0;
};

/// Mean wall time of one iteration (update plus diagram) with the convergence
/// check off. Each repeat is an independent timed trial; the fastest trial's
/// mean is reported, which filters out interference from other processes.
inline std::vector<TimingRow> run_timing_scaling(const BenchConfig& cfg,
                                                 const TimingOptions& topt = {}) {
  cfg.validate();
  if (topt.iterations < 1 || topt.warmup < 0) throw BenchError("bad iteration counts");
  AdaptParams params;
  params.epsilon = 1e-6 * cfg.canvas.diagonal();
  params.check_convergence = false;
  params.max_iterations = topt.warmup + topt.iterations;
  std::vector<TimingRow> rows;
  for (int n : cfg.site_counts) {
    double best = 0.0;
    for (int r = 0; r < cfg.repeats; ++r) {
      auto sites = gen_random_layer(n, cfg, run_seed(cfg.seed, n, r));
      for (Site& s : sites) s.weight = params.epsilon;
      const LayerResult res = layout_single_layer(std::move(sites), cfg.canvas, params);
      std::chrono::duration<double, std::milli> total{0};
      for (const auto& rec : res.trace) {
        if (rec.iteration > topt.warmup) total += rec.wall_time;
      }
      const double ms = total.count() / topt.iterations;
      if (r == 0 || ms < best) best = ms;
    }
    rows.push_back({n, best});
  }
  return rows;
}

struct ConvergenceRun {
  InitMode mode = InitMode::squarified;
  int seed = 0;
  double initial_error = 0.0;
  IterationTrace trace;
  int converged_at = -1;  // first iteration below the threshold, -1 if never
};

/// One layer of `cfg.site_counts.front()` sites per seed index in
/// [0, cfg.repeats). The same seed index gives the same values in both modes;
/// random mode starts from the generated positions with minimal weights.
inline std::vector<ConvergenceRun> run_convergence(const BenchConfig& cfg, InitMode mode,
                                                   AdaptParams params = {}) {
  cfg.validate();
  if (cfg.site_counts.empty()) throw BenchError("no site count given");
  const int n = cfg.site_counts.front();
  params.epsilon = 1e-6 * cfg.canvas.diagonal();
  const auto region = RectilinearPolygon::from_rect(cfg.canvas);
  std::vector<ConvergenceRun> runs;
  for (int r = 0; r < cfg.repeats; ++r) {
    auto layer = gen_random_layer(n, cfg, run_seed(cfg.seed, n, r));
    std::vector<Site> sites;
    if (mode == InitMode::squarified) {
      InitOptions io;
      io.epsilon = params.epsilon;
      sites = initialize_sites(values_of(layer), region, io);
    } else {
      sites = std::move(layer);
      for (Site& s : sites) s.weight = params.epsilon;
    }
    LayerResult res = layout_single_layer(std::move(sites), cfg.canvas, params);
    ConvergenceRun run{mode, r, res.initial_error, std::move(res.trace), -1};
    for (const auto& rec : run.trace) {
      if (rec.area_error < params.error_threshold) {
        run.converged_at = rec.iteration;
        break;
      }
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

struct Summary {
  double min = 0.0, q1 = 0.0, median = 0.0, mean = 0.0, q3 = 0.0, max = 0.0;
  double iqr() const { return q3 - q1; }
};

/// Quantiles by linear interpolation between order statistics.
inline Summary summarize(std::vector<double> v) {
  if (v.empty()) throw BenchError("cannot summarize an empty sample");
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    const double h = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  Summary s;
  s.min = v.front();
  s.max = v.back();
  s.q1 = q(0.25);
  s.median = q(0.5);
  s.q3 = q(0.75);
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  return s;
}

struct AspectRow {
  std::string method;
  std::string cell_path;
  double ratio = 0.0;
};

struct AspectReport {
  std::vector<AspectRow> rows;
  std::vector<std::pair<std::string, Summary>> summaries;

  std::vector<double> ratios(const std::string& method) const {
    std::vector<double> out;
    for (const auto& r : rows) {
      if (r.method == method) out.push_back(r.ratio);
    }
    return out;
  }
  const Summary& summary(const std::string& method) const {
    for (const auto& [m, s] : summaries) {
      if (m == method) return s;
    }
    throw BenchError("no summary for method " + method);
  }
};

namespace detail {

inline void squarified_treemap(const HierarchyNode& node, const Rect& rect,
                               const std::string& path, std::vector<AspectRow>& rows) {
  if (node.is_leaf()) {
    rows.push_back({"squarified", path,
                    std::max(rect.width, rect.height) / std::min(rect.width, rect.height)});
    return;
  }
  std::vector<double> values;
  for (const auto& c : node.children) values.push_back(c.value);
  const auto rects = squarify(values, rect);
  for (std::size_t k = 0; k < node.children.size(); ++k) {
    squarified_treemap(node.children[k], rects[k], path + "/" + node.children[k].name, rows);
  }
}

inline void leaf_ratios(const HierarchyNode& node, const std::string& method,
                        const std::string& path, std::vector<AspectRow>& rows) {
  if (node.is_leaf()) {
    rows.push_back({method, path, bbox_aspect_ratio(*node.cell)});
    return;
  }
  for (const auto& c : node.children) leaf_ratios(c, method, path + "/" + c.name, rows);
}

}  // namespace detail

/// Leaf aspect ratios of the orthogonal layout with squarified init ("ovt"),
/// with random init ("ovt_random"), and of the plain squarified treemap.
inline AspectReport run_aspect_ratio(const HierarchyNode& dataset, const BenchConfig& cfg,
                                     TreeLayoutOptions opt = {}) {
  cfg.validate();
  HierarchyNode root = dataset;
  aggregate_in_place(root);
  AspectReport rep;
  opt.seed = cfg.seed;
  for (InitMode mode : {InitMode::squarified, InitMode::random}) {
    opt.init = mode;
    const TreeLayout tl = layout_tree(root, cfg.canvas, opt);
    detail::leaf_ratios(tl.root, mode == InitMode::squarified ? "ovt" : "ovt_random",
                        tl.root.name, rep.rows);
  }
  detail::squarified_treemap(root, cfg.canvas, root.name, rep.rows);
  for (const char* m : {"ovt", "ovt_random", "squarified"}) {
    rep.summaries.emplace_back(m, summarize(rep.ratios(m)));
  }
  return rep;
}

/// A root whose leaves carry the layer's target values.
inline HierarchyNode flat_hierarchy(const std::vector<Site>& layer) {
  HierarchyNode root;
  root.name = "root";
  for (const Site& s : layer) {
    HierarchyNode leaf;
    leaf.name = "s" + std::to_string(s.id);
    leaf.value = s.target_value;
    root.children.push_back(std::move(leaf));
  }
  aggregate_in_place(root);
  return root;
}

/// Random package-style hierarchy: `top` groups below the root, each split into
/// subgroups holding the leaves, with a few leaves attached directly to a top
/// group. Leaf values are log-normal, like source-file sizes.
inline HierarchyNode gen_random_hierarchy(int leaves, int top, std::uint64_t seed) {
  if (top < 1 || leaves < 2 * top) throw BenchError("need at least two leaves per group");
  SplitMix64 rng(seed);
  auto normal = [&] {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  };
  auto make_leaf = [&](const std::string& name) {
    HierarchyNode leaf;
    leaf.name = name;
    leaf.value = std::round(std::exp(8.0 + 1.2 * normal()));
    if (leaf.value < 1.0) leaf.value = 1.0;
    return leaf;
  };
  // Split the leaves among the top groups, at least two each.
  std::vector<int> per_top(top, 2);
  for (int k = 2 * top; k < leaves; ++k) per_top[static_cast<int>(rng.uniform() * top)]++;

  HierarchyNode root;
  root.name = "root";
  for (int t = 0; t < top; ++t) {
    HierarchyNode group;
    group.name = "g" + std::to_string(t);
    int remaining = per_top[t];
    int direct = remaining >= 6 ? static_cast<int>(rng.uniform() * 3.0) : 0;
    for (int d = 0; d < direct; ++d) {
      group.children.push_back(make_leaf(group.name + "_leaf" + std::to_string(d)));
    }
    remaining -= direct;
    int sub = 0;
    while (remaining > 0) {
      int take = 2 + static_cast<int>(rng.uniform() * 9.0);
      if (remaining - take < 2) take = remaining;
      HierarchyNode pkg;
      pkg.name = group.name + "_p" + std::to_string(sub++);
      for (int l = 0; l < take; ++l) {
        pkg.children.push_back(make_leaf(pkg.name + "_c" + std::to_string(l)));
      }
      group.children.push_back(std::move(pkg));
      remaining -= take;
    }
    root.children.push_back(std::move(group));
  }
  aggregate_in_place(root);
  return root;
}

inline void write_csv(std::ostream& os, const std::vector<NeighborRow>& rows) {
  os << "n,repeat,pairs_per_site,valid_per_site\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.repeat << ',' << r.pairs_per_site << ',' << r.valid_per_site << '\n';
  }
}

inline void write_csv(std::ostream& os, const std::vector<TimingRow>& rows) {
  os << "n,ms_per_iter\n";
  for (const auto& r : rows) os << r.n << ',' << r.ms_per_iter << '\n';
}

inline const char* to_string(InitMode m) {
  return m == InitMode::squarified ? "squarified" : "random";
}

inline void write_csv(std::ostream& os, const std::vector<ConvergenceRun>& runs) {
  os << "mode,seed,iter,error\n";
  for (const auto& run : runs) {
    os << to_string(run.mode) << ',' << run.seed << ",0," << run.initial_error << '\n';
    for (const auto& rec : run.trace) {
      os << to_string(run.mode) << ',' << run.seed << ',' << rec.iteration << ','
         << rec.area_error << '\n';
    }
  }
}

inline void write_csv(std::ostream& os, const AspectReport& rep) {
  os << "method,cell_path,ratio\n";
  for (const auto& r : rep.rows) os << r.method << ',' << r.cell_path << ',' << r.ratio << '\n';
}

}  // namespace ovt
