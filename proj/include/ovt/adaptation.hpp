#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <tuple>
#include <stdexcept>
#include <vector>

#include "ovt/geom.hpp"
#include "ovt/segmentation.hpp"
#include "ovt/sweep.hpp"

namespace ovt {

class AdaptationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which factor the sign-flip damping compares against.
enum class FactorHistory {
  previous_site,  // the factor of the site handled just before, within one pass
  same_site,      // the same site's factor from the previous pass
};

struct AdaptParams {
  double rho = 0.3;
  double epsilon = 1e-6;  // absolute weight floor, canvas units
  int max_iterations = 500;
  double error_threshold = 0.01;
  bool check_convergence = true;
  FactorHistory history = FactorHistory::previous_site;

  void validate() const {
    if (!(rho > 0.0 && rho < 1.0)) throw AdaptationError("rho must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw AdaptationError("epsilon must be positive");
    if (max_iterations < 1) throw AdaptationError("max_iterations must be at least 1");
    if (!(error_threshold > 0.0)) throw AdaptationError("error_threshold must be positive");
  }
};

/// A site's cell after optional clipping; usually a single piece.
struct CellShape {
  std::vector<RectilinearPolygon> pieces;
  double area = 0.0;
  Point centroid;

  bool connected() const { return pieces.size() == 1; }
};

inline CellShape make_shape(std::vector<RectilinearPolygon> pieces) {
  CellShape s;
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pieces) {
    const double a = area(p);
    const Point c = centroid(p);
    s.area += a;
    cx += a * c.x;
    cy += a * c.y;
  }
  if (s.area > 0.0) s.centroid = {cx / s.area, cy / s.area};
  s.pieces = std::move(pieces);
  return s;
}

inline std::vector<CellShape> shapes_of(const Diagram& d) {
  std::vector<CellShape> out;
  out.reserve(d.cells.size());
  for (const auto& c : d.cells) out.push_back(make_shape({c}));
  return out;
}

inline bool shape_contains(const CellShape& s, const Point& p) {
  return std::any_of(s.pieces.begin(), s.pieces.end(),
                     [&](const RectilinearPolygon& q) { return contains(q, p); });
}

/// Sum of absolute deviations of cell areas from value-proportional targets,
/// relative to the region area.
inline double area_error(std::span<const double> cell_areas, std::span<const Site> sites,
                         double region_area) {
  double total = 0.0;
  for (const Site& s : sites) total += s.target_value;
  double err = 0.0;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    err += std::abs(cell_areas[k] - region_area * sites[k].target_value / total);
  }
  return err / region_area;
}

inline double area_error(std::span<const CellShape> cells, std::span<const Site> sites,
                         double region_area) {
  std::vector<double> a(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) a[k] = cells[k].area;
  return area_error(a, sites, region_area);
}

inline double area_error(const Diagram& d, std::span<const Site> sites, double region_area) {
  std::vector<double> a(d.cells.size());
  for (std::size_t k = 0; k < d.cells.size(); ++k) a[k] = area(d.cells[k]);
  return area_error(a, sites, region_area);
}

/// Indices of sites in sweep order (x, then y, then id).
inline std::vector<std::size_t> sweep_order(std::span<const Site> sites) {
  std::vector<std::size_t> order(sites.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Point& p = sites[a].position;
    const Point& q = sites[b].position;
    if (p.x != q.x) return p.x < q.x;
    if (p.y != q.y) return p.y < q.y;
    return sites[a].id < sites[b].id;
  });
  return order;
}

/// One pass of the combined weight and position update. `history` holds each
/// site's last factor and is only used with FactorHistory::same_site.
inline std::vector<Site> adapt_positions_weights(std::span<const Site> sites,
                                                 std::span<const CellShape> cells,
                                                 double region_area, const AdaptParams& params,
                                                 std::vector<double>* history = nullptr) {
  double total = 0.0;
  for (const Site& s : sites) total += s.target_value;
  std::vector<Site> out(sites.begin(), sites.end());
  if (history && history->size() != sites.size()) history->assign(sites.size(), 0.0);
  double f_prev = 0.0;
  for (std::size_t k : sweep_order(sites)) {
    const CellShape& cell = cells[k];
    if (!(cell.area > 0.0)) throw AdaptationError("site has a zero-area cell");
    Site& s = out[k];
    const double target = region_area * s.target_value / total;
    double f = target / cell.area;
    const double f_ref = params.history == FactorHistory::same_site && history ? (*history)[k]
                                                                               : f_prev;
    // sgn(0) counts as positive: an exact fit never triggers the clamp.
    if (f_ref != 0.0 && ((f - 1.0) >= 0.0) != ((f_ref - 1.0) >= 0.0)) {
      f = std::min(1.0 + params.rho, std::max(f, 1.0 - params.rho));
    }
    s.weight = std::max(s.weight * std::sqrt(f), params.epsilon);
    f_prev = f;
    if (history) (*history)[k] = f;
    const Point& c = cell.centroid;
    const double step = 1.0 - 0.5 * params.rho;
    const Point cand{s.position.x + (c.x - s.position.x) * step,
                     s.position.y + (c.y - s.position.y) * step};
    if (shape_contains(cell, cand)) s.position = cand;
  }
  return out;
}

inline std::vector<Site> adapt_positions_weights(std::span<const Site> sites, const Diagram& d,
                                                 double region_area, const AdaptParams& params) {
  const auto shapes = shapes_of(d);
  return adapt_positions_weights(sites, shapes, region_area, params);
}

struct IterationRecord {
  int iteration = 0;
  double area_error = 0.0;
  std::chrono::nanoseconds wall_time{0};
};

using IterationTrace = std::vector<IterationRecord>;

struct LayerResult {
  std::vector<Site> sites;        // sites that generated `diagram`
  Diagram diagram;                // unclipped diagram over the bounding rectangle
  std::vector<CellShape> cells;   // cells clipped to the layer region
  double area_error = 0.0;
  double initial_error = 0.0;     // error of the diagram drawn from the initial sites
  bool converged = false;
  bool connected = true;          // every clipped cell is a single, nonempty piece
  IterationTrace trace;           // one record per iteration, starting at 1
  int diagram_calls = 0;
};

struct LayerOptions {
  /// Clip region when the layer lives inside a non-rectangular parent cell.
  std::optional<RectilinearPolygon> clip_region;
  /// Return the lowest-error connected state instead of the last one.
  bool keep_best = false;
  SweepOptions sweep;
};

/// Iterates update and diagram construction until the area error drops below
/// the threshold or the iteration budget is spent. One diagram per iteration.
inline LayerResult layout_single_layer(std::vector<Site> sites, const Rect& region,
                                       const AdaptParams& params, const LayerOptions& opt = {}) {
  params.validate();
  require_valid(region);
  const double region_area = opt.clip_region ? area(*opt.clip_region) : region.area();
  using clock = std::chrono::steady_clock;

  LayerResult res;
  auto evaluate = [&](const std::vector<Site>& s, Diagram d) {
    std::vector<CellShape> shapes;
    shapes.reserve(d.cells.size());
    bool connected = true;
    for (const auto& c : d.cells) {
      shapes.push_back(make_shape(opt.clip_region ? clip(c, *opt.clip_region)
                                                  : std::vector<RectilinearPolygon>{c}));
      connected = connected && shapes.back().connected();
    }
    const double err = area_error(shapes, s, region_area);
    return std::make_tuple(std::move(d), std::move(shapes), err, connected);
  };

  std::optional<LayerResult> best;
  auto consider = [&](const std::vector<Site>& s, Diagram& d, std::vector<CellShape>& shapes,
                      double err, bool connected) {
    if (!opt.keep_best || !connected) return;
    if (best && best->area_error <= err) return;
    best = LayerResult{s, d, shapes, err, 0.0, false, true, {}, 0};
  };

  auto [diagram, shapes, err, connected] =
      evaluate(sites, compute_wov_diagram(sites, region, opt.sweep));
  res.diagram_calls = 1;
  res.initial_error = err;
  res.trace.reserve(params.max_iterations);
  consider(sites, diagram, shapes, err, connected);

  auto has_empty = [](const std::vector<CellShape>& sh) {
    return std::any_of(sh.begin(), sh.end(), [](const CellShape& c) { return !(c.area > 0.0); });
  };

  std::vector<double> history;
  bool converged = false;
  for (int it = 1; it <= params.max_iterations; ++it) {
    // A site whose clipped cell vanished cannot be adapted; stop with what we have.
    if (has_empty(shapes)) break;
    const auto t0 = clock::now();
    sites = adapt_positions_weights(sites, shapes, region_area, params, &history);
    std::tie(diagram, shapes, err, connected) =
        evaluate(sites, compute_wov_diagram(sites, region, opt.sweep));
    ++res.diagram_calls;
    res.trace.push_back({it, err, clock::now() - t0});
    consider(sites, diagram, shapes, err, connected);
    if (params.check_convergence && err < params.error_threshold && connected) {
      converged = true;
      break;
    }
  }

  if (opt.keep_best && best && !converged) {
    res.sites = std::move(best->sites);
    res.diagram = std::move(best->diagram);
    res.cells = std::move(best->cells);
    res.area_error = best->area_error;
    res.connected = true;
  } else {
    res.sites = std::move(sites);
    res.diagram = std::move(diagram);
    res.cells = std::move(shapes);
    res.area_error = err;
    res.connected = connected;
  }
  res.converged = converged;
  return res;
}

}  // namespace ovt
