#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "ovt/geom.hpp"
#include "ovt/random.hpp"
#include "ovt/segmentation.hpp"

namespace ovt {

class InitializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Center of a treemap rectangle relative to its parent, each axis in [0, 1].
struct RelPos {
  double rx = 0.5;
  double ry = 0.5;
};

enum class InitMode { squarified, random };

/// How the squarified rectangle's area becomes an initial weight.
enum class InitWeight {
  half_area,       // half the rectangle's area
  half_sqrt_area,  // half the square root of the area (a length)
};

namespace detail {

inline double worst_ratio(double row_sum, double row_min, double row_max, double side) {
  const double s2 = row_sum * row_sum;
  const double w2 = side * side;
  return std::max(w2 * row_max / s2, s2 / (w2 * row_min));
}

}  // namespace detail

/// Squarified treemap of `values` inside `rect`. Rectangles come back in input
/// order. Items are placed largest first; a row is closed as soon as adding the
/// next item would not strictly improve its worst aspect ratio.
inline std::vector<Rect> squarify(std::span<const double> values, const Rect& rect) {
  require_valid(rect);
  if (values.empty()) throw InitializationError("squarify needs at least one value");
  double total = 0.0;
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InitializationError("squarify values must be positive");
    total += v;
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  const double scale = rect.area() / total;

  std::vector<Rect> out(values.size());
  Rect free = rect;
  std::size_t next = 0;
  while (next < order.size()) {
    const bool column = free.width >= free.height;  // lay the row along the shorter side
    const double side = column ? free.height : free.width;
    std::size_t end = next + 1;
    double sum = values[order[next]] * scale;
    double mn = sum, mx = sum;
    while (end < order.size()) {
      const double a = values[order[end]] * scale;
      const double cur = detail::worst_ratio(sum, mn, mx, side);
      const double cand = detail::worst_ratio(sum + a, std::min(mn, a), std::max(mx, a), side);
      if (!(cand < cur)) break;
      sum += a;
      mn = std::min(mn, a);
      mx = std::max(mx, a);
      ++end;
    }
    const bool last_row = end == order.size();
    const double thick = last_row ? (column ? free.width : free.height) : sum / side;
    double offset = 0.0;
    for (std::size_t k = next; k < end; ++k) {
      const double a = values[order[k]] * scale;
      const double len = (k + 1 == end) ? side - offset : a / thick;
      out[order[k]] = column ? Rect{free.x0, free.y0 + offset, thick, len}
                             : Rect{free.x0 + offset, free.y0, len, thick};
      offset += len;
    }
    if (column) {
      free.x0 += thick;
      free.width -= thick;
    } else {
      free.y0 += thick;
      free.height -= thick;
    }
    next = end;
  }
  return out;
}

inline RelPos encode_relpos(const Rect& child, const Rect& parent) {
  const Point c = child.center();
  return {(c.x - parent.x0) / parent.width, (c.y - parent.y0) / parent.height};
}

/// Maps a relative position into an arbitrary rectilinear cell: the row is
/// chosen from ry over the bounding box, then rx is applied within the
/// horizontal span of the cell on that row.
inline Point decode_relpos(const RelPos& rel, const RectilinearPolygon& cell) {
  const Rect b = cell.bbox();
  const double nudge = 1e-9 * b.diagonal();
  double y = b.y0 + rel.ry * b.height;
  auto spans = horizontal_spans(cell, y);
  if (spans.empty()) {
    y = std::clamp(y, b.y0 + nudge, b.y1() - nudge);
    spans = horizontal_spans(cell, y);
    if (spans.empty()) throw InitializationError("relative position misses the cell");
  }
  const double bx = b.x0 + rel.rx * b.width;
  auto span = std::max_element(spans.begin(), spans.end(), [](const auto& a, const auto& c) {
    return a.second - a.first < c.second - c.first;
  });
  for (auto it = spans.begin(); it != spans.end(); ++it) {
    if (bx >= it->first && bx <= it->second) {
      span = it;
      break;
    }
  }
  double x = span->first + rel.rx * (span->second - span->first);
  Point p{x, y};
  if (contains(cell, p)) return p;
  p.x = std::clamp(x, span->first + nudge, span->second - nudge);
  if (contains(cell, p)) return p;
  for (double dy : {nudge, -nudge}) {
    const Point q{p.x, p.y + dy};
    if (contains(cell, q)) return q;
  }
  throw InitializationError("could not place relative position inside the cell");
}

struct InitOptions {
  InitMode mode = InitMode::squarified;
  InitWeight weight = InitWeight::half_area;
  std::uint64_t seed = 0;
  /// Weight floor; also the initial weight in random mode.
  double epsilon = 1e-6;
};

/// Initial sites for children with the given values inside `parent_cell`.
/// Site ids are the child indices.
inline std::vector<Site> initialize_sites(std::span<const double> values,
                                          const RectilinearPolygon& parent_cell,
                                          const InitOptions& opt = {}) {
  if (values.empty()) throw InitializationError("no children to initialize");
  const Rect box = parent_cell.bbox();
  std::vector<Site> sites(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    sites[k].id = static_cast<int>(k);
    sites[k].target_value = values[k];
  }
  if (opt.mode == InitMode::random) {
    SplitMix64 rng(opt.seed);
    for (Site& s : sites) {
      for (;;) {
        const Point p{rng.uniform(box.x0, box.x1()), rng.uniform(box.y0, box.y1())};
        if (contains(parent_cell, p)) {
          s.position = p;
          break;
        }
      }
      s.weight = opt.epsilon;
    }
    return sites;
  }
  const std::vector<Rect> rects = squarify(values, box);
  const double shrink = area(parent_cell) / box.area();
  for (std::size_t k = 0; k < values.size(); ++k) {
    sites[k].position = decode_relpos(encode_relpos(rects[k], box), parent_cell);
    const double a = rects[k].area() * shrink;
    const double w = opt.weight == InitWeight::half_area ? 0.5 * a : 0.5 * std::sqrt(a);
    sites[k].weight = std::max(w, opt.epsilon);
  }
  return sites;
}

}  // namespace ovt
