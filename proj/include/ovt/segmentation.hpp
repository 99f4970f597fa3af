#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>

#include "ovt/geom.hpp"

namespace ovt {

class CoincidentSitesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SiteStatus { active, closed };

/// Generator point of one cell. `weight` is a length in canvas units.
struct Site {
  int id = 0;
  Point position;
  double weight = 0.0;
  double target_value = 1.0;
  SiteStatus status = SiteStatus::active;
};

/// Orientation of the line separating a site pair. A horizontal line separates
/// two sites stacked vertically; a vertical line separates two sites side by side.
enum class SegAxis { horizontal, vertical };

struct SegLine {
  SegAxis axis = SegAxis::horizontal;
  double coordinate = 0.0;

  friend bool operator==(const SegLine&, const SegLine&) = default;
};

inline const char* to_string(SegAxis a) {
  return a == SegAxis::horizontal ? "horizontal" : "vertical";
}

/// Larger coordinate difference wins; ties go to a horizontal line.
inline SegAxis classify_pair(const Point& a, const Point& b) {
  const double dx = std::abs(a.x - b.x);
  const double dy = std::abs(a.y - b.y);
  if (dx <= kTol && dy <= kTol) throw CoincidentSitesError("coincident site positions");
  return dx > dy + kTol ? SegAxis::vertical : SegAxis::horizontal;
}

inline SegAxis classify_pair(const Site& si, const Site& sj) {
  return classify_pair(si.position, sj.position);
}

/// Axis-aligned distance reduced by the site's weight; negative inside the weight band.
inline double weighted_distance(const Point& p, const Site& s, SegAxis axis) {
  const double d = axis == SegAxis::vertical ? std::abs(p.x - s.position.x)
                                             : std::abs(p.y - s.position.y);
  return d - s.weight;
}

namespace detail {

// Places the separator between coordinates ci < cj (or cj < ci). Equal weighted
// distance when the weights fit into the gap, otherwise a split of the gap in the
// ratio of the weights, measured from the smaller coordinate.
inline double weighted_split(double ci, double wi, double cj, double wj) {
  // Work from the smaller coordinate so the result does not depend on argument order.
  if (cj < ci) {
    std::swap(ci, cj);
    std::swap(wi, wj);
  }
  const double gap = cj - ci;
  const double slack = gap - wi - wj;
  const double c = slack >= 0.0 ? ci + wi + 0.5 * slack : ci + wi / (wi + wj) * gap;
  // A zero weight facing a positive one can land the line on a site.
  const double margin = 1e-9 * gap;
  return std::clamp(c, ci + margin, cj - margin);
}

}  // namespace detail

inline SegLine generate_weighted_line(const Site& si, const Site& sj) {
  const SegAxis axis = classify_pair(si, sj);
  if (axis == SegAxis::vertical) {
    return {axis, detail::weighted_split(si.position.x, si.weight, sj.position.x, sj.weight)};
  }
  return {axis, detail::weighted_split(si.position.y, si.weight, sj.position.y, sj.weight)};
}

/// True when the open rectangle spanned by the two sites holds no other site.
inline bool is_valid_neighbor(const Site& si, const Site& sj, std::span<const Site> all) {
  const double x0 = std::min(si.position.x, sj.position.x) + kTol;
  const double x1 = std::max(si.position.x, sj.position.x) - kTol;
  const double y0 = std::min(si.position.y, sj.position.y) + kTol;
  const double y1 = std::max(si.position.y, sj.position.y) - kTol;
  for (const Site& s : all) {
    if (s.id == si.id || s.id == sj.id) continue;
    const Point& p = s.position;
    if (p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1) return false;
  }
  return true;
}

}  // namespace ovt
