#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ovt {

/// Absolute tolerance for coordinate comparisons (canvas units).
inline constexpr double kTol = 1e-9;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline bool near(double a, double b, double tol = kTol) { return std::abs(a - b) <= tol; }
inline bool near(const Point& a, const Point& b, double tol = kTol) {
  return near(a.x, b.x, tol) && near(a.y, b.y, tol);
}

/// Axis-aligned rectangle. y grows downward (image coordinates), so y0 is the top edge.
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double width = 0.0;
  double height = 0.0;

  double x1() const { return x0 + width; }
  double y1() const { return y0 + height; }
  double area() const { return width * height; }
  double diagonal() const { return std::hypot(width, height); }
  Point center() const { return {x0 + 0.5 * width, y0 + 0.5 * height}; }
  bool valid() const {
    return std::isfinite(x0) && std::isfinite(y0) && width > 0.0 && height > 0.0 &&
           std::isfinite(width) && std::isfinite(height);
  }
  bool strictly_contains(const Point& p) const {
    return p.x > x0 && p.x < x1() && p.y > y0 && p.y < y1();
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline Rect require_valid(const Rect& r) {
  if (!r.valid()) throw GeometryError("rectangle must have finite origin and positive extent");
  return r;
}

namespace detail {

// Shoelace sum taken relative to the first vertex; thin cells far from the
// origin otherwise cancel to zero.
inline double signed_area(std::span<const Point> v) {
  if (v.empty()) return 0.0;
  const Point o = v[0];
  double s = 0.0;
  for (std::size_t i = 1, n = v.size(); i + 1 < n; ++i) {
    const double ax = v[i].x - o.x, ay = v[i].y - o.y;
    const double bx = v[i + 1].x - o.x, by = v[i + 1].y - o.y;
    s += ax * by - bx * ay;
  }
  return 0.5 * s;
}

// Drops repeated vertices and vertices sitting in the middle of a straight run
// (including zero-width spikes) until nothing changes.
inline std::vector<Point> simplify_ring(std::vector<Point> v) {
  for (;;) {
    std::size_t w = 0;
    for (std::size_t r = 0; r < v.size(); ++r) {
      if (w > 0 && near(v[w - 1], v[r])) continue;
      v[w++] = v[r];
    }
    while (w > 1 && near(v[0], v[w - 1])) --w;
    v.resize(w);
    const std::size_t n = v.size();
    if (n < 3) return v;
    std::size_t drop = n;
    for (std::size_t i = 0; i < n; ++i) {
      const Point& prev = v[(i + n - 1) % n];
      const Point& cur = v[i];
      const Point& next = v[(i + 1) % n];
      if ((near(prev.x, cur.x) && near(cur.x, next.x)) ||
          (near(prev.y, cur.y) && near(cur.y, next.y))) {
        drop = i;
        break;
      }
    }
    if (drop == n) return v;
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(drop));
  }
}

inline bool segments_touch(const Point& a0, const Point& a1, const Point& b0, const Point& b1) {
  const double ax0 = std::min(a0.x, a1.x), ax1 = std::max(a0.x, a1.x);
  const double ay0 = std::min(a0.y, a1.y), ay1 = std::max(a0.y, a1.y);
  const double bx0 = std::min(b0.x, b1.x), bx1 = std::max(b0.x, b1.x);
  const double by0 = std::min(b0.y, b1.y), by1 = std::max(b0.y, b1.y);
  return ax0 <= bx1 + kTol && bx0 <= ax1 + kTol && ay0 <= by1 + kTol && by0 <= ay1 + kTol;
}

}  // namespace detail

/// Simple axis-aligned polygon, normalized on construction: collinear runs merged,
/// positive signed area (counterclockwise with y up, clockwise on screen), first
/// vertex is the lexicographically smallest (x, then y).
class RectilinearPolygon {
 public:
  RectilinearPolygon() = default;

  explicit RectilinearPolygon(std::vector<Point> vertices) : v_(normalize(std::move(vertices))) {
    validate();
  }

  static RectilinearPolygon from_rect(const Rect& r) {
    require_valid(r);
    return RectilinearPolygon(
        std::vector<Point>{{r.x0, r.y0}, {r.x1(), r.y0}, {r.x1(), r.y1()}, {r.x0, r.y1()}});
  }

  std::span<const Point> vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  Rect bbox() const {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    for (const Point& p : v_) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
    return {x0, y0, x1 - x0, y1 - y0};
  }

  bool is_rectangle() const { return v_.size() == 4; }

  /// Every pair of non-adjacent edges is disjoint and adjacent edges meet only at
  /// their shared vertex.
  bool is_simple() const {
    const std::size_t n = v_.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        if (detail::segments_touch(v_[i], v_[(i + 1) % n], v_[j], v_[(j + 1) % n])) return false;
      }
    }
    return true;
  }

  static std::vector<Point> normalize(std::vector<Point> v) {
    for (const Point& p : v) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw GeometryError("polygon vertex has non-finite coordinate");
    }
    v = detail::simplify_ring(std::move(v));
    if (v.size() < 4) return v;
    // Snap near-equal coordinates so that every edge is exactly axis-parallel.
    const std::size_t n = v.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      Point& a = v[i];
      Point& b = v[i + 1];
      if (near(a.x, b.x) && a.x != b.x) b.x = a.x;
      else if (near(a.y, b.y) && a.y != b.y) b.y = a.y;
    }
    if (detail::signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
    auto first = std::min_element(v.begin(), v.end(), [](const Point& a, const Point& b) {
      return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    std::rotate(v.begin(), first, v.end());
    return v;
  }

  friend bool operator==(const RectilinearPolygon&, const RectilinearPolygon&) = default;

 private:
  void validate() const {
    const std::size_t n = v_.size();
    if (n < 4) throw GeometryError("rectilinear polygon needs at least 4 vertices");
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = v_[i];
      const Point& b = v_[(i + 1) % n];
      if (!near(a.x, b.x) && !near(a.y, b.y))
        throw GeometryError("polygon edge is not axis-parallel");
    }
    if (!(detail::signed_area(v_) > 0.0)) throw GeometryError("polygon has no positive area");
  }

  std::vector<Point> v_;
};

inline double area(const RectilinearPolygon& poly) { return detail::signed_area(poly.vertices()); }

inline Point centroid(const RectilinearPolygon& poly) {
  const auto v = poly.vertices();
  const std::size_t n = v.size();
  const Point o = v[0];
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point p{v[i].x - o.x, v[i].y - o.y};
    const Point q{v[(i + 1) % n].x - o.x, v[(i + 1) % n].y - o.y};
    const double cross = p.x * q.y - q.x * p.y;
    a += cross;
    cx += (p.x + q.x) * cross;
    cy += (p.y + q.y) * cross;
  }
  a *= 0.5;
  return {o.x + cx / (6.0 * a), o.y + cy / (6.0 * a)};
}

inline bool on_boundary(const RectilinearPolygon& poly, const Point& p, double tol = kTol) {
  const auto v = poly.vertices();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    if (near(a.x, b.x)) {
      if (std::abs(p.x - a.x) <= tol && p.y >= std::min(a.y, b.y) - tol &&
          p.y <= std::max(a.y, b.y) + tol)
        return true;
    } else {
      if (std::abs(p.y - a.y) <= tol && p.x >= std::min(a.x, b.x) - tol &&
          p.x <= std::max(a.x, b.x) + tol)
        return true;
    }
  }
  return false;
}

/// Crossing-number test without boundary handling; callers guarantee p is off the boundary.
inline bool inside_by_crossing(std::span<const Point> v, const Point& p) {
  bool in = false;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    if (a.x != b.x) continue;
    const double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
    if (a.x > p.x && p.y >= lo && p.y < hi) in = !in;
  }
  return in;
}

/// Strict interior test; boundary points are not contained.
inline bool contains(const RectilinearPolygon& poly, const Point& p) {
  if (on_boundary(poly, p)) return false;
  return inside_by_crossing(poly.vertices(), p);
}

/// Interior or boundary.
inline bool covers(const RectilinearPolygon& poly, const Point& p, double tol = kTol) {
  return on_boundary(poly, p, tol) || inside_by_crossing(poly.vertices(), p);
}

inline double bbox_aspect_ratio(const RectilinearPolygon& poly) {
  const Rect b = poly.bbox();
  return std::max(b.width, b.height) / std::min(b.width, b.height);
}

/// Sorted, disjoint x-intervals where the horizontal line at y crosses the interior.
inline std::vector<std::pair<double, double>> horizontal_spans(const RectilinearPolygon& poly,
                                                               double y) {
  std::vector<double> xs;
  const auto v = poly.vertices();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    if (a.x != b.x) continue;
    if (y >= std::min(a.y, b.y) && y < std::max(a.y, b.y)) xs.push_back(a.x);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<std::pair<double, double>> spans;
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) spans.emplace_back(xs[i], xs[i + 1]);
  return spans;
}

namespace detail {

inline std::vector<double> unique_sorted(std::vector<double> c) {
  std::sort(c.begin(), c.end());
  std::vector<double> out;
  for (double x : c) {
    if (out.empty() || x - out.back() > kTol) out.push_back(x);
  }
  return out;
}

// Sorted y-crossings of the polygon's horizontal edges that span abscissa x.
inline std::vector<double> vertical_crossings(std::span<const Point> v, double x) {
  std::vector<double> ys;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    if (a.y != b.y) continue;
    if (x > std::min(a.x, b.x) && x < std::max(a.x, b.x)) ys.push_back(a.y);
  }
  std::sort(ys.begin(), ys.end());
  return ys;
}

inline bool inside_intervals(const std::vector<double>& crossings, double y) {
  const auto it = std::upper_bound(crossings.begin(), crossings.end(), y);
  return (std::distance(crossings.begin(), it) % 2) == 1;
}

// Traces the outline of one 4-connected component on a compressed grid.
// Grid cell (i, j) spans [xs[i], xs[i+1]] x [ys[j], ys[j+1]].
inline std::vector<Point> trace_component(const std::vector<int>& label, int comp,
                                          std::size_t nx, std::size_t ny,
                                          const std::vector<double>& xs,
                                          const std::vector<double>& ys) {
  auto in = [&](long i, long j) {
    return i >= 0 && j >= 0 && i < static_cast<long>(nx) && j < static_cast<long>(ny) &&
           label[static_cast<std::size_t>(j) * nx + static_cast<std::size_t>(i)] == comp;
  };
  struct Edge {
    long x0, y0, x1, y1;
    bool used = false;
  };
  std::vector<Edge> edges;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const long ii = static_cast<long>(i), jj = static_cast<long>(j);
      if (!in(ii, jj)) continue;
      if (!in(ii, jj - 1)) edges.push_back({ii, jj, ii + 1, jj});
      if (!in(ii + 1, jj)) edges.push_back({ii + 1, jj, ii + 1, jj + 1});
      if (!in(ii, jj + 1)) edges.push_back({ii + 1, jj + 1, ii, jj + 1});
      if (!in(ii - 1, jj)) edges.push_back({ii, jj + 1, ii, jj});
    }
  }
  if (edges.empty()) return {};
  std::vector<std::size_t> order(edges.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  const long w = static_cast<long>(nx) + 1;
  auto key = [&](long x, long y) { return y * w + x; };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return key(edges[a].x0, edges[a].y0) < key(edges[b].x0, edges[b].y0);
  });
  auto find_from = [&](long x, long y) -> long {
    const long k = key(x, y);
    auto it = std::lower_bound(order.begin(), order.end(), k, [&](std::size_t e, long kk) {
      return key(edges[e].x0, edges[e].y0) < kk;
    });
    for (; it != order.end() && key(edges[*it].x0, edges[*it].y0) == k; ++it) {
      if (!edges[*it].used) return static_cast<long>(*it);
    }
    return -1;
  };
  std::vector<Point> ring;
  long cur = static_cast<long>(order.front());
  while (cur >= 0 && !edges[static_cast<std::size_t>(cur)].used) {
    Edge& e = edges[static_cast<std::size_t>(cur)];
    e.used = true;
    ring.push_back({xs[static_cast<std::size_t>(e.x0)], ys[static_cast<std::size_t>(e.y0)]});
    cur = find_from(e.x1, e.y1);
  }
  return ring;
}

}  // namespace detail

/// Rectilinear intersection of two polygons, one polygon per connected piece.
/// Pieces that touch only at a corner are reported separately.
inline std::vector<RectilinearPolygon> clip(const RectilinearPolygon& poly,
                                            const RectilinearPolygon& region) {
  const Rect a = poly.bbox(), b = region.bbox();
  const double ix0 = std::max(a.x0, b.x0), ix1 = std::min(a.x1(), b.x1());
  const double iy0 = std::max(a.y0, b.y0), iy1 = std::min(a.y1(), b.y1());
  if (ix1 - ix0 <= kTol || iy1 - iy0 <= kTol) return {};
  if (region.is_rectangle() && a.x0 >= b.x0 - kTol && a.x1() <= b.x1() + kTol &&
      a.y0 >= b.y0 - kTol && a.y1() <= b.y1() + kTol)
    return {poly};
  if (poly.is_rectangle() && b.x0 >= a.x0 - kTol && b.x1() <= a.x1() + kTol &&
      b.y0 >= a.y0 - kTol && b.y1() <= a.y1() + kTol)
    return {region};

  std::vector<double> xc, yc;
  for (const auto* p : {&poly, &region}) {
    for (const Point& q : p->vertices()) {
      if (q.x >= ix0 - kTol && q.x <= ix1 + kTol) xc.push_back(q.x);
      if (q.y >= iy0 - kTol && q.y <= iy1 + kTol) yc.push_back(q.y);
    }
  }
  xc.push_back(ix0);
  xc.push_back(ix1);
  yc.push_back(iy0);
  yc.push_back(iy1);
  const std::vector<double> xs = detail::unique_sorted(std::move(xc));
  const std::vector<double> ys = detail::unique_sorted(std::move(yc));
  if (xs.size() < 2 || ys.size() < 2) return {};
  const std::size_t nx = xs.size() - 1, ny = ys.size() - 1;

  // Vertical slabs: inside-ness of each y-cell at the slab's middle abscissa.
  std::vector<char> inside(nx * ny, 0);
  for (std::size_t i = 0; i < nx; ++i) {
    const double mx = 0.5 * (xs[i] + xs[i + 1]);
    const auto ca = detail::vertical_crossings(poly.vertices(), mx);
    const auto cb = detail::vertical_crossings(region.vertices(), mx);
    for (std::size_t j = 0; j < ny; ++j) {
      const double my = 0.5 * (ys[j] + ys[j + 1]);
      inside[j * nx + i] = detail::inside_intervals(ca, my) && detail::inside_intervals(cb, my);
    }
  }

  std::vector<int> label(nx * ny, -1);
  int ncomp = 0;
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < nx * ny; ++s) {
    if (!inside[s] || label[s] >= 0) continue;
    label[s] = ncomp;
    queue.push_back(s);
    while (!queue.empty()) {
      const std::size_t c = queue.front();
      queue.pop_front();
      const std::size_t ci = c % nx, cj = c / nx;
      auto visit = [&](std::size_t k) {
        if (inside[k] && label[k] < 0) {
          label[k] = ncomp;
          queue.push_back(k);
        }
      };
      if (ci > 0) visit(c - 1);
      if (ci + 1 < nx) visit(c + 1);
      if (cj > 0) visit(c - nx);
      if (cj + 1 < ny) visit(c + nx);
    }
    ++ncomp;
  }

  std::vector<RectilinearPolygon> pieces;
  pieces.reserve(static_cast<std::size_t>(ncomp));
  for (int c = 0; c < ncomp; ++c) {
    pieces.emplace_back(detail::trace_component(label, c, nx, ny, xs, ys));
  }
  return pieces;
}

}  // namespace ovt
