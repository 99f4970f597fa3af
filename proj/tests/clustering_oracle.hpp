#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "ovt/geom.hpp"
#include "ovt/segmentation.hpp"

namespace ovt::testing {

// Brute-force assignment of grid points to sites. The region is rasterized into
// rows; every row keeps its current owner and frontier, sites are replayed in
// sweep order, and the pairing rules are applied to whole rows with valid
// neighbours found by scanning all sites. Points are looked up directly in the
// per-row intervals, without building polygons.
struct OracleGrid {
  int nx = 0;
  int ny = 0;
  double step = 0.0;
  Rect region;
  std::vector<int> owner;  // site index per grid point, row major; -1 if unresolved

  Point point(int i, int j) const {
    return {region.x0 + (i + 0.5) * step, region.y0 + (j + 0.5) * step};
  }
};

inline OracleGrid clustering_oracle(const std::vector<Site>& sites, const Rect& region,
                                    double grid_step) {
  OracleGrid g;
  g.region = region;
  g.step = grid_step;
  g.nx = static_cast<int>(std::lround(region.width / grid_step));
  g.ny = static_cast<int>(std::lround(region.height / grid_step));
  g.owner.assign(static_cast<std::size_t>(g.nx) * g.ny, -1);
  const int n = static_cast<int>(sites.size());

  auto row_y = [&](int j) { return region.y0 + (j + 0.5) * grid_step; };
  struct Span {
    double x0, x1;
    int site;
  };
  std::vector<std::vector<Span>> spans(g.ny);
  std::vector<int> row_owner(g.ny, -1);
  std::vector<double> row_front(g.ny, region.x0);
  std::vector<double> top(n), bottom(n);
  std::vector<char> active(n, 0);

  auto valid = [&](int a, int b) { return is_valid_neighbor(sites[a], sites[b], sites); };
  auto rows_in = [&](double lo, double hi, auto&& f) {
    for (int j = 0; j < g.ny; ++j) {
      const double y = row_y(j);
      if (y >= lo && y < hi) f(j);
    }
  };
  auto close = [&](int o, double x, int successor) {
    for (int j = 0; j < g.ny; ++j) {
      if (row_owner[j] != o) continue;
      spans[j].push_back({row_front[j], x, o});
      row_front[j] = x;
      row_owner[j] = successor;
    }
    active[o] = 0;
  };
  // Owner of the nearest row strictly above / at or below y.
  auto owner_near = [&](double y, int dir) {
    if (dir < 0) {
      for (int j = g.ny - 1; j >= 0; --j)
        if (row_y(j) < y) return row_owner[j];
    } else {
      for (int j = 0; j < g.ny; ++j)
        if (row_y(j) >= y) return row_owner[j];
    }
    return -1;
  };

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Point& p = sites[a].position;
    const Point& q = sites[b].position;
    if (p.x != q.x) return p.x < q.x;
    if (p.y != q.y) return p.y < q.y;
    return sites[a].id < sites[b].id;
  });

  const int first = order.front();
  std::fill(row_owner.begin(), row_owner.end(), first);
  top[first] = region.y0;
  bottom[first] = region.y1();
  active[first] = 1;

  for (int k = 1; k < n; ++k) {
    const int i = order[k];
    const double yi = sites[i].position.y;
    int o = -1;
    for (int s = 0; s < n; ++s) {
      if (active[s] && yi >= top[s] && yi < bottom[s]) o = s;
    }
    active[i] = 1;
    int skip_up = -1, skip_down = -1;
    const SegLine line = generate_weighted_line(sites[i], sites[o]);
    if (line.axis == SegAxis::vertical) {
      top[i] = top[o];
      bottom[i] = bottom[o];
      close(o, line.coordinate, i);
    } else {
      const double L = line.coordinate;
      if (yi > sites[o].position.y) {
        rows_in(L, bottom[o], [&](int j) { row_owner[j] = i; });
        top[i] = L;
        bottom[i] = bottom[o];
        bottom[o] = L;
        skip_up = o;
      } else {
        rows_in(top[o], L, [&](int j) { row_owner[j] = i; });
        top[i] = top[o];
        bottom[i] = L;
        top[o] = L;
        skip_down = o;
      }
    }

    for (int dir : {-1, +1}) {
      for (;;) {
        const double edge = dir < 0 ? top[i] : bottom[i];
        if (dir < 0 ? edge <= region.y0 : edge >= region.y1()) break;
        int u = -1;
        for (int s = 0; s < n; ++s) {
          if (s != i && active[s] && (dir < 0 ? bottom[s] == edge : top[s] == edge)) u = s;
        }
        if (u < 0) u = owner_near(edge, dir);
        if (u < 0 || u == i || u == (dir < 0 ? skip_up : skip_down)) break;
        if (!valid(i, u)) break;
        const SegLine l2 = generate_weighted_line(sites[i], sites[u]);
        if (l2.axis == SegAxis::vertical) {
          double front = -std::numeric_limits<double>::infinity();
          for (int j = 0; j < g.ny; ++j) {
            if (row_owner[j] == u) front = std::max(front, row_front[j]);
          }
          if (!(l2.coordinate > front)) break;
          top[i] = std::min(top[i], top[u]);
          bottom[i] = std::max(bottom[i], bottom[u]);
          close(u, l2.coordinate, i);
          continue;
        }
        const double L = l2.coordinate;
        const double xu = sites[u].position.x;
        if (dir < 0 ? L < edge : L > edge) {
          if (dir < 0) {
            rows_in(L, edge, [&](int j) { row_owner[j] = i; });
            bottom[u] = L;
            top[i] = L;
          } else {
            rows_in(edge, L, [&](int j) { row_owner[j] = i; });
            top[u] = L;
            bottom[i] = L;
          }
        } else if (dir < 0 ? L > edge : L < edge) {
          // Hand rows back to u while the frontier there is left of u's site.
          if (dir < 0) {
            double reach = edge;
            for (int j = 0; j < g.ny; ++j) {
              const double y = row_y(j);
              if (y < edge || y >= L) continue;
              if (!(row_front[j] < xu)) break;
              row_owner[j] = u;
              reach = std::min(L, y + 0.5 * grid_step);
            }
            if (reach > edge) {
              bottom[u] = reach;
              top[i] = reach;
            }
          } else {
            double reach = edge;
            for (int j = g.ny - 1; j >= 0; --j) {
              const double y = row_y(j);
              if (y >= edge || y < L) continue;
              if (!(row_front[j] < xu)) break;
              row_owner[j] = u;
              reach = std::max(L, y - 0.5 * grid_step);
            }
            if (reach < edge) {
              top[u] = reach;
              bottom[i] = reach;
            }
          }
        }
        break;
      }
    }
  }
  for (int s = 0; s < n; ++s) {
    if (active[s]) close(s, region.x1(), -1);
  }

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.point(i, j).x;
      for (const Span& sp : spans[j]) {
        if (x >= sp.x0 && x < sp.x1) {
          g.owner[static_cast<std::size_t>(j) * g.nx + i] = sp.site;
          break;
        }
      }
    }
  }
  return g;
}

}  // namespace ovt::testing
