#pragma once

#include <cstdint>
#include <vector>

#include "ovt/geom.hpp"
#include "ovt/random.hpp"
#include "ovt/segmentation.hpp"
#include "ovt/sweep.hpp"

namespace ovt::testing {

inline Site make_site(int id, double x, double y, double w = 0.0, double value = 1.0) {
  Site s;
  s.id = id;
  s.position = {x, y};
  s.weight = w;
  s.target_value = value;
  return s;
}

// Random sites strictly inside `r`, weights in [0, max_weight].
inline std::vector<Site> random_sites(std::size_t n, const Rect& r, std::uint64_t seed,
                                      double max_weight = 0.0) {
  SplitMix64 rng(seed);
  std::vector<Site> out;
  for (std::size_t k = 0; k < n; ++k) {
    Point p;
    do {
      p = {rng.uniform(r.x0, r.x1()), rng.uniform(r.y0, r.y1())};
    } while (!r.strictly_contains(p));
    out.push_back(make_site(static_cast<int>(k), p.x, p.y, rng.uniform(0.0, max_weight),
                            rng.uniform(0.1, 1.0)));
  }
  return out;
}

inline double total_area(const Diagram& d) {
  double a = 0.0;
  for (const auto& c : d.cells) a += area(c);
  return a;
}

// Largest pairwise interior overlap between cells, as an area.
inline double max_overlap(const Diagram& d) {
  double worst = 0.0;
  for (std::size_t i = 0; i < d.cells.size(); ++i) {
    const Rect bi = d.cells[i].bbox();
    for (std::size_t j = i + 1; j < d.cells.size(); ++j) {
      const Rect bj = d.cells[j].bbox();
      const double w = std::min(bi.x1(), bj.x1()) - std::max(bi.x0, bj.x0);
      const double h = std::min(bi.y1(), bj.y1()) - std::max(bi.y0, bj.y0);
      if (w <= 0.0 || h <= 0.0) continue;
      double a = 0.0;
      for (const auto& piece : clip(d.cells[i], d.cells[j])) a += area(piece);
      worst = std::max(worst, a);
    }
  }
  return worst;
}

}  // namespace ovt::testing
