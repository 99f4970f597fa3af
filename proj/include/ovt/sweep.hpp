#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ovt/geom.hpp"
#include "ovt/random.hpp"
#include "ovt/segmentation.hpp"

namespace ovt {

class SweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One piece of the frontier: the y-range [y_start, y_end) is assigned up to
/// frontier_x and the region right of it is pending for `owner`.
struct SkySegment {
  double y_start = 0.0;
  double y_end = 0.0;
  double frontier_x = 0.0;
  int owner = -1;  // index of the site in the diagram's input list
};

/// Staircase frontier of the active sites. Segments partition the region's
/// vertical extent; each active owner holds one contiguous run of segments
/// whose y-range contains its site.
class Skyline {
 public:
  Skyline(const Rect& region, std::size_t capacity, int first_owner)
      : region_(region),
        lo_(capacity, std::numeric_limits<double>::quiet_NaN()),
        hi_(capacity, std::numeric_limits<double>::quiet_NaN()),
        active_(capacity, 0) {
    segs_.push_back({region.y0, region.y1(), region.x0, first_owner});
    set_interval(first_owner, region.y0, region.y1());
  }

  const Rect& region() const { return region_; }
  std::span<const SkySegment> segments() const { return segs_; }
  bool is_active(int owner) const { return active_[static_cast<std::size_t>(owner)] != 0; }
  std::size_t active_count() const { return nactive_; }
  double top_of(int owner) const { return lo_[static_cast<std::size_t>(owner)]; }
  double bottom_of(int owner) const { return hi_[static_cast<std::size_t>(owner)]; }

  /// Index of the segment whose half-open range [y_start, y_end) holds y.
  std::size_t find(double y) const {
    auto it = std::upper_bound(segs_.begin(), segs_.end(), y,
                               [](double v, const SkySegment& s) { return v < s.y_start; });
    if (it == segs_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(segs_.begin(), it)) - 1;
  }

  /// Half-open index range of the segments between two existing boundaries.
  std::pair<std::size_t, std::size_t> range(double y_from, double y_to) const {
    auto first = std::lower_bound(segs_.begin(), segs_.end(), y_from,
                                  [](const SkySegment& s, double v) { return s.y_start < v; });
    auto last = std::lower_bound(first, segs_.end(), y_to,
                                 [](const SkySegment& s, double v) { return s.y_start < v; });
    return {static_cast<std::size_t>(first - segs_.begin()),
            static_cast<std::size_t>(last - segs_.begin())};
  }

  std::pair<std::size_t, std::size_t> owned(int owner) const {
    return range(top_of(owner), bottom_of(owner));
  }

  double max_frontier(int owner) const {
    auto [a, b] = owned(owner);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = a; k < b; ++k) m = std::max(m, segs_[k].frontier_x);
    return m;
  }

  /// Owner of the segment ending at y (the one above), or -1 at the region top.
  int owner_above(double y) const {
    if (y <= region_.y0) return -1;
    return segs_[find(y) - (segs_[find(y)].y_start == y ? 1 : 0)].owner;
  }

  /// Owner of the segment starting at y, or -1 at the region bottom.
  int owner_below(double y) const {
    if (y >= region_.y1()) return -1;
    return segs_[find(y)].owner;
  }

  /// Makes y a segment boundary; y must lie strictly inside the region.
  void split_at(double y) {
    const std::size_t k = find(y);
    SkySegment& s = segs_[k];
    if (s.y_start == y) return;
    SkySegment tail = s;
    tail.y_start = y;
    s.y_end = y;
    segs_.insert(segs_.begin() + static_cast<std::ptrdiff_t>(k) + 1, tail);
  }

  void assign(double y_from, double y_to, int owner) {
    auto [a, b] = range(y_from, y_to);
    for (std::size_t k = a; k < b; ++k) segs_[k].owner = owner;
  }

  void set_frontier(double y_from, double y_to, double x) {
    auto [a, b] = range(y_from, y_to);
    for (std::size_t k = a; k < b; ++k) segs_[k].frontier_x = x;
  }

  void set_interval(int owner, double lo, double hi) {
    const auto i = static_cast<std::size_t>(owner);
    if (!active_[i]) ++nactive_;
    active_[i] = 1;
    lo_[i] = lo;
    hi_[i] = hi;
  }

  void deactivate(int owner) {
    const auto i = static_cast<std::size_t>(owner);
    if (active_[i]) --nactive_;
    active_[i] = 0;
  }

  /// Merges neighbouring segments with the same owner and frontier.
  void coalesce() {
    std::size_t w = 0;
    for (std::size_t r = 1; r < segs_.size(); ++r) {
      if (segs_[r].owner == segs_[w].owner && segs_[r].frontier_x == segs_[w].frontier_x) {
        segs_[w].y_end = segs_[r].y_end;
      } else {
        segs_[++w] = segs_[r];
      }
    }
    segs_.resize(w + 1);
  }

 private:
  Rect region_;
  std::vector<SkySegment> segs_;
  std::vector<double> lo_, hi_;
  std::vector<char> active_;
  std::size_t nactive_ = 0;
};

/// Checks the partition and ownership invariants; returns an empty string when
/// they hold, otherwise a description of the first violation.
inline std::string skyline_violation(const Skyline& sky) {
  const auto segs = sky.segments();
  const Rect& r = sky.region();
  if (segs.empty()) return "empty skyline";
  if (segs.front().y_start != r.y0) return "skyline does not start at region top";
  if (segs.back().y_end != r.y1()) return "skyline does not end at region bottom";
  for (std::size_t k = 0; k < segs.size(); ++k) {
    if (!(segs[k].y_start < segs[k].y_end)) return "degenerate segment";
    if (k > 0 && segs[k - 1].y_end != segs[k].y_start) return "gap or overlap between segments";
    if (segs[k].owner < 0 || !sky.is_active(segs[k].owner)) return "segment owned by closed site";
    if (segs[k].y_start < sky.top_of(segs[k].owner) || segs[k].y_end > sky.bottom_of(segs[k].owner))
      return "segment outside its owner's interval";
  }
  return {};
}

struct DiagCounters {
  std::size_t pairs_checked = 0;
  std::size_t valid_neighbors = 0;
};

enum class EventKind {
  horizontal_line,  // pending region moved between vertically separated sites
  vertical_line,    // left site of a side-by-side pair closed
  final_close,      // site closed against the region's right edge
};

struct SweepEvent {
  EventKind kind;
  int new_site;  // id of the site that triggered the event (-1 for final_close)
  int old_site;  // id of the paired earlier site
  SegLine line;
};

/// Weighted orthogonal Voronoi diagram. cells[k] belongs to the k-th input site.
struct Diagram {
  std::vector<RectilinearPolygon> cells;
  DiagCounters counters;
  std::vector<SweepEvent> events;
};

struct SweepOptions {
  /// Perturb coincident sites instead of failing (1e-6 of the region diagonal).
  bool jitter = false;
  std::uint64_t jitter_seed = 0;
  bool record_events = false;
  /// Called with the skyline before the first and after every later site.
  std::function<void(const Skyline&)> on_step;
};

/// Closes `owner` with a vertical line at x: the cell spans from the owner's
/// frontier staircase to x over the owner's y-interval. The interval is handed to
/// `successor` (or retired when successor is -1) with frontier x.
inline RectilinearPolygon close_site(Skyline& sky, int owner, const SegLine& vline,
                                     int successor = -1) {
  if (vline.axis != SegAxis::vertical) throw SweepError("closing line must be vertical");
  if (!sky.is_active(owner)) throw SweepError("closing a site that owns no skyline segment");
  const double x = vline.coordinate;
  const double top = sky.top_of(owner), bottom = sky.bottom_of(owner);
  auto [a, b] = sky.owned(owner);
  if (a >= b) throw SweepError("closing a site that owns no skyline segment");
  const auto segs = sky.segments();
  std::vector<Point> ring;
  ring.reserve(2 * (b - a) + 2);
  ring.push_back({x, top});
  ring.push_back({x, bottom});
  for (std::size_t k = b; k-- > a;) {
    if (!(segs[k].frontier_x < x)) throw SweepError("closing line left of the skyline");
    ring.push_back({segs[k].frontier_x, segs[k].y_end});
    ring.push_back({segs[k].frontier_x, segs[k].y_start});
  }
  RectilinearPolygon cell(std::move(ring));
  sky.set_frontier(top, bottom, x);
  sky.deactivate(owner);
  if (successor >= 0) {
    sky.assign(top, bottom, successor);
    if (sky.is_active(successor)) {
      sky.set_interval(successor, std::min(top, sky.top_of(successor)),
                       std::max(bottom, sky.bottom_of(successor)));
    } else {
      sky.set_interval(successor, top, bottom);
    }
  }
  return cell;
}

/// Closes every remaining active site against the region's right edge.
inline std::vector<std::pair<int, RectilinearPolygon>> finalize_open_sites(Skyline& sky) {
  std::vector<int> owners;
  for (const SkySegment& s : sky.segments()) {
    if (owners.empty() || owners.back() != s.owner) owners.push_back(s.owner);
  }
  std::vector<std::pair<int, RectilinearPolygon>> out;
  out.reserve(owners.size());
  const SegLine right{SegAxis::vertical, sky.region().x1()};
  for (int o : owners) out.emplace_back(o, close_site(sky, o, right));
  return out;
}

namespace detail {

// Counts points in a rank range whose y lies in an open interval: a merge-sort
// tree stored level by level, level L holding sorted blocks of 2^L ranks.
class RangeCounter {
 public:
  explicit RangeCounter(const std::vector<double>& ys) {
    size_ = 1;
    while (size_ < ys.size()) size_ <<= 1;
    levels_.emplace_back(size_, std::numeric_limits<double>::infinity());
    std::copy(ys.begin(), ys.end(), levels_[0].begin());
    for (std::size_t width = 1; width < size_; width <<= 1) {
      const auto& prev = levels_.back();
      std::vector<double> next(size_);
      for (std::size_t b = 0; b < size_; b += 2 * width) {
        std::merge(prev.begin() + static_cast<std::ptrdiff_t>(b),
                   prev.begin() + static_cast<std::ptrdiff_t>(b + width),
                   prev.begin() + static_cast<std::ptrdiff_t>(b + width),
                   prev.begin() + static_cast<std::ptrdiff_t>(b + 2 * width),
                   next.begin() + static_cast<std::ptrdiff_t>(b));
      }
      levels_.push_back(std::move(next));
    }
  }

  /// Any rank in [lo, hi) with y strictly inside (y0, y1)?
  bool any(std::size_t lo, std::size_t hi, double y0, double y1) const {
    if (lo >= hi || !(y0 < y1)) return false;
    auto hit = [&](std::size_t level, std::size_t block) {
      const auto& v = levels_[level];
      const auto first = v.begin() + static_cast<std::ptrdiff_t>(block << level);
      const auto last = first + (std::ptrdiff_t{1} << level);
      auto it = std::upper_bound(first, last, y0);
      return it != last && *it < y1;
    };
    for (std::size_t level = 0, l = lo, r = hi; l < r; ++level, l >>= 1, r >>= 1) {
      if ((l & 1) && hit(level, l++)) return true;
      if ((r & 1) && hit(level, --r)) return true;
    }
    return false;
  }

 private:
  std::size_t size_ = 1;
  std::vector<std::vector<double>> levels_;
};

inline std::vector<Site> resolve_coincident(std::span<const Site> input, const Rect& region,
                                            const SweepOptions& opt) {
  std::vector<Site> sites(input.begin(), input.end());
  SplitMix64 rng(opt.jitter_seed);
  const double mag = 1e-6 * region.diagonal();
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<std::size_t> order(sites.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return sites[a].position.x < sites[b].position.x;
    });
    bool clash = false;
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (std::size_t m = k + 1; m < order.size(); ++m) {
        Site& s = sites[order[m]];
        const Site& t = sites[order[k]];
        if (s.position.x - t.position.x > kTol) break;
        if (!near(s.position, t.position)) continue;
        if (!opt.jitter) {
          throw CoincidentSitesError("sites " + std::to_string(t.id) + " and " +
                                     std::to_string(s.id) + " share a position");
        }
        clash = true;
        for (;;) {
          const Point p{s.position.x + rng.uniform(-mag, mag),
                        s.position.y + rng.uniform(-mag, mag)};
          if (region.strictly_contains(p)) {
            s.position = p;
            break;
          }
        }
      }
    }
    if (!clash) return sites;
  }
  throw CoincidentSitesError("could not separate coincident sites by jitter");
}

}  // namespace detail

/// Builds the weighted orthogonal Voronoi diagram of `input` over `region` with
/// a left-to-right sweep. Each new site takes its pending region from the owner of
/// the skyline interval holding its y, then grows or trims against the owners
/// directly above and below while they remain valid neighbours.
inline Diagram compute_wov_diagram(std::span<const Site> input, const Rect& region,
                                   const SweepOptions& opt = {}) {
  require_valid(region);
  if (input.empty()) throw SweepError("diagram needs at least one site");
  for (const Site& s : input) {
    if (!region.strictly_contains(s.position))
      throw SweepError("site " + std::to_string(s.id) + " lies outside the region");
    if (!(s.weight >= 0.0) || !std::isfinite(s.weight))
      throw SweepError("site " + std::to_string(s.id) + " has an invalid weight");
  }
  const std::vector<Site> sites = detail::resolve_coincident(input, region, opt);
  const std::size_t n = sites.size();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Site& sa = sites[static_cast<std::size_t>(a)];
    const Site& sb = sites[static_cast<std::size_t>(b)];
    if (sa.position.x != sb.position.x) return sa.position.x < sb.position.x;
    if (sa.position.y != sb.position.y) return sa.position.y < sb.position.y;
    return sa.id < sb.id;
  });
  std::vector<double> sorted_x(n), sorted_y(n);
  for (std::size_t k = 0; k < n; ++k) {
    sorted_x[k] = sites[static_cast<std::size_t>(order[k])].position.x;
    sorted_y[k] = sites[static_cast<std::size_t>(order[k])].position.y;
  }
  const detail::RangeCounter counter(sorted_y);

  auto site = [&](int k) -> const Site& { return sites[static_cast<std::size_t>(k)]; };
  auto valid_pair = [&](int a, int b) {
    const Point& p = site(a).position;
    const Point& q = site(b).position;
    const double x0 = std::min(p.x, q.x) + kTol, x1 = std::max(p.x, q.x) - kTol;
    const auto lo = static_cast<std::size_t>(
        std::upper_bound(sorted_x.begin(), sorted_x.end(), x0) - sorted_x.begin());
    const auto hi = static_cast<std::size_t>(
        std::lower_bound(sorted_x.begin(), sorted_x.end(), x1) - sorted_x.begin());
    return !counter.any(lo, hi, std::min(p.y, q.y) + kTol, std::max(p.y, q.y) - kTol);
  };

  Diagram out;
  out.cells.resize(n);
  std::vector<char> has_cell(n, 0);
  Skyline sky(region, n, order.front());

  auto record = [&](EventKind kind, int a, int b, const SegLine& line) {
    if (opt.record_events) {
      out.events.push_back({kind, a < 0 ? -1 : site(a).id, site(b).id, line});
    }
  };
  auto emit = [&](int owner, RectilinearPolygon cell) {
    out.cells[static_cast<std::size_t>(owner)] = std::move(cell);
    has_cell[static_cast<std::size_t>(owner)] = 1;
  };

  if (opt.on_step) opt.on_step(sky);

  for (std::size_t k = 1; k < n; ++k) {
    const int i = order[k];
    const Site& si = site(i);
    const double yi = si.position.y;
    out.counters.pairs_checked += sky.active_count();

    // Pair with the owner of the interval holding the new site.
    const int o = sky.segments()[sky.find(yi)].owner;
    int skip_up = -1, skip_down = -1;
    {
      const SegLine line = generate_weighted_line(si, site(o));
      if (line.axis == SegAxis::vertical) {
        emit(o, close_site(sky, o, line, i));
        record(EventKind::vertical_line, i, o, line);
      } else {
        const double L = line.coordinate;
        sky.split_at(L);
        const double top = sky.top_of(o), bottom = sky.bottom_of(o);
        if (yi > site(o).position.y) {
          sky.assign(L, bottom, i);
          sky.set_interval(i, L, bottom);
          sky.set_interval(o, top, L);
          skip_up = o;
        } else {
          sky.assign(top, L, i);
          sky.set_interval(i, top, L);
          sky.set_interval(o, L, bottom);
          skip_down = o;
        }
        record(EventKind::horizontal_line, i, o, line);
      }
      ++out.counters.valid_neighbors;
    }

    // Grow or trim against the neighbours above (dir < 0) and below (dir > 0).
    for (int dir : {-1, +1}) {
      for (;;) {
        const double edge = dir < 0 ? sky.top_of(i) : sky.bottom_of(i);
        const int u = dir < 0 ? sky.owner_above(edge) : sky.owner_below(edge);
        if (u < 0 || u == (dir < 0 ? skip_up : skip_down)) break;
        if (!valid_pair(i, u)) break;
        const Site& su = site(u);
        const SegLine line = generate_weighted_line(si, su);
        if (line.axis == SegAxis::vertical) {
          if (!(line.coordinate > sky.max_frontier(u))) break;
          emit(u, close_site(sky, u, line, i));
          record(EventKind::vertical_line, i, u, line);
          ++out.counters.valid_neighbors;
          continue;
        }
        const double L = line.coordinate;
        bool changed = false;
        if (dir < 0 ? L < edge : L > edge) {
          // Take the far part of u's interval.
          sky.split_at(L);
          if (dir < 0) {
            sky.assign(L, edge, i);
            sky.set_interval(u, sky.top_of(u), L);
            sky.set_interval(i, L, sky.bottom_of(i));
          } else {
            sky.assign(edge, L, i);
            sky.set_interval(u, L, sky.bottom_of(u));
            sky.set_interval(i, sky.top_of(i), L);
          }
          changed = true;
        } else if (dir < 0 ? L > edge : L < edge) {
          // Hand back the part of i's interval beyond the line, as far as the
          // frontier there is still left of u's site.
          sky.split_at(L);
          const auto segs = sky.segments();
          double reach = edge;
          if (dir < 0) {
            for (std::size_t s = sky.find(edge); s < segs.size() && segs[s].y_start < L; ++s) {
              if (!(segs[s].frontier_x < su.position.x)) break;
              reach = segs[s].y_end;
            }
            if (reach > edge) {
              sky.assign(edge, reach, u);
              sky.set_interval(u, sky.top_of(u), reach);
              sky.set_interval(i, reach, sky.bottom_of(i));
              changed = true;
            }
          } else {
            for (std::size_t s = sky.find(edge); s-- > 0 && segs[s].y_end > L;) {
              if (!(segs[s].frontier_x < su.position.x)) break;
              reach = segs[s].y_start;
            }
            if (reach < edge) {
              sky.assign(reach, edge, u);
              sky.set_interval(u, reach, sky.bottom_of(u));
              sky.set_interval(i, sky.top_of(i), reach);
              changed = true;
            }
          }
        }
        if (changed) {
          record(EventKind::horizontal_line, i, u, line);
          ++out.counters.valid_neighbors;
        }
        break;
      }
    }
    sky.coalesce();
    if (opt.on_step) opt.on_step(sky);
  }

  for (auto& [owner, cell] : finalize_open_sites(sky)) {
    record(EventKind::final_close, -1, owner, {SegAxis::vertical, region.x1()});
    emit(owner, std::move(cell));
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!has_cell[k]) throw SweepError("site " + std::to_string(sites[k].id) + " got no cell");
  }
  return out;
}

}  // namespace ovt
