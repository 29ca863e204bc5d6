#include "polydet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>
#include <string_view>

#include "polydet/error.hpp"

namespace polydet {

namespace {

using Wide = __int128;

struct IPoint {
  std::int64_t x;
  std::int64_t y;
};

IPoint lift(const LatticePoint& v, std::int64_t den) { return {v.x * den, v.y * den}; }

// Sign of the cross product (b - a) x (c - a).
int orient(IPoint a, IPoint b, IPoint c) {
  const Wide v = Wide(b.x - a.x) * Wide(c.y - a.y) - Wide(b.y - a.y) * Wide(c.x - a.x);
  return (v > 0) - (v < 0);
}

bool within_box(IPoint a, IPoint b, IPoint p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool on_segment(IPoint a, IPoint b, IPoint p) { return orient(a, b, p) == 0 && within_box(a, b, p); }

// Closed segments ab and cd share at least one point.
bool segments_meet(IPoint a, IPoint b, IPoint c, IPoint d) {
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && within_box(a, b, c)) || (o2 == 0 && within_box(a, b, d)) ||
         (o3 == 0 && within_box(c, d, a)) || (o4 == 0 && within_box(c, d, b));
}

// Even-odd crossing test for a single loop; the caller handles boundary points.
bool crosses_odd(const Loop& loop, std::int64_t den, IPoint p) {
  bool inside = false;
  const std::size_t n = loop.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const IPoint a = lift(loop[j], den);
    const IPoint b = lift(loop[i], den);
    if ((a.y > p.y) != (b.y > p.y)) {
      const Wide lhs = Wide(p.x - a.x) * Wide(b.y - a.y);
      const Wide rhs = Wide(p.y - a.y) * Wide(b.x - a.x);
      const bool left_of_crossing = (b.y > a.y) ? lhs < rhs : lhs > rhs;
      if (left_of_crossing) inside = !inside;
    }
  }
  return inside;
}

bool on_loop(const Loop& loop, std::int64_t den, IPoint p) {
  const std::size_t n = loop.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (on_segment(lift(loop[j], den), lift(loop[i], den), p)) return true;
  }
  return false;
}

Wide doubled_signed_area(const Loop& loop) {
  Wide sum = 0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    sum += Wide(loop[j].x) * Wide(loop[i].y) - Wide(loop[i].x) * Wide(loop[j].y);
  }
  return sum;
}

void validate_loop(const Loop& loop, std::size_t which) {
  const std::string tag = "loop " + std::to_string(which);
  if (loop.size() < 3) throw GeometryError(tag + ": fewer than 3 vertices");
  {
    std::set<LatticePoint> seen(loop.begin(), loop.end());
    if (seen.size() != loop.size()) throw GeometryError("non-simple loop (" + tag + ": repeated vertex)");
  }
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const IPoint a = lift(loop[i], 1);
    const IPoint b = lift(loop[(i + 1) % n], 1);
    const IPoint c = lift(loop[(i + 2) % n], 1);
    // Consecutive edges folding back onto each other.
    if (orient(a, b, c) == 0) {
      const Wide dot = Wide(a.x - b.x) * Wide(c.x - b.x) + Wide(a.y - b.y) * Wide(c.y - b.y);
      if (dot > 0) throw GeometryError("non-simple loop (" + tag + ": edge folds back)");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
      if (segments_meet(lift(loop[i], 1), lift(loop[(i + 1) % n], 1), lift(loop[j], 1),
                        lift(loop[(j + 1) % n], 1))) {
        throw GeometryError("non-simple loop (" + tag + ": self-intersection)");
      }
    }
  }
  if (doubled_signed_area(loop) == 0) throw GeometryError("non-simple loop (" + tag + ": zero area)");
}

bool loops_meet(const Loop& p, const Loop& q) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (segments_meet(lift(p[i], 1), lift(p[(i + 1) % p.size()], 1), lift(q[j], 1),
                        lift(q[(j + 1) % q.size()], 1))) {
        return true;
      }
    }
  }
  return false;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

LatticeRegion::LatticeRegion(std::vector<Loop> loops, std::int64_t scale) : scale_(scale) {
  if (scale <= 0) throw GeometryError("scale must be a positive integer");
  if (loops.empty()) throw GeometryError("region needs at least one loop");
  for (std::size_t k = 0; k < loops.size(); ++k) validate_loop(loops[k], k);
  for (std::size_t a = 0; a < loops.size(); ++a) {
    for (std::size_t b = a + 1; b < loops.size(); ++b) {
      if (loops_meet(loops[a], loops[b])) throw GeometryError("intersecting loops");
    }
  }
  for (std::size_t k = 1; k < loops.size(); ++k) {
    for (const auto& v : loops[k]) {
      const IPoint p = lift(v, 1);
      if (on_loop(loops[0], 1, p) || !crosses_odd(loops[0], 1, p)) {
        throw GeometryError("hole outside outer loop");
      }
      for (std::size_t other = 1; other < loops.size(); ++other) {
        if (other != k && crosses_odd(loops[other], 1, p)) throw GeometryError("nested holes");
      }
    }
  }
  // Region on the left: outer counterclockwise, holes clockwise.
  for (std::size_t k = 0; k < loops.size(); ++k) {
    const bool ccw = doubled_signed_area(loops[k]) > 0;
    if ((k == 0) != ccw) std::reverse(loops[k].begin(), loops[k].end());
  }
  base_ = std::move(loops);
  scaled_ = base_;
  for (auto& loop : scaled_) {
    for (auto& v : loop) v = {v.x * scale_, v.y * scale_};
  }
}

LatticeRegion LatticeRegion::scaled(std::int64_t factor) const {
  if (factor <= 0) throw GeometryError("scale factor must be positive");
  return LatticeRegion(base_, scale_ * factor);
}

bool LatticeRegion::on_boundary(const RationalPoint& p) const noexcept {
  const IPoint q{p.x, p.y};
  return std::any_of(scaled_.begin(), scaled_.end(),
                     [&](const Loop& loop) { return on_loop(loop, p.den, q); });
}

bool LatticeRegion::contains(const RationalPoint& p) const noexcept {
  const IPoint q{p.x, p.y};
  bool inside = false;
  for (const auto& loop : scaled_) {
    if (on_loop(loop, p.den, q)) return false;
    if (crosses_odd(loop, p.den, q)) inside = !inside;
  }
  return inside;
}

bool LatticeRegion::segment_touches_boundary(const RationalPoint& a,
                                             const RationalPoint& b) const noexcept {
  // Bring both endpoints to a common denominator.
  const std::int64_t den = std::lcm(a.den, b.den);
  const IPoint pa{a.x * (den / a.den), a.y * (den / a.den)};
  const IPoint pb{b.x * (den / b.den), b.y * (den / b.den)};
  for (const auto& loop : scaled_) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      if (segments_meet(pa, pb, lift(loop[j], den), lift(loop[i], den))) return true;
    }
  }
  return false;
}

BoundingBox LatticeRegion::bounds() const noexcept {
  BoundingBox box{scaled_[0][0].x, scaled_[0][0].y, scaled_[0][0].x, scaled_[0][0].y};
  for (const auto& v : scaled_[0]) {
    box.xmin = std::min(box.xmin, v.x);
    box.xmax = std::max(box.xmax, v.x);
    box.ymin = std::min(box.ymin, v.y);
    box.ymax = std::max(box.ymax, v.y);
  }
  return box;
}

int LatticeRegion::complement_component(const RationalPoint& p) const noexcept {
  const IPoint q{p.x, p.y};
  if (on_boundary(p) || contains(p)) return 0;
  for (std::size_t k = 1; k < scaled_.size(); ++k) {
    if (crosses_odd(scaled_[k], p.den, q)) return static_cast<int>(k);
  }
  return -1;
}

GridIndex::GridIndex(BoundingBox box)
    : box_(box),
      width_(box.xmax - box.xmin + 1),
      slots_(static_cast<std::size_t>(width_ * (box.ymax - box.ymin + 1)), -1) {}

int GridIndex::find(LatticePoint p) const noexcept {
  if (p.x < box_.xmin || p.x > box_.xmax || p.y < box_.ymin || p.y > box_.ymax) return -1;
  return slots_[static_cast<std::size_t>((p.y - box_.ymin) * width_ + (p.x - box_.xmin))];
}

void GridIndex::set(LatticePoint p, int index) {
  slots_.at(static_cast<std::size_t>((p.y - box_.ymin) * width_ + (p.x - box_.xmin))) = index;
}

int DomainGraph::edge_between(int i, int j) const noexcept {
  if (i < 0 || static_cast<std::size_t>(i) >= neighbor.size()) return -1;
  for (int d = 0; d < 4; ++d) {
    if (neighbor[i][d] == j) return edge_of[i][d];
  }
  return -1;
}

bool unit_segment_in_region(const LatticeRegion& region, LatticePoint p, LatticePoint q) {
  if (std::llabs(p.x - q.x) + std::llabs(p.y - q.y) != 1) {
    throw GeometryError("unit_segment_in_region: points are not unit-separated");
  }
  if (!region.contains(p) || !region.contains(q)) return false;
  const RationalPoint mid{p.x + q.x, p.y + q.y, 2};
  if (!region.contains(mid)) return false;
  return !region.segment_touches_boundary(RationalPoint{p.x, p.y, 1}, RationalPoint{q.x, q.y, 1});
}

DomainGraph build_graph(const LatticeRegion& region) {
  const BoundingBox box = region.bounds();
  DomainGraph g;
  g.index = GridIndex(box);
  for (std::int64_t y = box.ymin + 1; y < box.ymax; ++y) {
    for (std::int64_t x = box.xmin + 1; x < box.xmax; ++x) {
      const LatticePoint p{x, y};
      if (region.contains(p)) {
        g.index.set(p, static_cast<int>(g.vertices.size()));
        g.vertices.push_back(p);
      }
    }
  }
  if (g.vertices.empty()) throw GeometryError("region contains no lattice points");

  const std::size_t n = g.vertices.size();
  g.neighbor.assign(n, {-1, -1, -1, -1});
  g.edge_of.assign(n, {-1, -1, -1, -1});
  std::set<LatticePoint> outside;
  for (std::size_t i = 0; i < n; ++i) {
    const LatticePoint p = g.vertices[i];
    for (int d = 0; d < 4; ++d) {
      const LatticePoint q{p.x + kDirections[d].x, p.y + kDirections[d].y};
      const int j = g.find(q);
      if (j < 0) {
        outside.insert(q);
        continue;
      }
      // Each edge is created once, from its lower-indexed endpoint.
      if (d >= 2) continue;
      if (!unit_segment_in_region(region, p, q)) continue;
      const int e = static_cast<int>(g.edges.size());
      g.edges.push_back({static_cast<int>(i), j});
      g.neighbor[i][d] = j;
      g.edge_of[i][d] = e;
      g.neighbor[j][d + 2] = static_cast<int>(i);
      g.edge_of[j][d + 2] = e;
    }
  }
  g.ext_boundary.assign(outside.begin(), outside.end());
  std::sort(g.ext_boundary.begin(), g.ext_boundary.end(), [](LatticePoint a, LatticePoint b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  return g;
}

GeometrySummary summarize_geometry(const LatticeRegion& region) {
  GeometrySummary s;
  Wide area2 = 0;
  for (const auto& raw : region.loops()) {
    area2 += doubled_signed_area(raw);
    // Drop collinear pass-through vertices; they are not corners.
    Loop loop;
    const std::size_t n = raw.size();
    for (std::size_t i = 0; i < n; ++i) {
      const IPoint a = lift(raw[(i + n - 1) % n], 1);
      const IPoint b = lift(raw[i], 1);
      const IPoint c = lift(raw[(i + 1) % n], 1);
      if (orient(a, b, c) != 0) loop.push_back(raw[i]);
    }
    const std::size_t m = loop.size();
    for (std::size_t i = 0; i < m; ++i) {
      const LatticePoint a = loop[(i + m - 1) % m];
      const LatticePoint b = loop[i];
      const LatticePoint c = loop[(i + 1) % m];
      const double d1x = double(b.x - a.x), d1y = double(b.y - a.y);
      const double d2x = double(c.x - b.x), d2y = double(c.y - b.y);
      const double turn = std::atan2(d1x * d2y - d1y * d2x, d1x * d2x + d1y * d2y);
      s.corners.push_back({b, std::numbers::pi - turn});
    }
    for (std::size_t i = 0; i < n; ++i) {
      const LatticePoint a = raw[i];
      const LatticePoint b = raw[(i + 1) % n];
      s.perimeter += std::hypot(double(b.x - a.x), double(b.y - a.y));
    }
  }
  s.doubled_area = static_cast<std::int64_t>(area2);
  return s;
}

std::int64_t boundary_lattice_points(const LatticeRegion& region) {
  std::int64_t count = 0;
  for (const auto& loop : region.loops()) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = loop[i];
      const auto& b = loop[(i + 1) % n];
      count += std::gcd(std::llabs(b.x - a.x), std::llabs(b.y - a.y));
    }
  }
  return count;
}

namespace {

constexpr int kClassResolution = 4;  // samples per lattice unit
constexpr int kClassRadius = 2 * kClassResolution;

const std::vector<std::array<int, 2>>& disk_offsets() {
  static const std::vector<std::array<int, 2>> offsets = [] {
    std::vector<std::array<int, 2>> out;
    for (int j = -kClassRadius; j <= kClassRadius; ++j) {
      for (int i = -kClassRadius; i <= kClassRadius; ++i) {
        if (i * i + j * j <= kClassRadius * kClassRadius) out.push_back({i, j});
      }
    }
    return out;
  }();
  return offsets;
}

}  // namespace

std::string boundary_class_key(const LatticeRegion& region, LatticePoint x) {
  const auto& offsets = disk_offsets();
  // Sample membership once on the full disk, then read it back under each
  // of the eight lattice symmetries.
  const int side = 2 * kClassRadius + 1;
  std::vector<char> inside(static_cast<std::size_t>(side * side), 0);
  auto slot = [side](int i, int j) {
    return static_cast<std::size_t>((j + kClassRadius) * side + (i + kClassRadius));
  };
  for (const auto& [i, j] : offsets) {
    inside[slot(i, j)] = region.contains(RationalPoint{kClassResolution * x.x + i,
                                                      kClassResolution * x.y + j, kClassResolution})
                             ? '1'
                             : '0';
  }
  constexpr std::array<std::array<int, 4>, 8> transforms{{{1, 0, 0, 1},
                                                          {0, -1, 1, 0},
                                                          {-1, 0, 0, -1},
                                                          {0, 1, -1, 0},
                                                          {-1, 0, 0, 1},
                                                          {1, 0, 0, -1},
                                                          {0, 1, 1, 0},
                                                          {0, -1, -1, 0}}};
  std::string best;
  for (const auto& m : transforms) {
    std::string bits;
    bits.reserve(offsets.size());
    for (const auto& [i, j] : offsets) {
      bits.push_back(inside[slot(m[0] * i + m[1] * j, m[2] * i + m[3] * j)]);
    }
    if (best.empty() || bits < best) best = std::move(bits);
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(best)));
  return hex;
}

std::map<std::string, std::int64_t> boundary_class_counts(const LatticeRegion& region,
                                                          const DomainGraph& graph) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& x : graph.ext_boundary) ++counts[boundary_class_key(region, x)];
  return counts;
}

}  // namespace polydet
