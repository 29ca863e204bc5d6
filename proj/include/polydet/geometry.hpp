#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace polydet {

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// Point (x / den, y / den). den = 2 is the doubled representation used for
/// midpoints and punctures.
struct RationalPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t den = 1;
};

using Loop = std::vector<LatticePoint>;

/// Lattice directions in the order +x, +y, -x, -y.
inline constexpr std::array<LatticePoint, 4> kDirections{
    LatticePoint{1, 0}, LatticePoint{0, 1}, LatticePoint{-1, 0}, LatticePoint{0, -1}};

struct BoundingBox {
  std::int64_t xmin = 0, ymin = 0, xmax = 0, ymax = 0;
};

/// Open polygonal region L*P bounded by integer-vertex loops, even-odd rule.
///
/// The first loop is the outer boundary, the rest are holes. Loops are
/// validated on construction and normalized so that the region lies to the
/// left of every boundary edge (outer counterclockwise, holes clockwise).
/// All predicates are exact integer arithmetic.
class LatticeRegion {
 public:
  LatticeRegion(std::vector<Loop> loops, std::int64_t scale = 1);

  const std::vector<Loop>& base_loops() const noexcept { return base_; }
  const std::vector<Loop>& loops() const noexcept { return scaled_; }
  std::int64_t scale() const noexcept { return scale_; }

  /// Region with scale multiplied by `factor`.
  LatticeRegion scaled(std::int64_t factor) const;

  bool contains(const RationalPoint& p) const noexcept;
  bool contains(LatticePoint p) const noexcept { return contains(RationalPoint{p.x, p.y, 1}); }
  bool on_boundary(const RationalPoint& p) const noexcept;
  /// True when the closed segment ab meets any boundary edge.
  bool segment_touches_boundary(const RationalPoint& a, const RationalPoint& b) const noexcept;

  BoundingBox bounds() const noexcept;
  /// Index of the hole loop (>= 1) strictly containing p, 0 if p is in the
  /// region or on its boundary, -1 if p is outside the outer loop.
  int complement_component(const RationalPoint& p) const noexcept;

 private:
  std::vector<Loop> base_;
  std::vector<Loop> scaled_;
  std::int64_t scale_;
};

/// Dense lookup from lattice point to vertex index over a bounding box.
class GridIndex {
 public:
  GridIndex() = default;
  explicit GridIndex(BoundingBox box);
  int find(LatticePoint p) const noexcept;
  void set(LatticePoint p, int index);

 private:
  BoundingBox box_{};
  std::int64_t width_ = 0;
  std::vector<std::int32_t> slots_;
};

struct DomainGraph {
  std::vector<LatticePoint> vertices;
  std::vector<std::array<int, 2>> edges;        // i < j
  std::vector<std::array<int, 4>> neighbor;     // per kDirections, -1 if no edge
  std::vector<std::array<int, 4>> edge_of;      // edge id per direction, -1 if none
  std::vector<LatticePoint> ext_boundary;
  GridIndex index;

  std::size_t size() const noexcept { return vertices.size(); }
  int find(LatticePoint p) const noexcept { return index.find(p); }
  /// Edge id joining vertices i and j, or -1.
  int edge_between(int i, int j) const noexcept;
};

struct Corner {
  LatticePoint vertex;
  double angle = 0.0;  // interior angle measured inside the region
};

struct GeometrySummary {
  std::int64_t doubled_area = 0;  // exact 2*area at the region's scale
  double perimeter = 0.0;
  std::vector<Corner> corners;

  double area() const noexcept { return 0.5 * static_cast<double>(doubled_area); }
};

bool unit_segment_in_region(const LatticeRegion& region, LatticePoint p, LatticePoint q);
DomainGraph build_graph(const LatticeRegion& region);
GeometrySummary summarize_geometry(const LatticeRegion& region);

/// Lattice points on the boundary loops (Pick's B).
std::int64_t boundary_lattice_points(const LatticeRegion& region);

/// Shape class of B_2(x) ∩ region for an exterior-boundary site x, as a
/// stable 16-hex-digit key. Shapes equal up to a lattice symmetry (rotation
/// by 90 degrees or reflection) share a key.
std::string boundary_class_key(const LatticeRegion& region, LatticePoint x);
std::map<std::string, std::int64_t> boundary_class_counts(const LatticeRegion& region,
                                                          const DomainGraph& graph);

}  // namespace polydet
