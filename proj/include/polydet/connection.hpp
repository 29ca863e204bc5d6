#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polydet/geometry.hpp"

namespace polydet {

/// Direction of the branch-cut ray attached to every puncture.
enum class CutDirection { PosX, NegX, PosY, NegY };

CutDirection parse_cut_direction(std::string_view text);
std::string to_string(CutDirection dir);

/// Puncture in doubled coordinates; both coordinates must be odd.
struct Puncture {
  std::int64_t x2 = 0;
  std::int64_t y2 = 0;
  friend auto operator<=>(const Puncture&, const Puncture&) = default;
};

struct PunctureInfo {
  Puncture point;
  /// Hole loop index (>= 1) holding the puncture, or -1 for the unbounded
  /// complement component. Punctures there never change a monodromy.
  int component = -1;
};

class PunctureSet {
 public:
  PunctureSet() = default;
  /// Validates every puncture against `region` (outside the open region,
  /// off the boundary, odd doubled coordinates).
  PunctureSet(const LatticeRegion& region, std::vector<Puncture> points);

  std::span<const PunctureInfo> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  /// Punctures sitting in bounded complement components.
  std::size_t effective_count() const noexcept;

 private:
  std::vector<PunctureInfo> points_;
};

/// Maps base-geometry punctures onto L*region. Coordinates are scaled by L;
/// when that makes a coordinate an integer it is shifted by +1/2 (or -1/2)
/// while staying in the same complement component.
std::vector<Puncture> scale_punctures(std::span<const Puncture> base, std::int64_t factor,
                                      const LatticeRegion& base_region,
                                      const LatticeRegion& scaled_region);

/// Whether the unit step p -> q crosses the cut ray of `s`.
bool cut_crosses(const Puncture& s, CutDirection dir, LatticePoint p, LatticePoint q) noexcept;

/// (-1)^(number of cut rays crossed by the unit step p -> q).
int step_sign(std::span<const PunctureInfo> punctures, CutDirection dir, LatticePoint p,
              LatticePoint q) noexcept;

class FlatConnection {
 public:
  FlatConnection() = default;
  FlatConnection(std::vector<std::int8_t> signs, PunctureSet punctures, CutDirection dir,
                 std::size_t vertex_count);

  int sign(int edge) const { return edge_signs_.at(static_cast<std::size_t>(edge)); }
  std::span<const std::int8_t> edge_signs() const noexcept { return edge_signs_; }
  const PunctureSet& punctures() const noexcept { return punctures_; }
  CutDirection cut_direction() const noexcept { return dir_; }
  std::size_t vertex_count() const noexcept { return vertex_count_; }

 private:
  std::vector<std::int8_t> edge_signs_;
  PunctureSet punctures_;
  CutDirection dir_ = CutDirection::PosX;
  std::size_t vertex_count_ = 0;
};

FlatConnection build_connection(const DomainGraph& graph, const PunctureSet& sigma,
                                CutDirection dir = CutDirection::PosX);

/// Gauge transform rho_xy -> s_x rho_xy s_y with pseudo-random vertex signs.
/// Monodromy of every cycle is unchanged.
FlatConnection apply_vertex_gauge(const FlatConnection& conn, const DomainGraph& graph,
                                  std::uint64_t seed);

/// Product of edge signs along a closed vertex cycle (first == last).
int cycle_monodromy(const FlatConnection& conn, const DomainGraph& graph,
                    std::span<const int> cycle);

/// Winding number of a closed lattice polyline around a puncture.
int winding_number(const Puncture& s, std::span<const LatticePoint> cycle);

/// (-1)^(sum of winding numbers around all punctures).
int winding_parity(const PunctureSet& sigma, std::span<const LatticePoint> cycle);

}  // namespace polydet
