#pragma once

#include <cstdint>

#include "polydet/connection.hpp"
#include "polydet/geometry.hpp"

// Base regions used by the examples, tests and acceptance run.
namespace polydet::shapes {

inline LatticeRegion rectangle(std::int64_t a, std::int64_t b) {
  return LatticeRegion({{{0, 0}, {a, 0}, {a, b}, {0, b}}});
}

inline LatticeRegion unit_square() { return rectangle(1, 1); }

/// 2 x 2 square minus its upper-right unit square.
inline LatticeRegion l_shape() {
  return LatticeRegion({{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}});
}

/// 3 x 3 square with the central unit square removed.
inline LatticeRegion annulus() {
  return LatticeRegion({{{0, 0}, {3, 0}, {3, 3}, {0, 3}}, {{1, 1}, {2, 1}, {2, 2}, {1, 2}}});
}

/// Centre of the annulus hole in doubled coordinates.
inline Puncture annulus_hole_puncture() { return {3, 3}; }

/// 5 x 5 square with the central unit square removed; the ring is twice as
/// wide as the hole.
inline LatticeRegion thick_annulus() {
  return LatticeRegion({{{0, 0}, {5, 0}, {5, 5}, {0, 5}}, {{2, 2}, {3, 2}, {3, 3}, {2, 3}}});
}

inline Puncture thick_annulus_hole_puncture() { return {5, 5}; }

/// 5 x 3 rectangle with two unit holes.
inline LatticeRegion two_holes() {
  return LatticeRegion({{{0, 0}, {5, 0}, {5, 3}, {0, 3}},
                        {{1, 1}, {2, 1}, {2, 2}, {1, 2}},
                        {{3, 1}, {4, 1}, {4, 2}, {3, 2}}});
}

inline LatticeRegion triangle(std::int64_t a) { return LatticeRegion({{{0, 0}, {a, 0}, {0, a}}}); }

}  // namespace polydet::shapes
