#pragma once

#include <vector>

#include "polydet/connection.hpp"
#include "polydet/geometry.hpp"

namespace polydet {

/// A region at a fixed scale together with its graph and a connection.
struct Domain {
  LatticeRegion region;
  DomainGraph graph;
  PunctureSet punctures;
  FlatConnection connection;
};

/// `punctures` are in the region's own (already scaled) doubled coordinates.
Domain make_domain(LatticeRegion region, std::vector<Puncture> punctures = {},
                   CutDirection dir = CutDirection::PosX);

/// Scales `base` by `factor` and carries base-coordinate punctures along.
Domain make_scaled_domain(const LatticeRegion& base, std::int64_t factor,
                          const std::vector<Puncture>& base_punctures,
                          CutDirection dir = CutDirection::PosX);

}  // namespace polydet
