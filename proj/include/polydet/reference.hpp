#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polydet/connection.hpp"
#include "polydet/fit.hpp"
#include "polydet/geometry.hpp"
#include "polydet/walker.hpp"

// Single-threaded versions of the parallel kernels. They consume random
// numbers in the same order, so results must match the parallel code bit
// for bit.
namespace polydet::reference {

/// Walks by lattice coordinates and reads signs from the connection's edge
/// table instead of recomputing cut crossings.
McEstimate dirichlet_kernel(const DomainGraph& graph, const FlatConnection& conn, int x, double t,
                            std::uint64_t samples, std::uint64_t seed);

McEstimate heat_trace(const DomainGraph& graph, const FlatConnection& conn, double t,
                      std::uint64_t samples_per_vertex, std::uint64_t seed);

std::vector<SweepRecord> sweep(const LatticeRegion& base, std::span<const Puncture> base_punctures,
                               std::span<const std::int64_t> scales,
                               CutDirection dir = CutDirection::PosX);

}  // namespace polydet::reference
