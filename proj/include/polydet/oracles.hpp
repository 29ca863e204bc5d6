#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "polydet/geometry.hpp"
#include "polydet/spectral.hpp"

// Independent checks used by the test suite and the acceptance run. None of
// them shares code with the production factorization or walk kernels.
namespace polydet::oracle {

/// Eigenvalues 4 - 2cos(πj/m) - 2cos(πk/n), 1 <= j < m, 1 <= k < n, of the
/// Dirichlet operator on the open m x n lattice rectangle.
std::vector<double> rectangle_lattice_spectrum(std::int64_t m, std::int64_t n);

/// Σ log of the above, summed in extended precision.
double rectangle_lattice_logdet(std::int64_t m, std::int64_t n);

/// Spanning trees of the graph augmented with one giant vertex that takes
/// every missing bond, as a decimal string. Computed by fraction-free
/// elimination of the Kirchhoff matrix with the row and column of vertex 0
/// removed (not the giant vertex).
std::string spanning_tree_count(const DomainGraph& graph);

/// Diagonal of exp(-tM) from a dense eigendecomposition.
std::vector<double> dense_kernel_diagonal(const SymmetricOperator& op, double t);

/// A random simple closed lattice cycle through graph vertices and edges,
/// as vertex indices with front == back. Alternates between rectangles and
/// boundaries of random hole-free polyominoes; nullopt when a draw does not
/// fit the graph.
std::optional<std::vector<int>> random_simple_cycle(const DomainGraph& graph, std::mt19937_64& rng);

}  // namespace polydet::oracle
