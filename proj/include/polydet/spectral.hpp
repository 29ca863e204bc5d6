#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "polydet/connection.hpp"
#include "polydet/geometry.hpp"

namespace polydet {

inline constexpr std::size_t kDenseThreshold = 4096;

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Twisted Dirichlet Laplacian 4I - (rho-weighted adjacency) on a lattice
/// domain. The dense spectrum is computed at most once and then shared by
/// copies of the operator.
class SymmetricOperator {
 public:
  explicit SymmetricOperator(SparseMatrix matrix);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const SparseMatrix& matrix() const noexcept { return matrix_; }

  /// Sorted eigenvalues; throws when the dimension exceeds `threshold`.
  std::span<const double> spectrum(std::size_t threshold = kDenseThreshold) const;

 private:
  struct SpectrumCache;
  SparseMatrix matrix_;
  std::shared_ptr<SpectrumCache> cache_;
};

SymmetricOperator assemble(const DomainGraph& graph, const FlatConnection& conn);

/// log det via sparse LDL^T with AMD ordering; pivots summed in extended
/// precision.
double logdet(const SymmetricOperator& op);

std::vector<double> dense_spectrum(const SymmetricOperator& op,
                                   std::size_t threshold = kDenseThreshold);

struct HeatTracePoint {
  double t = 0.0;
  double value = 0.0;
  double std_error = 0.0;  // zero on the exact (dense) path
  bool exact = true;
};

double heat_trace_from_spectrum(std::span<const double> spectrum, double t);

struct SlqOptions {
  int probes = 64;
  int lanczos_steps = 40;
  std::uint64_t seed = 1;
};

/// Dense path below the threshold, stochastic Lanczos quadrature above it.
HeatTracePoint heat_trace(const SymmetricOperator& op, double t,
                          std::size_t dense_threshold = kDenseThreshold,
                          const SlqOptions& slq = {});

/// zeta_M'(0) from the split heat-trace integral at e^{-gamma}; equals
/// -sum(log mu).
double discrete_zeta_prime_zero(std::span<const double> spectrum);

}  // namespace polydet
