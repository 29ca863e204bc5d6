#pragma once

#include "polydet/spectral.hpp"

namespace polydet {

struct TraceEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int probes = 0;
};

/// Hutchinson estimate of Tr exp(-t A) with Rademacher probes, each
/// quadratic form evaluated by Lanczos (Gauss) quadrature with full
/// reorthogonalization. Probes run in parallel; probe k always uses the
/// stream (seed, k), so results do not depend on the thread count.
TraceEstimate slq_trace_exp(const SparseMatrix& a, double t, const SlqOptions& options);

}  // namespace polydet
