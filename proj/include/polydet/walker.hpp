#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "polydet/connection.hpp"
#include "polydet/domain.hpp"
#include "polydet/geometry.hpp"

namespace polydet {

/// Paths are simulated in fixed-size blocks; block b of stream s draws from
/// its own engine keyed by (seed, s, b). Results are therefore identical for
/// any thread count and for the serial reference implementation.
inline constexpr std::uint64_t kPathsPerBlock = 4096;

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t block);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Running tallies for integer-valued samples; merged in block order.
struct Tally {
  std::int64_t sum = 0;
  std::int64_t sum_sq = 0;
  std::uint64_t count = 0;

  void merge(const Tally& o) noexcept {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
  }
  McEstimate estimate(std::uint64_t seed) const;
};

/// One continuous-time simple random walk trajectory on Z^2 (total jump
/// rate 4, each direction at rate 1).
struct WalkPath {
  LatticePoint start;
  std::vector<double> jump_times;
  std::vector<int> directions;  // indices into kDirections
  LatticePoint end;
};

WalkPath sample_walk_path(LatticePoint start, double t, std::mt19937_64& rng);

/// e^{-x} I_0(x), accurate for all x >= 0.
double scaled_bessel_i0(double x);

/// Return probability of the free walk on Z^2 at time t: (e^{-2t} I_0(2t))^2.
double free_return_prob(double t);

/// Monte Carlo estimate of the free return probability.
McEstimate mc_free_return(double t, std::uint64_t samples, std::uint64_t seed);

/// Estimate of the twisted Dirichlet heat kernel diagonal at vertex x:
/// E[1{back at x at time t} 1{never jumped along a bond outside the domain}
///   (-1)^{cut crossings}].
McEstimate mc_dirichlet_kernel(const DomainGraph& graph, const FlatConnection& conn, int x,
                               double t, std::uint64_t samples, std::uint64_t seed);

/// Sum of per-vertex kernel estimates; SE pooled over vertices.
McEstimate mc_heat_trace(const DomainGraph& graph, const FlatConnection& conn, double t,
                         std::uint64_t samples_per_vertex, std::uint64_t seed);

/// Lattice decay envelope for domain changes at distance R.
double decay_envelope(double R, double t);

/// Distance from x to the symmetric difference of the two regions together
/// with the symmetric difference of their puncture sets.
double domain_change_distance(const Domain& omega, const Domain& theta, LatticePoint x);

struct DecayRow {
  double t = 0.0;
  double difference = 0.0;  // |P_omega - P_theta| estimate
  double std_error = 0.0;
  double envelope = 0.0;
  double ratio = 0.0;
};

struct DecayTable {
  double distance = 0.0;
  std::vector<DecayRow> rows;
  double fitted_constant = 0.0;  // max ratio over rows
};

/// Kernel differences from coupled walks: both domains see the same
/// trajectory, so paths that never reach the altered region cancel exactly.
DecayTable domain_change_decay(const Domain& omega, const Domain& theta, LatticePoint x,
                               std::span<const double> times, std::uint64_t samples,
                               std::uint64_t seed);

}  // namespace polydet
