#include "polydet/reference.hpp"

#include <algorithm>
#include <cmath>

#include "polydet/error.hpp"

namespace polydet::reference {

McEstimate dirichlet_kernel(const DomainGraph& graph, const FlatConnection& conn, int x, double t,
                            std::uint64_t samples, std::uint64_t seed) {
  if (x < 0 || static_cast<std::size_t>(x) >= graph.size()) throw Error("x is not a vertex");
  if (!(t >= 0.0) || samples < 1) throw Error("need t >= 0 and samples >= 1");
  if (conn.vertex_count() != graph.size()) throw ConnectionError("connection/graph mismatch");
  const LatticePoint origin = graph.vertices[static_cast<std::size_t>(x)];
  Tally total;
  for (std::uint64_t b = 0; b * kPathsPerBlock < samples; ++b) {
    auto rng = stream_engine(seed, static_cast<std::uint64_t>(x), b);
    std::poisson_distribution<int> jumps(4.0 * t);
    std::uniform_int_distribution<int> dir(0, 3);
    const std::uint64_t paths = std::min(kPathsPerBlock, samples - b * kPathsPerBlock);
    for (std::uint64_t k = 0; k < paths; ++k) {
      const int n = t > 0.0 ? jumps(rng) : 0;
      LatticePoint p = origin;
      int sign = 1;
      bool alive = true;
      for (int s = 0; s < n; ++s) {
        const LatticePoint d = kDirections[static_cast<std::size_t>(dir(rng))];
        const LatticePoint q{p.x + d.x, p.y + d.y};
        const int i = graph.find(p), j = graph.find(q);
        const int e = j < 0 ? -1 : graph.edge_between(i, j);
        if (e < 0) {
          alive = false;
          break;
        }
        // Edge signs are stored for the orientation low index -> high index;
        // a ±1 sign is its own inverse, so direction does not matter.
        sign *= conn.sign(e);
        p = q;
      }
      ++total.count;
      if (alive && p == origin) {
        total.sum += sign;
        total.sum_sq += 1;
      }
    }
  }
  return total.estimate(seed);
}

McEstimate heat_trace(const DomainGraph& graph, const FlatConnection& conn, double t,
                      std::uint64_t samples_per_vertex, std::uint64_t seed) {
  if (t == 0.0) return {static_cast<double>(graph.size()), 0.0, 0, seed};
  McEstimate out{0.0, 0.0, 0, seed};
  double var = 0.0;
  for (std::size_t x = 0; x < graph.size(); ++x) {
    const auto e = dirichlet_kernel(graph, conn, static_cast<int>(x), t, samples_per_vertex, seed);
    out.mean += e.mean;
    var += e.std_error * e.std_error;
    out.samples += e.samples;
  }
  out.std_error = std::sqrt(var);
  return out;
}

std::vector<SweepRecord> sweep(const LatticeRegion& base, std::span<const Puncture> base_punctures,
                               std::span<const std::int64_t> scales, CutDirection dir) {
  std::vector<SweepRecord> out;
  out.reserve(scales.size());
  for (const auto L : scales) out.push_back(sweep_one(base, base_punctures, dir, L));
  return out;
}

}  // namespace polydet::reference
