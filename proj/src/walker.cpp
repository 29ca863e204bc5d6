#include "polydet/walker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

#include "polydet/error.hpp"

namespace polydet {

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),  static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(block),  static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

McEstimate Tally::estimate(std::uint64_t seed) const {
  McEstimate e;
  e.samples = count;
  e.seed = seed;
  if (count == 0) return e;
  const double n = static_cast<double>(count);
  e.mean = static_cast<double>(sum) / n;
  if (count > 1) {
    const double var =
        (static_cast<double>(sum_sq) - static_cast<double>(sum) * e.mean) / (n - 1.0);
    e.std_error = std::sqrt(std::max(var, 0.0) / n);
  }
  return e;
}

WalkPath sample_walk_path(LatticePoint start, double t, std::mt19937_64& rng) {
  std::exponential_distribution<double> wait(4.0);
  std::uniform_int_distribution<int> dir(0, 3);
  WalkPath path{start, {}, {}, start};
  double clock = wait(rng);
  while (clock <= t) {
    const int d = dir(rng);
    path.jump_times.push_back(clock);
    path.directions.push_back(d);
    path.end = {path.end.x + kDirections[d].x, path.end.y + kDirections[d].y};
    clock += wait(rng);
  }
  return path;
}

double scaled_bessel_i0(double x) {
  if (x < 0.0) x = -x;
  if (x < 50.0) {
    // Power series, all terms positive.
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 500; ++k) {
      term *= q / (double(k) * double(k));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-x);
  }
  // Hankel asymptotic expansion; terms shrink monotonically for k < 2x.
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double free_return_prob(double t) {
  if (t < 0.0) throw Error("free_return_prob: t must be nonnegative");
  const double p1 = scaled_bessel_i0(2.0 * t);
  return p1 * p1;
}

namespace {

std::uint64_t block_count(std::uint64_t samples) {
  return (samples + kPathsPerBlock - 1) / kPathsPerBlock;
}

std::uint64_t block_size(std::uint64_t samples, std::uint64_t b) {
  return std::min(kPathsPerBlock, samples - b * kPathsPerBlock);
}

Tally kernel_block(const DomainGraph& graph, const FlatConnection& conn, int x, double t,
                   std::uint64_t paths, std::mt19937_64& rng) {
  std::poisson_distribution<int> jumps(4.0 * t);
  std::uniform_int_distribution<int> dir(0, 3);
  const auto punctures = conn.punctures().points();
  const CutDirection cut = conn.cut_direction();
  Tally tally;
  for (std::uint64_t k = 0; k < paths; ++k) {
    const int n = t > 0.0 ? jumps(rng) : 0;
    int v = x;
    int sign = 1;
    bool alive = true;
    for (int s = 0; s < n; ++s) {
      const int d = dir(rng);
      const int w = graph.neighbor[static_cast<std::size_t>(v)][static_cast<std::size_t>(d)];
      if (w < 0) {
        alive = false;
        break;
      }
      if (!punctures.empty()) {
        sign *= step_sign(punctures, cut, graph.vertices[static_cast<std::size_t>(v)],
                          graph.vertices[static_cast<std::size_t>(w)]);
      }
      v = w;
    }
    ++tally.count;
    if (alive && v == x) {
      tally.sum += sign;
      tally.sum_sq += 1;
    }
  }
  return tally;
}

Tally kernel_tally(const DomainGraph& graph, const FlatConnection& conn, int x, double t,
                   std::uint64_t samples, std::uint64_t seed, bool parallel) {
  const std::uint64_t blocks = block_count(samples);
  std::vector<Tally> partial(blocks);
  const auto run = [&](std::uint64_t b) {
    auto rng = stream_engine(seed, static_cast<std::uint64_t>(x), b);
    partial[b] = kernel_block(graph, conn, x, t, block_size(samples, b), rng);
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
      run(static_cast<std::uint64_t>(b));
    }
  } else {
    for (std::uint64_t b = 0; b < blocks; ++b) run(b);
  }
  Tally total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

void check_kernel_args(const DomainGraph& graph, const FlatConnection& conn, int x, double t,
                       std::uint64_t samples) {
  if (x < 0 || static_cast<std::size_t>(x) >= graph.size()) throw Error("x is not a vertex");
  if (!(t >= 0.0)) throw Error("t must be nonnegative");
  if (samples < 1) throw Error("need at least one sample");
  if (conn.vertex_count() != graph.size()) throw ConnectionError("connection/graph mismatch");
}

}  // namespace

McEstimate mc_free_return(double t, std::uint64_t samples, std::uint64_t seed) {
  const std::uint64_t blocks = block_count(samples);
  std::vector<Tally> partial(blocks);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t bi = 0; bi < static_cast<std::int64_t>(blocks); ++bi) {
    const auto b = static_cast<std::uint64_t>(bi);
    auto rng = stream_engine(seed, 0, b);
    std::poisson_distribution<int> jumps(4.0 * t);
    std::uniform_int_distribution<int> dir(0, 3);
    Tally tally;
    for (std::uint64_t k = 0; k < block_size(samples, b); ++k) {
      const int n = t > 0.0 ? jumps(rng) : 0;
      std::int64_t px = 0, py = 0;
      for (int s = 0; s < n; ++s) {
        const int d = dir(rng);
        px += kDirections[d].x;
        py += kDirections[d].y;
      }
      ++tally.count;
      if (px == 0 && py == 0) {
        tally.sum += 1;
        tally.sum_sq += 1;
      }
    }
    partial[b] = tally;
  }
  Tally total;
  for (const auto& p : partial) total.merge(p);
  return total.estimate(seed);
}

McEstimate mc_dirichlet_kernel(const DomainGraph& graph, const FlatConnection& conn, int x,
                               double t, std::uint64_t samples, std::uint64_t seed) {
  check_kernel_args(graph, conn, x, t, samples);
  return kernel_tally(graph, conn, x, t, samples, seed, true).estimate(seed);
}

McEstimate mc_heat_trace(const DomainGraph& graph, const FlatConnection& conn, double t,
                         std::uint64_t samples_per_vertex, std::uint64_t seed) {
  const std::size_t n = graph.size();
  if (t == 0.0) return {static_cast<double>(n), 0.0, 0, seed};
  check_kernel_args(graph, conn, 0, t, samples_per_vertex);
  std::vector<McEstimate> per_vertex(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t xi = 0; xi < static_cast<std::int64_t>(n); ++xi) {
    const int x = static_cast<int>(xi);
    per_vertex[static_cast<std::size_t>(xi)] =
        kernel_tally(graph, conn, x, t, samples_per_vertex, seed, false).estimate(seed);
  }
  McEstimate out{0.0, 0.0, 0, seed};
  double var = 0.0;
  for (const auto& e : per_vertex) {
    out.mean += e.mean;
    var += e.std_error * e.std_error;
    out.samples += e.samples;
  }
  out.std_error = std::sqrt(var);
  return out;
}

double decay_envelope(double R, double t) {
  const double e2 = std::exp(2.0);
  if (t <= 1.0) return t * std::exp(-R);
  if (t <= R / (4.0 * e2)) return std::exp(-R) / t;
  return std::exp(-R * R / (8.0 * t)) / t;
}

namespace {

// Boundary split into primitive lattice segments, endpoints ordered.
std::set<std::pair<LatticePoint, LatticePoint>> primitive_boundary(const LatticeRegion& region) {
  std::set<std::pair<LatticePoint, LatticePoint>> out;
  for (const auto& loop : region.loops()) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      const LatticePoint a = loop[i];
      const LatticePoint b = loop[(i + 1) % n];
      const std::int64_t g = std::gcd(std::llabs(b.x - a.x), std::llabs(b.y - a.y));
      const std::int64_t sx = (b.x - a.x) / g, sy = (b.y - a.y) / g;
      for (std::int64_t k = 0; k < g; ++k) {
        LatticePoint p{a.x + k * sx, a.y + k * sy};
        LatticePoint q{p.x + sx, p.y + sy};
        if (q < p) std::swap(p, q);
        out.insert({p, q});
      }
    }
  }
  return out;
}

double point_segment_distance(LatticePoint x, LatticePoint a, LatticePoint b) {
  const double dx = double(b.x - a.x), dy = double(b.y - a.y);
  const double px = double(x.x - a.x), py = double(x.y - a.y);
  const double len2 = dx * dx + dy * dy;
  const double s = std::clamp((px * dx + py * dy) / len2, 0.0, 1.0);
  return std::hypot(px - s * dx, py - s * dy);
}

}  // namespace

double domain_change_distance(const Domain& omega, const Domain& theta, LatticePoint x) {
  const auto bo = primitive_boundary(omega.region);
  const auto bt = primitive_boundary(theta.region);
  double r = std::numeric_limits<double>::infinity();
  for (const auto* pair : {&bo, &bt}) {
    const auto& other = (pair == &bo) ? bt : bo;
    for (const auto& seg : *pair) {
      if (other.count(seg)) continue;
      r = std::min(r, point_segment_distance(x, seg.first, seg.second));
    }
  }
  std::set<Puncture> s1, s2;
  for (const auto& p : omega.punctures.points()) s1.insert(p.point);
  for (const auto& p : theta.punctures.points()) s2.insert(p.point);
  for (const auto* set : {&s1, &s2}) {
    const auto& other = (set == &s1) ? s2 : s1;
    for (const auto& p : *set) {
      if (other.count(p)) continue;
      r = std::min(r, 0.5 * std::hypot(double(p.x2 - 2 * x.x), double(p.y2 - 2 * x.y)));
    }
  }
  return r;
}

DecayTable domain_change_decay(const Domain& omega, const Domain& theta, LatticePoint x,
                               std::span<const double> times, std::uint64_t samples,
                               std::uint64_t seed) {
  const int x1 = omega.graph.find(x);
  const int x2 = theta.graph.find(x);
  if (x1 < 0 || x2 < 0) throw Error("x must be a vertex of both domains");
  DecayTable table;
  table.distance = domain_change_distance(omega, theta, x);
  const auto s1 = omega.punctures.points();
  const auto s2 = theta.punctures.points();
  const CutDirection c1 = omega.connection.cut_direction();
  const CutDirection c2 = theta.connection.cut_direction();

  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    const double t = times[ti];
    const std::uint64_t blocks = block_count(samples);
    std::vector<Tally> partial(blocks);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t bi = 0; bi < static_cast<std::int64_t>(blocks); ++bi) {
      const auto b = static_cast<std::uint64_t>(bi);
      auto rng = stream_engine(seed, ti, b);
      std::poisson_distribution<int> jumps(4.0 * t);
      std::uniform_int_distribution<int> dir(0, 3);
      Tally tally;
      for (std::uint64_t k = 0; k < block_size(samples, b); ++k) {
        const int n = t > 0.0 ? jumps(rng) : 0;
        LatticePoint p = x;
        int v1 = x1, v2 = x2, sign1 = 1, sign2 = 1;
        bool alive1 = true, alive2 = true;
        for (int s = 0; s < n && (alive1 || alive2); ++s) {
          const int d = dir(rng);
          const LatticePoint q{p.x + kDirections[d].x, p.y + kDirections[d].y};
          if (alive1) {
            const int w = omega.graph.neighbor[static_cast<std::size_t>(v1)][d];
            if (w < 0) {
              alive1 = false;
            } else {
              sign1 *= step_sign(s1, c1, p, q);
              v1 = w;
            }
          }
          if (alive2) {
            const int w = theta.graph.neighbor[static_cast<std::size_t>(v2)][d];
            if (w < 0) {
              alive2 = false;
            } else {
              sign2 *= step_sign(s2, c2, p, q);
              v2 = w;
            }
          }
          p = q;
        }
        ++tally.count;
        if (p == x) {
          const int value = (alive1 ? sign1 : 0) - (alive2 ? sign2 : 0);
          tally.sum += value;
          tally.sum_sq += value * value;
        }
      }
      partial[b] = tally;
    }
    Tally total;
    for (const auto& part : partial) total.merge(part);
    const McEstimate est = total.estimate(seed);
    DecayRow row;
    row.t = t;
    row.difference = std::fabs(est.mean);
    row.std_error = est.std_error;
    row.envelope = std::isfinite(table.distance) ? decay_envelope(table.distance, t) : 0.0;
    row.ratio = row.envelope > 0.0 ? row.difference / row.envelope : 0.0;
    table.fitted_constant = std::max(table.fitted_constant, row.ratio);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace polydet
