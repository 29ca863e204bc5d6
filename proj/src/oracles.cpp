#include "polydet/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "polydet/error.hpp"
#include "polydet/summation.hpp"

namespace polydet::oracle {

std::vector<double> rectangle_lattice_spectrum(std::int64_t m, std::int64_t n) {
  std::vector<double> out;
  const double pi = std::numbers::pi;
  for (std::int64_t j = 1; j < m; ++j)
    for (std::int64_t k = 1; k < n; ++k)
      out.push_back(4.0 - 2.0 * std::cos(pi * double(j) / double(m)) -
                    2.0 * std::cos(pi * double(k) / double(n)));
  std::sort(out.begin(), out.end());
  return out;
}

double rectangle_lattice_logdet(std::int64_t m, std::int64_t n) {
  CompensatedSum<long double> s;
  const long double pi = std::numbers::pi_v<long double>;
  for (std::int64_t j = 1; j < m; ++j)
    for (std::int64_t k = 1; k < n; ++k)
      s.add(std::log(4.0L - 2.0L * std::cos(pi * j / m) - 2.0L * std::cos(pi * k / n)));
  return static_cast<double>(s.value());
}

std::string spanning_tree_count(const DomainGraph& graph) {
  using boost::multiprecision::cpp_int;
  const std::size_t n = graph.size();
  if (n == 0) throw Error("empty graph");
  // Vertices 0..n-1 plus the giant vertex n; drop vertex 0.
  const std::size_t N = n + 1;
  std::vector<std::vector<cpp_int>> K(N, std::vector<cpp_int>(N, 0));
  for (std::size_t v = 0; v < n; ++v) {
    // Every site has degree 4 once missing bonds are rerouted to the giant vertex.
    K[v][v] = 4;
    for (std::size_t d = 0; d < 4; ++d) {
      const int w = graph.neighbor[v][d];
      const std::size_t u = w < 0 ? n : static_cast<std::size_t>(w);
      K[v][u] -= 1;
      if (w < 0) {
        K[n][v] -= 1;
        K[n][n] += 1;
      }
    }
  }
  const std::size_t m = N - 1;
  std::vector<std::vector<cpp_int>> A(m, std::vector<cpp_int>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) A[i][j] = K[i + 1][j + 1];
  cpp_int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (A[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < m && A[p][k] == 0) ++p;
      if (p == m) return "0";
      std::swap(A[k], A[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < m; ++i)
      for (std::size_t j = k + 1; j < m; ++j) A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev;
    prev = A[k][k];
  }
  cpp_int det = A[m - 1][m - 1] * sign;
  return det.str();
}

std::vector<double> dense_kernel_diagonal(const SymmetricOperator& op, double t) {
  const Eigen::MatrixXd M(op.matrix());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) throw Error("dense eigendecomposition failed");
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  std::vector<double> out(static_cast<std::size_t>(M.rows()), 0.0);
  for (Eigen::Index x = 0; x < M.rows(); ++x) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < M.rows(); ++k) s += std::exp(-t * vals(k)) * vecs(x, k) * vecs(x, k);
    out[static_cast<std::size_t>(x)] = s;
  }
  return out;
}

namespace {

using Cell = LatticePoint;  // unit square with lower-left corner (x, y)

// Directed boundary edges of a cell set, counterclockwise around the set.
std::optional<std::vector<LatticePoint>> trace_cells(const std::set<Cell>& cells) {
  std::map<LatticePoint, LatticePoint> next;
  std::size_t edges = 0;
  const auto add = [&](LatticePoint a, LatticePoint b) {
    ++edges;
    return next.emplace(a, b).second;
  };
  for (const auto& c : cells) {
    const auto in = [&](std::int64_t dx, std::int64_t dy) { return cells.count({c.x + dx, c.y + dy}) > 0; };
    bool ok = true;
    if (!in(0, -1)) ok &= add({c.x, c.y}, {c.x + 1, c.y});
    if (!in(1, 0)) ok &= add({c.x + 1, c.y}, {c.x + 1, c.y + 1});
    if (!in(0, 1)) ok &= add({c.x + 1, c.y + 1}, {c.x, c.y + 1});
    if (!in(-1, 0)) ok &= add({c.x, c.y + 1}, {c.x, c.y});
    if (!ok) return std::nullopt;  // pinch vertex
  }
  std::vector<LatticePoint> cycle{next.begin()->first};
  while (true) {
    const LatticePoint q = next.at(cycle.back());
    cycle.push_back(q);
    if (q == cycle.front()) break;
    if (cycle.size() > edges + 1) return std::nullopt;
  }
  if (cycle.size() != edges + 1) return std::nullopt;  // holes
  return cycle;
}

}  // namespace

std::optional<std::vector<int>> random_simple_cycle(const DomainGraph& graph, std::mt19937_64& rng) {
  if (graph.size() == 0) return std::nullopt;
  BoundingBox box{graph.vertices.front().x, graph.vertices.front().y, graph.vertices.front().x,
                  graph.vertices.front().y};
  for (const auto& v : graph.vertices) {
    box.xmin = std::min(box.xmin, v.x);
    box.xmax = std::max(box.xmax, v.x);
    box.ymin = std::min(box.ymin, v.y);
    box.ymax = std::max(box.ymax, v.y);
  }
  if (box.xmax == box.xmin || box.ymax == box.ymin) return std::nullopt;
  std::uniform_int_distribution<std::int64_t> ux(box.xmin, box.xmax - 1), uy(box.ymin, box.ymax - 1);
  std::vector<LatticePoint> pts;
  if (std::bernoulli_distribution(0.5)(rng)) {
    std::uniform_int_distribution<std::int64_t> cx(box.xmin, box.xmax), cy(box.ymin, box.ymax);
    std::int64_t x0 = cx(rng), x1 = cx(rng), y0 = cy(rng), y1 = cy(rng);
    if (x0 == x1 || y0 == y1) return std::nullopt;
    if (x1 < x0) std::swap(x0, x1);
    if (y1 < y0) std::swap(y0, y1);
    for (auto x = x0; x < x1; ++x) pts.push_back({x, y0});
    for (auto y = y0; y < y1; ++y) pts.push_back({x1, y});
    for (auto x = x1; x > x0; --x) pts.push_back({x, y1});
    for (auto y = y1; y > y0; --y) pts.push_back({x0, y});
    pts.push_back(pts.front());
  } else {
    std::set<Cell> cells{{ux(rng), uy(rng)}};
    const auto target = std::uniform_int_distribution<int>(2, 40)(rng);
    for (int tries = 0; static_cast<int>(cells.size()) < target && tries < 400; ++tries) {
      auto it = cells.begin();
      std::advance(it, std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng));
      const auto d = kDirections[std::uniform_int_distribution<std::size_t>(0, 3)(rng)];
      const Cell c{it->x + d.x, it->y + d.y};
      if (c.x < box.xmin || c.x >= box.xmax || c.y < box.ymin || c.y >= box.ymax || cells.count(c)) continue;
      cells.insert(c);
      if (!trace_cells(cells)) cells.erase(c);
    }
    auto traced = trace_cells(cells);
    if (!traced) return std::nullopt;
    pts = std::move(*traced);
  }
  std::vector<int> cycle;
  for (const auto& p : pts) {
    const int v = graph.find(p);
    if (v < 0) return std::nullopt;
    if (!cycle.empty() && graph.edge_between(cycle.back(), v) < 0) return std::nullopt;
    cycle.push_back(v);
  }
  return cycle;
}

}  // namespace polydet::oracle
