#include "polydet/connection.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "polydet/error.hpp"

namespace polydet {

CutDirection parse_cut_direction(std::string_view text) {
  // Accept the ASCII hyphen and U+2212 MINUS SIGN.
  if (text == "+x" || text == "x") return CutDirection::PosX;
  if (text == "-x" || text == "−x") return CutDirection::NegX;
  if (text == "+y" || text == "y") return CutDirection::PosY;
  if (text == "-y" || text == "−y") return CutDirection::NegY;
  throw ConfigError("unknown cut direction '" + std::string(text) + "'");
}

std::string to_string(CutDirection dir) {
  switch (dir) {
    case CutDirection::PosX: return "+x";
    case CutDirection::NegX: return "-x";
    case CutDirection::PosY: return "+y";
    case CutDirection::NegY: return "-y";
  }
  return "+x";
}

PunctureSet::PunctureSet(const LatticeRegion& region, std::vector<Puncture> points) {
  std::set<Puncture> seen;
  for (const auto& p : points) {
    if (p.x2 % 2 == 0 || p.y2 % 2 == 0) {
      throw ConnectionError("puncture with integer coordinate (doubled coordinates must be odd)");
    }
    const RationalPoint rp{p.x2, p.y2, 2};
    if (region.contains(rp)) throw ConnectionError("puncture inside the region");
    if (region.on_boundary(rp)) throw ConnectionError("puncture on the region boundary");
    if (!seen.insert(p).second) throw ConnectionError("duplicate puncture");
    points_.push_back({p, region.complement_component(rp)});
  }
}

std::size_t PunctureSet::effective_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(points_.begin(), points_.end(), [](const auto& p) { return p.component > 0; }));
}

std::vector<Puncture> scale_punctures(std::span<const Puncture> base, std::int64_t factor,
                                      const LatticeRegion& base_region,
                                      const LatticeRegion& scaled_region) {
  std::vector<Puncture> out;
  out.reserve(base.size());
  for (const auto& p : base) {
    const int component = base_region.complement_component({p.x2, p.y2, 2});
    const Puncture direct{p.x2 * factor, p.y2 * factor};
    if (direct.x2 % 2 != 0 && direct.y2 % 2 != 0) {
      out.push_back(direct);
      continue;
    }
    constexpr std::array<std::array<int, 2>, 4> shifts{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
    bool placed = false;
    for (const auto& [dx, dy] : shifts) {
      const Puncture cand{direct.x2 + dx, direct.y2 + dy};
      const RationalPoint rp{cand.x2, cand.y2, 2};
      if (scaled_region.on_boundary(rp) || scaled_region.contains(rp)) continue;
      if (scaled_region.complement_component(rp) != component) continue;
      out.push_back(cand);
      placed = true;
      break;
    }
    if (!placed) throw ConnectionError("cannot place scaled puncture off the lattice");
  }
  return out;
}

bool cut_crosses(const Puncture& s, CutDirection dir, LatticePoint p, LatticePoint q) noexcept {
  if (p.x == q.x) {
    // Vertical step: only horizontal rays can cross it.
    if (dir != CutDirection::PosX && dir != CutDirection::NegX) return false;
    if (2 * std::min(p.y, q.y) + 1 != s.y2) return false;
    return dir == CutDirection::PosX ? 2 * p.x > s.x2 : 2 * p.x < s.x2;
  }
  if (dir != CutDirection::PosY && dir != CutDirection::NegY) return false;
  if (2 * std::min(p.x, q.x) + 1 != s.x2) return false;
  return dir == CutDirection::PosY ? 2 * p.y > s.y2 : 2 * p.y < s.y2;
}

int step_sign(std::span<const PunctureInfo> punctures, CutDirection dir, LatticePoint p,
              LatticePoint q) noexcept {
  int sign = 1;
  for (const auto& s : punctures) {
    if (cut_crosses(s.point, dir, p, q)) sign = -sign;
  }
  return sign;
}

FlatConnection::FlatConnection(std::vector<std::int8_t> signs, PunctureSet punctures,
                               CutDirection dir, std::size_t vertex_count)
    : edge_signs_(std::move(signs)),
      punctures_(std::move(punctures)),
      dir_(dir),
      vertex_count_(vertex_count) {}

FlatConnection build_connection(const DomainGraph& graph, const PunctureSet& sigma,
                                CutDirection dir) {
  std::vector<std::int8_t> signs(graph.edges.size(), 1);
  if (!sigma.empty()) {
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
      const auto [i, j] = graph.edges[e];
      signs[e] = static_cast<std::int8_t>(
          step_sign(sigma.points(), dir, graph.vertices[static_cast<std::size_t>(i)],
                    graph.vertices[static_cast<std::size_t>(j)]));
    }
  }
  return FlatConnection(std::move(signs), sigma, dir, graph.size());
}

FlatConnection apply_vertex_gauge(const FlatConnection& conn, const DomainGraph& graph,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<int> vertex_sign(graph.size());
  for (auto& s : vertex_sign) s = coin(rng) ? -1 : 1;
  std::vector<std::int8_t> signs(conn.edge_signs().begin(), conn.edge_signs().end());
  for (std::size_t e = 0; e < signs.size(); ++e) {
    const auto [i, j] = graph.edges.at(e);
    signs[e] = static_cast<std::int8_t>(signs[e] * vertex_sign[static_cast<std::size_t>(i)] *
                                        vertex_sign[static_cast<std::size_t>(j)]);
  }
  return FlatConnection(std::move(signs), conn.punctures(), conn.cut_direction(),
                        conn.vertex_count());
}

int cycle_monodromy(const FlatConnection& conn, const DomainGraph& graph,
                    std::span<const int> cycle) {
  if (cycle.size() < 4 || cycle.front() != cycle.back()) {
    throw ConnectionError("cycle must be closed (first vertex repeated at the end)");
  }
  std::set<int> seen(cycle.begin(), cycle.end() - 1);
  if (seen.size() != cycle.size() - 1) throw ConnectionError("cycle repeats a vertex");
  int product = 1;
  for (std::size_t k = 0; k + 1 < cycle.size(); ++k) {
    const int e = graph.edge_between(cycle[k], cycle[k + 1]);
    if (e < 0) throw ConnectionError("cycle step between non-adjacent vertices");
    product *= conn.sign(e);
  }
  return product;
}

int winding_number(const Puncture& s, std::span<const LatticePoint> cycle) {
  if (cycle.size() < 3) throw ConnectionError("cycle too short");
  const std::size_t n = cycle.front() == cycle.back() ? cycle.size() - 1 : cycle.size();
  const auto is_left = [](std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by,
                          std::int64_t px, std::int64_t py) {
    return (bx - ax) * (py - ay) - (px - ax) * (by - ay);
  };
  int wn = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const LatticePoint a = cycle[k];
    const LatticePoint b = cycle[(k + 1) % n];
    const std::int64_t ax = 2 * a.x, ay = 2 * a.y, bx = 2 * b.x, by = 2 * b.y;
    const std::int64_t side = is_left(ax, ay, bx, by, s.x2, s.y2);
    if (side == 0 && std::min(ax, bx) <= s.x2 && s.x2 <= std::max(ax, bx) &&
        std::min(ay, by) <= s.y2 && s.y2 <= std::max(ay, by)) {
      throw ConnectionError("puncture lies on the cycle");
    }
    if (ay <= s.y2) {
      if (by > s.y2 && side > 0) ++wn;
    } else if (by <= s.y2 && side < 0) {
      --wn;
    }
  }
  return wn;
}

int winding_parity(const PunctureSet& sigma, std::span<const LatticePoint> cycle) {
  long total = 0;
  for (const auto& s : sigma.points()) total += winding_number(s.point, cycle);
  return (total % 2 == 0) ? 1 : -1;
}

}  // namespace polydet
