#include <doctest.h>

#include <random>

#include "polydet/connection.hpp"
#include "polydet/domain.hpp"
#include "polydet/error.hpp"
#include "polydet/oracles.hpp"
#include "polydet/shapes.hpp"
#include "polydet/spectral.hpp"

using namespace polydet;

namespace {

std::vector<LatticePoint> points_of(const DomainGraph& g, const std::vector<int>& cycle) {
  std::vector<LatticePoint> pts;
  for (int v : cycle) pts.push_back(g.vertices[static_cast<std::size_t>(v)]);
  return pts;
}

const CutDirection kAllCuts[] = {CutDirection::PosX, CutDirection::NegX, CutDirection::PosY,
                                 CutDirection::NegY};

}  // namespace

TEST_CASE("cut direction parsing") {
  CHECK(parse_cut_direction("+x") == CutDirection::PosX);
  CHECK(parse_cut_direction("-y") == CutDirection::NegY);
  for (auto d : kAllCuts) CHECK(parse_cut_direction(to_string(d)) == d);
  CHECK_THROWS_AS(parse_cut_direction("up"), ConfigError);
}

TEST_CASE("puncture validation") {
  const auto r = shapes::annulus().scaled(2);
  CHECK_NOTHROW(PunctureSet(r, {{7, 7}}));
  CHECK_THROWS_AS(PunctureSet(r, {{6, 7}}), ConnectionError);   // integer coordinate
  CHECK_THROWS_AS(PunctureSet(r, {{3, 3}}), ConnectionError);   // inside the region
  CHECK_THROWS_AS(PunctureSet(r, {{7, 7}, {7, 7}}), ConnectionError);
  const PunctureSet outside(r, {{-1, -1}});
  CHECK(outside.size() == 1);
  CHECK(outside.effective_count() == 0);
}

TEST_CASE("scaled punctures stay in their hole") {
  for (std::int64_t L = 1; L <= 12; ++L) {
    const auto base = shapes::two_holes();
    const auto scaled = base.scaled(L);
    const auto pts = scale_punctures(std::vector<Puncture>{{3, 3}, {7, 3}}, L, base, scaled);
    const PunctureSet set(scaled, pts);
    REQUIRE(set.size() == 2);
    CHECK(set.points()[0].component != set.points()[1].component);
    CHECK(set.effective_count() == 2);
  }
}

TEST_CASE("monodromy equals winding parity on random cycles") {
  std::mt19937_64 rng(7);
  struct Case {
    LatticeRegion base;
    std::int64_t L;
    std::vector<Puncture> sigma;
  };
  const std::vector<Case> cases = {
      {shapes::annulus(), 3, {shapes::annulus_hole_puncture()}},
      {shapes::two_holes(), 2, {{3, 3}, {7, 3}}},
      {shapes::two_holes(), 3, {{3, 3}}},
      {shapes::thick_annulus(), 2, {shapes::thick_annulus_hole_puncture(), {-1, 1}}},
  };
  for (const auto& c : cases) {
    for (auto dir : kAllCuts) {
      const Domain d = make_scaled_domain(c.base, c.L, c.sigma, dir);
      int drawn = 0, odd = 0;
      for (int attempt = 0; drawn < 100 && attempt < 100000; ++attempt) {
        const auto cyc = oracle::random_simple_cycle(d.graph, rng);
        if (!cyc) continue;
        ++drawn;
        const int par = winding_parity(d.punctures, points_of(d.graph, *cyc));
        odd += par < 0;
        CHECK(cycle_monodromy(d.connection, d.graph, *cyc) == par);
      }
      CHECK(drawn == 100);
      CHECK(odd > 0);
    }
  }
}

TEST_CASE("gauge transforms keep monodromy and the determinant") {
  const Domain d = make_scaled_domain(shapes::annulus(), 4, {shapes::annulus_hole_puncture()});
  const double base = logdet(assemble(d.graph, d.connection));
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto g = apply_vertex_gauge(d.connection, d.graph, seed);
    CHECK(logdet(assemble(d.graph, g)) == doctest::Approx(base).epsilon(1e-13));
    for (int k = 0; k < 20; ++k) {
      const auto cyc = oracle::random_simple_cycle(d.graph, rng);
      if (!cyc) continue;
      CHECK(cycle_monodromy(g, d.graph, *cyc) == cycle_monodromy(d.connection, d.graph, *cyc));
    }
  }
}

TEST_CASE("cut direction is a gauge choice") {
  const auto base = shapes::thick_annulus();
  const std::vector<Puncture> sigma{shapes::thick_annulus_hole_puncture()};
  const double ref = logdet(assemble(make_scaled_domain(base, 4, sigma).graph,
                                     make_scaled_domain(base, 4, sigma).connection));
  for (auto dir : kAllCuts) {
    const Domain d = make_scaled_domain(base, 4, sigma, dir);
    CHECK(logdet(assemble(d.graph, d.connection)) == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("punctures in the unbounded component change nothing") {
  const auto base = shapes::unit_square();
  const Domain plain = make_scaled_domain(base, 6, {});
  const Domain outside = make_scaled_domain(base, 6, {{-1, 1}}, CutDirection::PosX);
  // The ray crosses the square, so some edges carry -1, but every cycle is even.
  bool any_negative = false;
  for (auto s : outside.connection.edge_signs()) any_negative |= s < 0;
  CHECK(any_negative);
  CHECK(logdet(assemble(outside.graph, outside.connection)) ==
        doctest::Approx(logdet(assemble(plain.graph, plain.connection))).epsilon(1e-13));
}

TEST_CASE("winding numbers of a square loop") {
  const std::vector<LatticePoint> ccw{{0, 0}, {2, 0}, {2, 2}, {0, 2}, {0, 0}};
  // Doubled coordinates: (1, 1) is (1/2, 1/2).
  CHECK(winding_number({1, 1}, ccw) == 1);
  CHECK(winding_number({3, 3}, ccw) == 1);
  CHECK(winding_number({5, 1}, ccw) == 0);
  const std::vector<LatticePoint> cw(ccw.rbegin(), ccw.rend());
  CHECK(winding_number({3, 3}, cw) == -winding_number({3, 3}, ccw));
}

TEST_CASE("cycle checks") {
  const Domain d = make_scaled_domain(shapes::unit_square(), 4, {});
  CHECK_THROWS_AS(cycle_monodromy(d.connection, d.graph, std::vector<int>{0, 1, 2}), ConnectionError);
  CHECK_THROWS_AS(cycle_monodromy(d.connection, d.graph, std::vector<int>{0, 2, 5, 3, 0}), ConnectionError);
  const int a = d.graph.find({1, 1}), b = d.graph.find({2, 1}), c = d.graph.find({2, 2}), e = d.graph.find({1, 2});
  CHECK(cycle_monodromy(d.connection, d.graph, std::vector<int>{a, b, c, e, a}) == 1);
}
