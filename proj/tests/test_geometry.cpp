#include <doctest.h>

#include <numbers>
#include <random>

#include "polydet/error.hpp"
#include "polydet/geometry.hpp"
#include "polydet/shapes.hpp"

using namespace polydet;

namespace {

LatticeRegion rotate90(const LatticeRegion& r) {
  std::vector<Loop> loops;
  for (const auto& loop : r.base_loops()) {
    Loop l;
    for (const auto& p : loop) l.push_back({-p.y, p.x});
    loops.push_back(l);
  }
  return LatticeRegion(loops);
}

LatticeRegion mirror(const LatticeRegion& r) {
  std::vector<Loop> loops;
  for (const auto& loop : r.base_loops()) {
    Loop l;
    for (const auto& p : loop) l.push_back({-p.x, p.y});
    loops.push_back(l);
  }
  return LatticeRegion(loops);
}

}  // namespace

TEST_CASE("square site, edge and exterior boundary counts") {
  for (std::int64_t L = 2; L <= 64; ++L) {
    const auto g = build_graph(shapes::unit_square().scaled(L));
    CHECK(g.size() == static_cast<std::size_t>((L - 1) * (L - 1)));
    CHECK(g.edges.size() == static_cast<std::size_t>(2 * (L - 1) * (L - 2)));
    CHECK(g.ext_boundary.size() == static_cast<std::size_t>(4 * (L - 1)));
  }
}

TEST_CASE("empty region is rejected") {
  CHECK_THROWS_AS(build_graph(shapes::unit_square()), GeometryError);
}

TEST_CASE("graph indices are row-major and edges ordered") {
  const auto g = build_graph(shapes::rectangle(3, 2).scaled(2));
  for (std::size_t i = 1; i < g.size(); ++i) {
    const auto a = g.vertices[i - 1], b = g.vertices[i];
    CHECK((a.y < b.y || (a.y == b.y && a.x < b.x)));
  }
  for (const auto& e : g.edges) CHECK(e[0] < e[1]);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.find(g.vertices[i]) == static_cast<int>(i));
}

TEST_CASE("Pick's theorem with holes") {
  // 2A = 2I + B - 2(1 - h) for h holes.
  const std::vector<LatticeRegion> regions = {
      shapes::unit_square().scaled(7), shapes::l_shape().scaled(5),    shapes::triangle(9),
      shapes::annulus().scaled(4),     shapes::two_holes().scaled(3),
      LatticeRegion({{{0, 0}, {7, 1}, {5, 6}, {2, 4}, {-1, 5}}}),
  };
  for (const auto& r : regions) {
    const auto summary = summarize_geometry(r);
    const auto I = static_cast<std::int64_t>(build_graph(r).size());
    const auto B = boundary_lattice_points(r);
    const auto h = static_cast<std::int64_t>(r.loops().size()) - 1;
    CHECK(summary.doubled_area == 2 * I + B - 2 * (1 - h));
  }
}

TEST_CASE("corners and perimeter") {
  const auto sq = summarize_geometry(shapes::unit_square().scaled(4));
  CHECK(sq.corners.size() == 4);
  CHECK(sq.perimeter == doctest::Approx(16.0));
  CHECK(sq.area() == doctest::Approx(16.0));
  for (const auto& c : sq.corners) CHECK(c.angle == doctest::Approx(std::numbers::pi / 2));

  const auto l = summarize_geometry(shapes::l_shape());
  CHECK(l.corners.size() == 6);
  int reflex = 0;
  for (const auto& c : l.corners) reflex += c.angle > std::numbers::pi;
  CHECK(reflex == 1);

  // Collinear vertices are not corners.
  const auto r = summarize_geometry(LatticeRegion({{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}}}));
  CHECK(r.corners.size() == 4);
}

TEST_CASE("invalid loops") {
  CHECK_THROWS_WITH_AS(LatticeRegion({{{0, 0}, {2, 2}, {2, 0}, {0, 2}}}), doctest::Contains("non-simple loop"),
                       GeometryError);
  CHECK_THROWS_WITH_AS(LatticeRegion({{{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{3, 3}, {5, 3}, {5, 5}, {3, 5}}}),
                       doctest::Contains("intersecting loops"), GeometryError);
  CHECK_THROWS_WITH_AS(LatticeRegion({{{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{5, 5}, {6, 5}, {6, 6}, {5, 6}}}),
                       doctest::Contains("hole outside outer loop"), GeometryError);
  CHECK_THROWS_WITH_AS(LatticeRegion({{{0, 0}, {9, 0}, {9, 9}, {0, 9}},
                                      {{1, 1}, {8, 1}, {8, 8}, {1, 8}},
                                      {{3, 3}, {5, 3}, {5, 5}, {3, 5}}}),
                       doctest::Contains("nested holes"), GeometryError);
  CHECK_THROWS_AS(LatticeRegion({{{0, 0}, {1, 0}}}), GeometryError);
  CHECK_THROWS_AS(shapes::unit_square().scaled(0), GeometryError);
}

TEST_CASE("orientation is normalized") {
  const LatticeRegion cw({{{0, 0}, {0, 3}, {3, 3}, {3, 0}}});
  const LatticeRegion ccw({{{0, 0}, {3, 0}, {3, 3}, {0, 3}}});
  CHECK(build_graph(cw).size() == build_graph(ccw).size());
  CHECK(summarize_geometry(cw).doubled_area == 18);
}

TEST_CASE("membership predicates") {
  const auto r = shapes::annulus().scaled(2);  // [0,6]^2 minus [2,4]^2
  CHECK(r.contains(LatticePoint{1, 1}));
  CHECK_FALSE(r.contains(LatticePoint{3, 3}));
  CHECK_FALSE(r.contains(LatticePoint{2, 3}));
  CHECK(r.on_boundary(RationalPoint{2, 3, 1}));
  CHECK(r.contains(RationalPoint{3, 1, 2}));
  CHECK(r.complement_component(RationalPoint{7, 7, 2}) == 1);
  CHECK(r.complement_component(RationalPoint{-1, 0, 1}) == -1);
  CHECK(r.complement_component(RationalPoint{1, 1, 1}) == 0);
}

TEST_CASE("unit segments") {
  const auto r = shapes::triangle(4);
  CHECK(unit_segment_in_region(r, {1, 1}, {2, 1}));
  CHECK_FALSE(unit_segment_in_region(r, {2, 1}, {3, 1}));  // (3,1) is on the hypotenuse
  CHECK_THROWS_AS(unit_segment_in_region(r, {1, 1}, {2, 2}), GeometryError);
  // A hole edge running along the middle of the strip removes the bonds that
  // would cross it.
  const auto g = build_graph(shapes::annulus().scaled(3));
  for (const auto& [i, j] : g.edges) {
    const auto p = g.vertices[static_cast<std::size_t>(i)], q = g.vertices[static_cast<std::size_t>(j)];
    CHECK(unit_segment_in_region(shapes::annulus().scaled(3), p, q));
  }
}

TEST_CASE("square boundary classes") {
  for (std::int64_t L = 4; L <= 40; L += 3) {
    const auto r = shapes::unit_square().scaled(L);
    const auto g = build_graph(r);
    const auto counts = boundary_class_counts(r, g);
    REQUIRE(counts.size() == 2);
    std::vector<std::int64_t> c;
    std::int64_t total = 0;
    for (const auto& [k, v] : counts) {
      c.push_back(v);
      total += v;
      CHECK(k.size() == 16);
    }
    std::sort(c.begin(), c.end());
    std::vector<std::int64_t> want{8, 4 * (L - 3)};
    std::sort(want.begin(), want.end());
    CHECK(c == want);
    CHECK(total == static_cast<std::int64_t>(g.ext_boundary.size()));
  }
}

TEST_CASE("boundary classes are invariant under lattice symmetries") {
  for (const auto& base : {shapes::l_shape(), shapes::triangle(3), shapes::two_holes()}) {
    const auto r = base.scaled(6);
    const auto counts = boundary_class_counts(r, build_graph(r));
    const auto rr = rotate90(base).scaled(6);
    const auto mr = mirror(base).scaled(6);
    CHECK(boundary_class_counts(rr, build_graph(rr)) == counts);
    CHECK(boundary_class_counts(mr, build_graph(mr)) == counts);
  }
}

TEST_CASE("class counts of a fixed shape grow linearly") {
  // Same classes at every scale; corner classes constant, edge classes ~ L.
  const auto c8 = boundary_class_counts(shapes::l_shape().scaled(8), build_graph(shapes::l_shape().scaled(8)));
  const auto c16 = boundary_class_counts(shapes::l_shape().scaled(16), build_graph(shapes::l_shape().scaled(16)));
  const auto c24 = boundary_class_counts(shapes::l_shape().scaled(24), build_graph(shapes::l_shape().scaled(24)));
  REQUIRE(c8.size() == c16.size());
  for (const auto& [k, v] : c8) {
    REQUIRE(c16.count(k));
    CHECK(c24.at(k) - c16.at(k) == c16.at(k) - v);
  }
}
