#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "polydet/domain.hpp"
#include "polydet/oracles.hpp"
#include "polydet/reference.hpp"
#include "polydet/shapes.hpp"
#include "polydet/spectral.hpp"
#include "polydet/walker.hpp"

using namespace polydet;

TEST_CASE("scaled Bessel I0 against Boost") {
  for (double x : {0.0, 0.01, 0.5, 1.0, 7.5, 30.0, 49.9, 50.0, 50.1, 120.0, 650.0}) {
    const double ref = std::exp(-x) * boost::math::cyl_bessel_i(0, x);
    CHECK(scaled_bessel_i0(x) == doctest::Approx(ref).epsilon(1e-13));
  }
  CHECK(free_return_prob(0.0) == 1.0);
}

TEST_CASE("free return probability: Monte Carlo") {
  for (double t : {0.1, 0.5, 2.0}) {
    const auto e = mc_free_return(t, 200000, 17);
    CHECK(std::fabs(e.mean - free_return_prob(t)) < 4.0 * e.std_error);
  }
}

TEST_CASE("walk paths") {
  auto rng = stream_engine(1, 2, 3);
  const auto p = sample_walk_path({5, -2}, 3.0, rng);
  LatticePoint end = p.start;
  for (std::size_t i = 0; i < p.jump_times.size(); ++i) {
    CHECK(p.jump_times[i] <= 3.0);
    if (i) CHECK(p.jump_times[i] > p.jump_times[i - 1]);
    end = {end.x + kDirections[static_cast<std::size_t>(p.directions[i])].x,
           end.y + kDirections[static_cast<std::size_t>(p.directions[i])].y};
  }
  CHECK(end == p.end);
}

TEST_CASE("Dirichlet kernel: Monte Carlo against the dense oracle") {
  const std::vector<Domain> domains = {
      make_scaled_domain(shapes::unit_square(), 5, {}),
      make_scaled_domain(shapes::annulus(), 3, {shapes::annulus_hole_puncture()}),
      make_scaled_domain(shapes::two_holes(), 2, {{3, 3}, {7, 3}}),
  };
  int checked = 0, within = 0;
  for (const auto& d : domains) {
    const auto op = assemble(d.graph, d.connection);
    for (double t : {0.2, 1.0, 2.5}) {
      const auto exact = oracle::dense_kernel_diagonal(op, t);
      for (int x : {0, static_cast<int>(d.graph.size() / 2)}) {
        const auto e = mc_dirichlet_kernel(d.graph, d.connection, x, t, 50000, 99 + checked);
        ++checked;
        within += std::fabs(e.mean - exact[static_cast<std::size_t>(x)]) < 3.5 * e.std_error;
      }
    }
  }
  CHECK(within >= checked - 1);
}

TEST_CASE("twisted kernel picks up negative loops") {
  // Walks winding the hole once count -1, so the twisted return
  // probability sits below the untwisted one at long times.
  const auto base = shapes::annulus();
  const Domain plain = make_scaled_domain(base, 2, {});
  const Domain twisted = make_scaled_domain(base, 2, {shapes::annulus_hole_puncture()});
  const double t = 3.0;
  const auto ep = oracle::dense_kernel_diagonal(assemble(plain.graph, plain.connection), t);
  const auto et = oracle::dense_kernel_diagonal(assemble(twisted.graph, twisted.connection), t);
  for (std::size_t i = 0; i < ep.size(); ++i) CHECK(et[i] < ep[i]);
}

TEST_CASE("parallel kernels match the serial reference bit for bit") {
  const Domain d = make_scaled_domain(shapes::annulus(), 3, {shapes::annulus_hole_puncture()});
  for (int x : {0, 7, static_cast<int>(d.graph.size()) - 1}) {
    for (std::uint64_t samples : {1ull, 4095ull, 4096ull, 10001ull}) {
      const auto a = mc_dirichlet_kernel(d.graph, d.connection, x, 1.3, samples, 5);
      const auto b = reference::dirichlet_kernel(d.graph, d.connection, x, 1.3, samples, 5);
      CHECK(a.mean == b.mean);
      CHECK(a.std_error == b.std_error);
      CHECK(a.samples == samples);
    }
  }
  const auto a = mc_heat_trace(d.graph, d.connection, 0.8, 3000, 21);
  const auto b = reference::heat_trace(d.graph, d.connection, 0.8, 3000, 21);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("seeds") {
  const Domain d = make_scaled_domain(shapes::unit_square(), 6, {});
  const auto a = mc_dirichlet_kernel(d.graph, d.connection, 3, 1.0, 20000, 1);
  const auto b = mc_dirichlet_kernel(d.graph, d.connection, 3, 1.0, 20000, 1);
  const auto c = mc_dirichlet_kernel(d.graph, d.connection, 3, 1.0, 20000, 2);
  CHECK(a.mean == b.mean);
  CHECK(a.mean != c.mean);
  CHECK(a.seed == 1);
  CHECK(mc_dirichlet_kernel(d.graph, d.connection, 3, 0.0, 10, 1).mean == 1.0);
}

TEST_CASE("Monte Carlo heat trace") {
  const Domain d = make_scaled_domain(shapes::l_shape(), 3, {});
  const auto op = assemble(d.graph, d.connection);
  const auto e = mc_heat_trace(d.graph, d.connection, 0.6, 20000, 8);
  CHECK(std::fabs(e.mean - heat_trace(op, 0.6).value) < 4.0 * e.std_error);
  CHECK(mc_heat_trace(d.graph, d.connection, 0.0, 10, 8).mean == double(d.graph.size()));
}

TEST_CASE("decay envelope") {
  const double R = 200.0;
  CHECK(decay_envelope(R, 0.5) == doctest::Approx(0.5 * std::exp(-R)));
  CHECK(decay_envelope(R, 2.0) == doctest::Approx(std::exp(-R) / 2.0));
  CHECK(decay_envelope(R, 1000.0) == doctest::Approx(std::exp(-R * R / 8000.0) / 1000.0));
  // Envelope is continuous at t = 1.
  CHECK(decay_envelope(R, 1.0) == doctest::Approx(decay_envelope(R, 1.0 + 1e-12)));
}

TEST_CASE("domain change: coupled walks against dense kernels") {
  // Omega: 3 x 1 rectangle; Theta: the same with the far end cut back.
  const Domain omega = make_scaled_domain(shapes::rectangle(3, 1), 4, {});
  const Domain theta = make_scaled_domain(shapes::rectangle(2, 1), 4, {});
  const LatticePoint x{2, 2};
  const double R = domain_change_distance(omega, theta, x);
  CHECK(R == doctest::Approx(6.0));
  const std::vector<double> times{0.5, 2.0, 6.0};
  const auto table = domain_change_decay(omega, theta, x, times, 200000, 4);
  REQUIRE(table.rows.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const double a = oracle::dense_kernel_diagonal(assemble(omega.graph, omega.connection), t)[static_cast<std::size_t>(omega.graph.find(x))];
    const double b = oracle::dense_kernel_diagonal(assemble(theta.graph, theta.connection), t)[static_cast<std::size_t>(theta.graph.find(x))];
    CHECK(std::fabs(table.rows[i].difference - std::fabs(a - b)) < 4.0 * table.rows[i].std_error + 1e-6);  // rare events at small t
    CHECK(std::fabs(a - b) <= decay_envelope(R, t) * 50.0);
  }
}
