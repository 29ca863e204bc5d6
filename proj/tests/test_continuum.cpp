#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polydet/continuum.hpp"
#include "polydet/shapes.hpp"

using namespace polydet;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Kac coefficients of the unit square") {
  const auto k = rectangle_kac(1.0, 1.0);
  CHECK(k.a0 == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-15));
  CHECK(k.a1 == doctest::Approx(-1.0 / (2.0 * std::sqrt(kPi))).epsilon(1e-15));
  CHECK(k.a2 == doctest::Approx(0.25).epsilon(1e-15));
  const auto g = kac_coefficients(summarize_geometry(shapes::unit_square()));
  CHECK(g.a0 == doctest::Approx(k.a0));
  CHECK(g.a1 == doctest::Approx(k.a1));
  CHECK(g.a2 == doctest::Approx(k.a2));
}

TEST_CASE("corner terms") {
  CHECK(corner_heat_term(kPi / 2.0) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK(corner_heat_term(1.5 * kPi) == doctest::Approx(-5.0 / 144.0).epsilon(1e-15));
  CHECK(corner_heat_term(kPi) == doctest::Approx(0.0));
  CHECK(corner_log_sum(summarize_geometry(shapes::unit_square())) == doctest::Approx(0.5));
  CHECK(corner_log_sum(summarize_geometry(shapes::l_shape())) == doctest::Approx(5.0 / 9.0));
}

TEST_CASE("theta sums: both branches agree with direct summation") {
  for (double ell : {1.0, 2.0, 0.7}) {
    for (double t : {0.02, 0.05, 0.09, 0.1, 0.11, 0.3, 1.0}) {
      double direct = 0.0;
      for (int m = 1; m < 2000; ++m) direct += std::exp(-t * kPi * kPi * m * m / (ell * ell));
      CHECK(dirichlet_theta_sum(ell, t) == doctest::Approx(direct).epsilon(1e-13));
    }
  }
}

TEST_CASE("rectangle heat trace from enumerated eigenvalues") {
  for (double t : {0.05, 0.2, 1.0}) {
    CHECK(rectangle_heat_trace(2.0, 1.0, t) ==
          doctest::Approx(rectangle_heat_trace_direct(2.0, 1.0, t, 4000.0)).epsilon(1e-12));
  }
  const auto ev = rectangle_eigenvalues(1.0, 1.0, 60.0);
  REQUIRE(ev.size() == 3);
  CHECK(ev[0] == doctest::Approx(2.0 * kPi * kPi));
  CHECK(ev[1] == doctest::Approx(5.0 * kPi * kPi));
}

TEST_CASE("Weyl law for the rectangle") {
  const double lambda = 4e4;
  const double n = static_cast<double>(rectangle_counting(2.0, 1.0, lambda));
  const double weyl = 2.0 * lambda / (4.0 * kPi) - 6.0 * std::sqrt(lambda) / (4.0 * kPi);
  CHECK(std::fabs(n - weyl) < 3.0 * std::pow(lambda, 1.0 / 3.0));
}

TEST_CASE("Kac expansion at t = 0.05") {
  const auto k = rectangle_kac(1.0, 1.0);
  const double t = 0.05;
  CHECK(std::fabs(rectangle_heat_trace(1.0, 1.0, t) - k.a0 / t - k.a1 / std::sqrt(t) - k.a2) < 1e-6);
}

TEST_CASE("regularized trace is continuous across the representation switch") {
  // Switch at t = min(a, b)^2 / pi^2.
  const double t0 = 1.0 / (kPi * kPi);
  CHECK(rectangle_regularized_trace(1.0, 1.0, t0 * (1 - 1e-12)) ==
        doctest::Approx(rectangle_regularized_trace(1.0, 1.0, t0 * (1 + 1e-12))).epsilon(1e-9));
}

TEST_CASE("zeta'(0) of rectangles") {
  // Reference values from an independent 40-digit evaluation of the same
  // integral with Jacobi theta functions.
  CHECK(continuum_zeta_prime_zero(1.0, 1.0).zeta_prime_0 == doctest::Approx(0.6102456605288906).epsilon(1e-12));
  CHECK(continuum_zeta_prime_zero(2.0, 1.0).zeta_prime_0 == doctest::Approx(0.8701758532388701).epsilon(1e-12));
  CHECK(continuum_zeta_prime_zero(1.0, 2.0).zeta_prime_0 == doctest::Approx(0.8701758532388701).epsilon(1e-12));
  const auto r = continuum_zeta_prime_zero(1.0, 1.0);
  CHECK(r.err_bound < 1e-9);
}

TEST_CASE("zeta'(0) rescaling") {
  // zeta_{cR}(s) = c^{2s} zeta_R(s) and zeta_R(0) = a2 = 1/4.
  for (double c : {2.0, 3.0, 0.5}) {
    const double d = continuum_zeta_prime_zero(c, c).zeta_prime_0 - continuum_zeta_prime_zero(1.0, 1.0).zeta_prime_0;
    CHECK(std::fabs(d - 0.5 * std::log(c)) < 1e-7);
  }
}

TEST_CASE("half-plane defect") {
  CHECK(half_plane_defect(0.0, 1.0) == doctest::Approx(-1.0 / (4.0 * kPi)));
  CHECK(half_plane_defect(3.0, 0.5) == doctest::Approx(-std::exp(-18.0) / (2.0 * kPi)));
}
