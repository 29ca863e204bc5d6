#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace polydet {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive 61-point Gauss-Kronrod on [a, b].
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double rel_tol = 1e-12,
                           unsigned max_depth = 10) {
  QuadratureResult r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, max_depth, rel_tol, &r.error);
  return r;
}

inline constexpr double kEulerGamma = 0.57721566490153286061;

}  // namespace polydet
