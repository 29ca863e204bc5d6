#include "polydet/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polydet/error.hpp"
#include "polydet/quadrature.hpp"
#include "polydet/summation.hpp"

namespace polydet {

namespace {

constexpr double kPi = std::numbers::pi;

// Σ_{k>=1} exp(-k² ℓ² / t), the dual sum after Poisson resummation.
double dual_tail(double ell, double t) {
  double sum = 0.0;
  for (int k = 1; k < 100000; ++k) {
    const double term = std::exp(-double(k) * double(k) * ell * ell / t);
    sum += term;
    if (term < 1e-18 * std::max(sum, 1e-300)) break;
  }
  return sum;
}

double window(double t) { return t <= std::exp(-kEulerGamma) ? 1.0 : 0.0; }

}  // namespace

double corner_heat_term(double theta) {
  return (kPi * kPi - theta * theta) / (24.0 * kPi * theta);
}

double corner_log_sum(const GeometrySummary& summary) {
  double s = 0.0;
  for (const auto& c : summary.corners) s += 2.0 * corner_heat_term(c.angle);
  return s;
}

KacCoefficients kac_coefficients(const GeometrySummary& summary) {
  KacCoefficients k;
  k.a0 = summary.area() / (4.0 * kPi);
  k.a1 = -summary.perimeter / (8.0 * std::sqrt(kPi));
  for (const auto& c : summary.corners) k.a2 += corner_heat_term(c.angle);
  return k;
}

KacCoefficients rectangle_kac(double a, double b) {
  return {a * b / (4.0 * kPi), -2.0 * (a + b) / (8.0 * std::sqrt(kPi)),
          4.0 * corner_heat_term(kPi / 2.0)};
}

double dirichlet_theta_sum(double ell, double t) {
  const double x = t * kPi * kPi / (ell * ell);
  if (x >= 1.0) {
    double sum = 0.0;
    for (int m = 1; m < 100000; ++m) {
      const double term = std::exp(-x * double(m) * double(m));
      sum += term;
      if (term < 1e-18 * std::max(sum, 1e-300)) break;
    }
    return sum;
  }
  const double root = ell / std::sqrt(kPi * t);
  return 0.5 * (root * (1.0 + 2.0 * dual_tail(ell, t)) - 1.0);
}

double rectangle_heat_trace(double a, double b, double t) {
  if (!(a > 0.0 && b > 0.0 && t > 0.0)) throw Error("rectangle_heat_trace: a, b, t must be > 0");
  return dirichlet_theta_sum(a, t) * dirichlet_theta_sum(b, t);
}

std::vector<double> rectangle_eigenvalues(double a, double b, double cutoff) {
  std::vector<double> out;
  for (int m = 1;; ++m) {
    const double base = kPi * kPi * double(m) * double(m) / (a * a);
    if (base + kPi * kPi / (b * b) > cutoff) break;
    for (int n = 1;; ++n) {
      const double lambda = base + kPi * kPi * double(n) * double(n) / (b * b);
      if (lambda > cutoff) break;
      out.push_back(lambda);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t rectangle_counting(double a, double b, double cutoff) {
  return rectangle_eigenvalues(a, b, cutoff).size();
}

double rectangle_heat_trace_direct(double a, double b, double t, double cutoff) {
  CompensatedSum<double> sum;
  for (double lambda : rectangle_eigenvalues(a, b, cutoff)) sum.add(std::exp(-t * lambda));
  return sum.value();
}

double rectangle_regularized_trace(double a, double b, double t) {
  const KacCoefficients k = rectangle_kac(a, b);
  const double threshold = std::min(a, b) * std::min(a, b) / (kPi * kPi);
  if (t < threshold) {
    // Both factors in theta form: S = u + v with u = ℓ/(2 sqrt(πt)) - 1/2
    // and v = (ℓ/sqrt(πt)) Σ e^{-k²ℓ²/t}; u_a u_b is exactly the Kac part.
    const double ra = a / std::sqrt(kPi * t);
    const double rb = b / std::sqrt(kPi * t);
    const double ua = 0.5 * ra - 0.5, ub = 0.5 * rb - 0.5;
    const double va = ra * dual_tail(a, t), vb = rb * dual_tail(b, t);
    return ua * vb + va * ub + va * vb + k.a2 * (1.0 - window(t));
  }
  return rectangle_heat_trace(a, b, t) - k.a0 / t - k.a1 / std::sqrt(t) - k.a2 * window(t);
}

ZetaResult continuum_zeta_prime_zero(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw Error("rectangle sides must be positive");
  ZetaResult r;
  r.kac = rectangle_kac(a, b);
  const double lambda1 = kPi * kPi * (1.0 / (a * a) + 1.0 / (b * b));
  const double t_lo = std::min(a, b) * std::min(a, b) / 80.0;
  const double t_hi = 60.0 / lambda1;
  if (std::fabs(rectangle_regularized_trace(a, b, t_lo)) > 1e-12) {
    throw Error("regularized trace does not vanish at small t; Kac coefficients are wrong");
  }
  // In u = log t the measure dt/t becomes du.
  auto integrand = [a, b](double u) { return rectangle_regularized_trace(a, b, std::exp(u)); };
  const double split = -kEulerGamma;
  const double u_lo = std::log(t_lo), u_hi = std::log(t_hi);
  CompensatedSum<double> total;
  double err = 0.0;
  const auto add_pieces = [&](double lo, double hi) {
    if (hi <= lo) return;
    const int pieces = std::max(1, static_cast<int>(std::ceil(2.0 * (hi - lo))));
    const double h = (hi - lo) / pieces;
    for (int k = 0; k < pieces; ++k) {
      const auto q = integrate(integrand, lo + k * h, lo + (k + 1) * h, 1e-12, 8);
      total.add(q.value);
      err += q.error;
    }
  };
  add_pieces(u_lo, std::min(split, u_hi));
  add_pieces(std::max(split, u_lo), u_hi);
  // Beyond t_hi the trace itself is below e^{-60}; integrate -a0/t - a1/sqrt(t).
  total.add(-r.kac.a0 / t_hi - 2.0 * r.kac.a1 / std::sqrt(t_hi));
  const double trace_tail = rectangle_heat_trace(a, b, t_hi) / (lambda1 * t_hi);
  const double head = std::fabs(rectangle_regularized_trace(a, b, t_lo)) * 2.0;
  r.zeta_prime_0 = total.value();
  r.err_bound = err + trace_tail + head;
  if (!std::isfinite(r.zeta_prime_0)) throw Error("zeta integral diverged");
  return r;
}

double half_plane_defect(double x_perp, double t) {
  if (!(t > 0.0) || x_perp < 0.0) throw Error("half_plane_defect: need t > 0 and x_perp >= 0");
  return -std::exp(-x_perp * x_perp / t) / (4.0 * kPi * t);
}

}  // namespace polydet
