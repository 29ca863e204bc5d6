#pragma once

#include <cstddef>
#include <vector>

#include "polydet/geometry.hpp"

namespace polydet {

/// Small-time heat trace coefficients: Tr e^{-tΔ} ~ a0/t + a1/sqrt(t) + a2.
struct KacCoefficients {
  double a0 = 0.0;  // area / 4π
  double a1 = 0.0;  // -perimeter / (8 sqrt π)
  double a2 = 0.0;  // Σ (π² - θ²) / (24 π θ) over corners
};

/// Contribution (π² - θ²)/(24πθ) of one corner of interior angle θ to a2.
double corner_heat_term(double theta);

/// Σ (π² - θ²)/(12πθ) over corners, i.e. 2*a2; the magnitude of the
/// log-L coefficient of the lattice log-determinant.
double corner_log_sum(const GeometrySummary& summary);

KacCoefficients kac_coefficients(const GeometrySummary& summary);
KacCoefficients rectangle_kac(double a, double b);

/// Σ_{m>=1} exp(-t π² m² / ℓ²): direct summation for tπ²/ℓ² >= 1, the
/// Poisson-resummed (theta) form below that.
double dirichlet_theta_sum(double ell, double t);

/// Dirichlet heat trace of the a x b rectangle.
double rectangle_heat_trace(double a, double b, double t);

/// Same trace from explicitly enumerated eigenvalues up to `cutoff`.
double rectangle_heat_trace_direct(double a, double b, double t, double cutoff);

/// Eigenvalues π²(m²/a² + n²/b²) <= cutoff, sorted.
std::vector<double> rectangle_eigenvalues(double a, double b, double cutoff);
std::size_t rectangle_counting(double a, double b, double cutoff);

/// Tr e^{-tΔ} - a0/t - a1/sqrt(t) - a2 1[t <= e^{-γ}], evaluated without
/// catastrophic cancellation at small t.
double rectangle_regularized_trace(double a, double b, double t);

struct ZetaResult {
  KacCoefficients kac;
  double zeta_prime_0 = 0.0;
  double err_bound = 0.0;
};

/// ζ'(0) of the Dirichlet Laplacian on the a x b rectangle as the integral of
/// the regularized trace against dt/t.
ZetaResult continuum_zeta_prime_zero(double a, double b);

/// Heat-kernel diagonal defect of a half-plane at distance x_perp from its
/// edge: -(1/4πt) exp(-x_perp²/t).
double half_plane_defect(double x_perp, double t);

}  // namespace polydet
