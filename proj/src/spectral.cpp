#include "polydet/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "polydet/error.hpp"
#include "polydet/lanczos.hpp"
#include "polydet/quadrature.hpp"
#include "polydet/summation.hpp"

namespace polydet {

struct SymmetricOperator::SpectrumCache {
  std::once_flag once;
  std::vector<double> values;
};

SymmetricOperator::SymmetricOperator(SparseMatrix matrix)
    : matrix_(std::move(matrix)), cache_(std::make_shared<SpectrumCache>()) {
  if (matrix_.rows() != matrix_.cols()) throw Error("operator must be square");
  matrix_.makeCompressed();
}

std::span<const double> SymmetricOperator::spectrum(std::size_t threshold) const {
  if (dimension() > threshold) {
    throw Error("dense spectrum requested for n = " + std::to_string(dimension()) +
                " above threshold " + std::to_string(threshold));
  }
  std::call_once(cache_->once, [this] {
    const Eigen::MatrixXd dense = Eigen::MatrixXd(matrix_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("dense eigensolver failed");
    const auto& ev = solver.eigenvalues();
    cache_->values.assign(ev.data(), ev.data() + ev.size());
    std::sort(cache_->values.begin(), cache_->values.end());
  });
  return cache_->values;
}

SymmetricOperator assemble(const DomainGraph& graph, const FlatConnection& conn) {
  if (conn.vertex_count() != graph.size() || conn.edge_signs().size() != graph.edges.size()) {
    throw ConnectionError("connection was built for a different graph");
  }
  const auto n = static_cast<Eigen::Index>(graph.size());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(graph.size() + 2 * graph.edges.size());
  for (Eigen::Index i = 0; i < n; ++i) entries.emplace_back(i, i, 4.0);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto [i, j] = graph.edges[e];
    const double w = -static_cast<double>(conn.edge_signs()[e]);
    entries.emplace_back(i, j, w);
    entries.emplace_back(j, i, w);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());
  return SymmetricOperator(std::move(m));
}

double logdet(const SymmetricOperator& op) {
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(op.matrix());
  if (ldlt.info() != Eigen::Success) throw FactorizationError("not positive definite");
  const Eigen::VectorXd d = ldlt.vectorD();
  CompensatedSum<long double> sum;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      throw FactorizationError("not positive definite (pivot " + std::to_string(i) + " = " +
                               std::to_string(d[i]) + ")");
    }
    sum.add(std::log(static_cast<long double>(d[i])));
  }
  return static_cast<double>(sum.value());
}

std::vector<double> dense_spectrum(const SymmetricOperator& op, std::size_t threshold) {
  const auto s = op.spectrum(threshold);
  return {s.begin(), s.end()};
}

double heat_trace_from_spectrum(std::span<const double> spectrum, double t) {
  CompensatedSum<double> sum;
  for (double mu : spectrum) sum.add(std::exp(-t * mu));
  return sum.value();
}

HeatTracePoint heat_trace(const SymmetricOperator& op, double t, std::size_t dense_threshold,
                          const SlqOptions& slq) {
  if (!(t >= 0.0)) throw Error("heat_trace: t must be nonnegative");
  if (t == 0.0) return {t, static_cast<double>(op.dimension()), 0.0, true};
  if (op.dimension() <= dense_threshold) {
    return {t, heat_trace_from_spectrum(op.spectrum(dense_threshold), t), 0.0, true};
  }
  const TraceEstimate est = slq_trace_exp(op.matrix(), t, slq);
  return {t, est.mean, est.std_error, false};
}

double discrete_zeta_prime_zero(std::span<const double> spectrum) {
  if (spectrum.empty()) throw Error("empty spectrum");
  double mu_min = spectrum[0];
  double mu_sum = 0.0;
  for (double mu : spectrum) {
    if (!(mu > 0.0)) throw Error("nonpositive eigenvalue in spectrum");
    mu_min = std::min(mu_min, mu);
    mu_sum += mu;
  }
  const double n = static_cast<double>(spectrum.size());
  const double split = -kEulerGamma;  // log of e^{-gamma}

  // Substituting t = e^u turns dt/t into du and both pieces into smooth,
  // rapidly decaying integrands.
  auto small_t = [&](double u) {
    const double t = std::exp(u);
    CompensatedSum<double> s;
    for (double mu : spectrum) s.add(std::expm1(-t * mu));
    return s.value();
  };
  auto large_t = [&](double u) {
    const double t = std::exp(u);
    CompensatedSum<double> s;
    for (double mu : spectrum) s.add(std::exp(-t * mu));
    return s.value();
  };

  // Lower cut: below it the integrand is -t*sum(mu) + O(t^2); add that tail
  // in closed form.
  const double u_lo = std::log(1e-12 / mu_sum);
  double mu2_sum = 0.0;
  for (double mu : spectrum) mu2_sum += mu * mu;
  const double t_lo = std::exp(u_lo);
  const double lower_tail = -t_lo * mu_sum + 0.25 * t_lo * t_lo * mu2_sum;

  // Upper cut: remaining integral is below n e^{-T mu_min} / (T mu_min).
  double upper_t = 1.0 / mu_min;
  while (n * std::exp(-upper_t * mu_min) / (upper_t * mu_min) > 1e-16 * mu_min) upper_t *= 1.25;
  const double u_hi = std::log(upper_t);

  CompensatedSum<double> total;
  total.add(lower_tail);
  const auto add_pieces = [&](auto& f, double a, double b) {
    const int pieces = std::max(1, static_cast<int>(std::ceil(b - a)));
    const double h = (b - a) / pieces;
    for (int k = 0; k < pieces; ++k) {
      total.add(integrate(f, a + k * h, a + (k + 1) * h, 1e-12, 8).value);
    }
  };
  add_pieces(small_t, u_lo, split);
  add_pieces(large_t, split, u_hi);
  return total.value();
}

}  // namespace polydet
