#include "polydet/lanczos.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "polydet/error.hpp"

namespace polydet {

namespace {

double probe_quadratic_form(const SparseMatrix& a, double t, int steps, std::uint64_t seed,
                            int probe) {
  const Eigen::Index n = a.rows();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(probe), 0x51A9u};
  std::mt19937_64 rng(seq);
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = coin(rng) ? 1.0 : -1.0;

  const int m = static_cast<int>(std::min<Eigen::Index>(steps, n));
  Eigen::MatrixXd basis(n, m);
  std::vector<double> alpha, beta;
  basis.col(0) = z / std::sqrt(double(n));
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd w = a * basis.col(k);
    const double ak = basis.col(k).dot(w);
    alpha.push_back(ak);
    // Full reorthogonalization against the whole basis (twice is enough).
    for (int pass = 0; pass < 2; ++pass) {
      w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
    }
    if (k + 1 == m) break;
    const double bk = w.norm();
    if (bk < 1e-12) break;
    beta.push_back(bk);
    basis.col(k + 1) = w / bk;
  }
  const int size = static_cast<int>(alpha.size());
  Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), size);
  Eigen::VectorXd sub = Eigen::VectorXd::Zero(std::max(size - 1, 0));
  for (int k = 0; k + 1 < size; ++k) sub[k] = beta[static_cast<std::size_t>(k)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  double quad = 0.0;
  for (int k = 0; k < size; ++k) {
    const double w0 = tri.eigenvectors()(0, k);
    quad += w0 * w0 * std::exp(-t * tri.eigenvalues()[k]);
  }
  return double(n) * quad;
}

}  // namespace

TraceEstimate slq_trace_exp(const SparseMatrix& a, double t, const SlqOptions& options) {
  if (options.probes < 2) throw Error("stochastic Lanczos quadrature needs at least 2 probes");
  std::vector<double> samples(static_cast<std::size_t>(options.probes));
#pragma omp parallel for schedule(dynamic)
  for (int p = 0; p < options.probes; ++p) {
    samples[static_cast<std::size_t>(p)] =
        probe_quadratic_form(a, t, options.lanczos_steps, options.seed, p);
  }
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= double(samples.size());
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= double(samples.size() - 1);
  return {mean, std::sqrt(var / double(samples.size())), options.probes};
}

}  // namespace polydet
