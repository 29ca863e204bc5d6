#include "polydet/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "polydet/continuum.hpp"
#include "polydet/domain.hpp"
#include "polydet/error.hpp"
#include "polydet/quadrature.hpp"
#include "polydet/spectral.hpp"
#include "polydet/summation.hpp"
#include "polydet/walker.hpp"

namespace polydet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxCondition = 1e10;

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("bad integer in L range: '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct Design {
  Eigen::MatrixXd X;
  std::vector<std::string> names;
};

struct Solved {
  Eigen::VectorXd beta;
  double condition = 0.0;
};

Solved solve_equilibrated(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  Eigen::VectorXd scale(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double m = X.col(j).cwiseAbs().maxCoeff();
    scale(j) = m > 0.0 ? m : 1.0;
  }
  const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xs);
  const auto& sv = svd.singularValues();
  Solved s;
  const double smin = sv(sv.size() - 1);
  s.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(s.condition < kMaxCondition)) return s;
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
  s.beta = qr.solve(y).cwiseQuotient(scale);
  return s;
}

}  // namespace

std::string sigma_descriptor(std::span<const Puncture> base_punctures, CutDirection dir) {
  std::vector<Puncture> sorted(base_punctures.begin(), base_punctures.end());
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream os;
  os << to_string(dir) << ':';
  for (const auto& s : sorted) os << '[' << s.x2 << ' ' << s.y2 << ']';
  return os.str();
}

std::vector<std::int64_t> geometric_scales(std::int64_t lo, std::int64_t hi) {
  if (lo < 1 || hi < lo) throw ConfigError("geometric L range needs 1 <= lo <= hi");
  std::vector<std::int64_t> out;
  for (int k = 0;; ++k) {
    const double v = static_cast<double>(lo) * std::pow(std::numbers::sqrt2, k);
    if (v > static_cast<double>(hi) * (1.0 + 1e-12)) break;
    const std::int64_t L = std::llround(v);
    if (out.empty() || out.back() != L) out.push_back(L);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

std::vector<std::int64_t> parse_scale_range(std::string_view spec) {
  std::vector<std::int64_t> out;
  if (spec.find(':') != std::string_view::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw ConfigError("L range must be lo:hi:geom or lo:hi:step");
    const auto lo = parse_int(parts[0]), hi = parse_int(parts[1]);
    if (parts[2] == "geom") return geometric_scales(lo, hi);
    const auto step = parse_int(parts[2]);
    if (step < 1 || lo < 1 || hi < lo) throw ConfigError("L range needs 1 <= lo <= hi and step >= 1");
    for (auto L = lo; L <= hi; L += step) out.push_back(L);
  } else {
    for (auto part : split(spec, ',')) {
      const auto L = parse_int(part);
      if (L < 1) throw ConfigError("L values must be positive");
      out.push_back(L);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  if (out.empty()) throw ConfigError("empty L range");
  return out;
}

SweepRecord sweep_one(const LatticeRegion& base, std::span<const Puncture> base_punctures,
                      CutDirection dir, std::int64_t L) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Puncture> pts(base_punctures.begin(), base_punctures.end());
  SweepRecord r;
  r.L = L;
  r.sigma = sigma_descriptor(base_punctures, dir);
  try {
    const Domain d = make_scaled_domain(base, L, pts, dir);
    r.n_sites = static_cast<std::int64_t>(d.graph.vertices.size());
    r.n_edges = static_cast<std::int64_t>(d.graph.edges.size());
    r.ext_boundary = static_cast<std::int64_t>(d.graph.ext_boundary.size());
    r.class_counts = boundary_class_counts(d.region, d.graph);
    r.logdet = logdet(assemble(d.graph, d.connection));
  } catch (const FactorizationError& e) {
    throw FactorizationError("L=" + std::to_string(L) + ": " + e.what());
  } catch (const GeometryError& e) {
    throw GeometryError("L=" + std::to_string(L) + ": " + e.what());
  }
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<SweepRecord> sweep(const LatticeRegion& base, std::span<const Puncture> base_punctures,
                               std::span<const std::int64_t> scales, CutDirection dir) {
  const auto count = static_cast<std::ptrdiff_t>(scales.size());
  std::vector<SweepRecord> out(scales.size());
  std::vector<std::exception_ptr> errors(scales.size());
  // Largest L first so the long factorizations start early.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(count - 1 - k);
    try {
      out[i] = sweep_one(base, base_punctures, dir, scales[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

FitReport fit_expansion(std::span<const SweepRecord> records, const FitOptions& options) {
  std::set<std::int64_t> distinct;
  for (const auto& r : records) distinct.insert(r.L);
  if (distinct.size() < 6) throw FitError("fit needs at least 6 distinct L values");
  if (*distinct.rbegin() < 8 * *distinct.begin()) throw FitError("fit needs L_max / L_min >= 8");

  const auto m = static_cast<Eigen::Index>(records.size());
  std::set<std::string> keys;
  for (const auto& r : records)
    for (const auto& [k, c] : r.class_counts) keys.insert(k);

  FitReport rep;
  rep.alpha0_pinned = options.pinned_alpha0.has_value();
  rep.corner_sum = options.corner_sum;
  std::vector<std::string> varying;
  for (const auto& k : keys) {
    std::set<std::int64_t> values;
    for (const auto& r : records) {
      const auto it = r.class_counts.find(k);
      values.insert(it == r.class_counts.end() ? 0 : it->second);
    }
    (values.size() > 1 ? varying : rep.absorbed_classes).push_back(k);
  }

  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    y(i) = r.logdet - (rep.alpha0_pinned ? *options.pinned_alpha0 * static_cast<double>(r.n_sites) : 0.0);
  }

  const auto build = [&](bool lumped) {
    Design d;
    const Eigen::Index class_cols = lumped ? (varying.empty() ? 0 : 1) : static_cast<Eigen::Index>(varying.size());
    const Eigen::Index cols = (rep.alpha0_pinned ? 0 : 1) + class_cols + 2;
    d.X.resize(m, cols);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& r = records[static_cast<std::size_t>(i)];
      Eigen::Index c = 0;
      if (!rep.alpha0_pinned) d.X(i, c++) = static_cast<double>(r.n_sites);
      double lump = 0.0;
      for (const auto& k : varying) {
        const auto it = r.class_counts.find(k);
        const double v = it == r.class_counts.end() ? 0.0 : static_cast<double>(it->second);
        if (lumped) lump += v;
        else d.X(i, c++) = v;
      }
      if (lumped && class_cols) d.X(i, c++) = lump;
      d.X(i, c++) = std::log(static_cast<double>(r.L));
      d.X(i, c++) = 1.0;
    }
    if (!rep.alpha0_pinned) d.names.push_back("n");
    if (lumped) {
      if (class_cols) d.names.push_back("lumped");
    } else {
      d.names.insert(d.names.end(), varying.begin(), varying.end());
    }
    d.names.push_back("logL");
    d.names.push_back("1");
    return d;
  };

  Design design = build(false);
  rep.boundary_model = BoundaryModel::PerClass;
  if (design.X.cols() >= m) throw FitError("more regressors than records");
  Solved s = solve_equilibrated(design.X, y);
  if (!(s.condition < kMaxCondition) && varying.size() > 1) {
    design = build(true);
    rep.boundary_model = BoundaryModel::Lumped;
    s = solve_equilibrated(design.X, y);
  }
  rep.condition_number = s.condition;
  if (!(s.condition < kMaxCondition)) {
    std::ostringstream os;
    os << "rank-deficient design: condition number " << s.condition << " with regressors {";
    for (std::size_t j = 0; j < design.names.size(); ++j) os << (j ? ", " : "") << design.names[j];
    os << "}";
    throw FitError(os.str());
  }

  Eigen::Index c = 0;
  rep.alpha0 = rep.alpha0_pinned ? *options.pinned_alpha0 : s.beta(c++);
  const auto first_class = static_cast<std::size_t>(c);
  for (std::size_t j = first_class; j + 2 < design.names.size(); ++j)
    rep.class_coefficients[design.names[j]] = s.beta(c++);
  rep.alpha2 = s.beta(c++);
  rep.alpha3 = s.beta(c++);

  const Eigen::VectorXd resid = y - design.X * s.beta;
  double ss = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    rep.scales.push_back(records[static_cast<std::size_t>(i)].L);
    rep.residuals.push_back(resid(i));
    ss += resid(i) * resid(i);
    rep.residual_max = std::max(rep.residual_max, std::fabs(resid(i)));
  }
  rep.residual_rms = std::sqrt(ss / static_cast<double>(m));

  if (options.corner_sum && *options.corner_sum != 0.0) {
    const double S = *options.corner_sum;
    rep.alpha2_sign = std::fabs(rep.alpha2 - S) <= std::fabs(rep.alpha2 + S) ? 1 : -1;
    rep.alpha2_verdict = rep.alpha2_sign > 0 ? "plus_corner_sum" : "minus_two_a2";
  } else {
    rep.alpha2_verdict = "undetermined";
  }
  return rep;
}

Alpha0Reference alpha0_reference() {
  Alpha0Reference ref;

  // Heat-kernel route in u = log t. Below t_lo the integrand is ~4t.
  const double t_lo = 1e-12, t_hi = 1e8;
  const double split = -kEulerGamma;
  const auto lower = [](double u) { return 1.0 - free_return_prob(std::exp(u)); };
  const auto upper = [](double u) { return -free_return_prob(std::exp(u)); };
  CompensatedSum<double> total;
  const auto add_pieces = [&](auto&& f, double lo, double hi) {
    const int pieces = std::max(1, static_cast<int>(std::ceil(hi - lo)));
    const double h = (hi - lo) / pieces;
    for (int k = 0; k < pieces; ++k) total.add(integrate(f, lo + k * h, lo + (k + 1) * h, 1e-12, 8).value);
  };
  add_pieces(lower, std::log(t_lo), split);
  add_pieces(upper, split, std::log(t_hi));
  total.add(4.0 * t_lo);
  // P0(t) = (1/4πt)(1 + 1/(8t) + ...) for large t.
  total.add(-(1.0 / t_hi + 1.0 / (16.0 * t_hi * t_hi)) / (4.0 * kPi));
  ref.heat_kernel_integral = total.value();

  // Lattice route: the inner φ integral of log(a - 2cos φ) is
  // 2π log((a + sqrt(a² - 4))/2), leaving a smooth integral over θ in [0, π].
  const auto inner = [](double theta) {
    const double a = 4.0 - 2.0 * std::cos(theta);
    const double s = 2.0 * std::sin(0.5 * theta) * std::sqrt(6.0 - 2.0 * std::cos(theta));
    return std::log(0.5 * (a + s));
  };
  CompensatedSum<double> lattice;
  for (int k = 0; k < 8; ++k)
    lattice.add(integrate(inner, kPi * k / 8.0, kPi * (k + 1) / 8.0, 1e-12, 8).value);
  ref.lattice_integral = lattice.value() / kPi;

  if (std::fabs(ref.heat_kernel_integral - ref.lattice_integral) > 1e-8) {
    std::ostringstream os;
    os.precision(17);
    os << "alpha0 oracles disagree: quadrature " << ref.heat_kernel_integral << " vs lattice "
       << ref.lattice_integral;
    throw Error(os.str());
  }
  return ref;
}

bool RatioTable::cauchy_converged(double tol, std::int64_t from_L) const {
  double prev = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].L < from_L) continue;
    const double d = std::fabs(rows[i].delta);
    if (d > prev) return false;
    prev = d;
    any = true;
  }
  return any && prev < tol;
}

RatioTable sigma_ratio_experiment(const LatticeRegion& base, std::span<const Puncture> sigma1,
                                  std::span<const Puncture> sigma2,
                                  std::span<const std::int64_t> scales, CutDirection dir,
                                  const FitOptions& fit_options) {
  std::vector<std::int64_t> Ls(scales.begin(), scales.end());
  std::sort(Ls.begin(), Ls.end());
  Ls.erase(std::unique(Ls.begin(), Ls.end()), Ls.end());
  RatioTable table;
  table.first = sweep(base, sigma1, Ls, dir);
  table.second = sweep(base, sigma2, Ls, dir);
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    RatioRow row;
    row.L = Ls[i];
    row.logdet_first = table.first[i].logdet;
    row.logdet_second = table.second[i].logdet;
    row.difference = row.logdet_first - row.logdet_second;
    row.delta = i ? row.difference - table.rows.back().difference : 0.0;
    table.rows.push_back(row);
  }
  table.limit = table.rows.empty() ? 0.0 : table.rows.back().difference;
  try {
    table.fit_first = fit_expansion(table.first, fit_options);
    table.fit_second = fit_expansion(table.second, fit_options);
    table.fitted_difference = table.fit_first->alpha3 - table.fit_second->alpha3;
  } catch (const FitError&) {
    table.fit_first.reset();
    table.fit_second.reset();
  }
  return table;
}

}  // namespace polydet
