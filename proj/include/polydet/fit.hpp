#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polydet/connection.hpp"
#include "polydet/geometry.hpp"

namespace polydet {

/// One log-determinant evaluation of L*Π.
struct SweepRecord {
  std::int64_t L = 0;
  std::int64_t n_sites = 0;
  std::int64_t n_edges = 0;
  std::int64_t ext_boundary = 0;
  std::map<std::string, std::int64_t> class_counts;  // boundary shape class -> sites
  double logdet = 0.0;
  std::string sigma;  // canonical puncture descriptor
  double runtime_ms = 0.0;
};

std::string sigma_descriptor(std::span<const Puncture> base_punctures, CutDirection dir);

/// ×√2 geometric grid from lo to hi (both included), rounded to integers.
std::vector<std::int64_t> geometric_scales(std::int64_t lo, std::int64_t hi);

/// "8:256:geom", "8:64:8" (arithmetic step) or "8,16,32".
std::vector<std::int64_t> parse_scale_range(std::string_view spec);

SweepRecord sweep_one(const LatticeRegion& base, std::span<const Puncture> base_punctures,
                      CutDirection dir, std::int64_t L);

/// Records for every L, in the order given; L values run in parallel.
std::vector<SweepRecord> sweep(const LatticeRegion& base, std::span<const Puncture> base_punctures,
                               std::span<const std::int64_t> scales,
                               CutDirection dir = CutDirection::PosX);

struct FitOptions {
  std::optional<double> pinned_alpha0;
  /// Σ (π² - θ²)/(12πθ) of the base region; enables the α2 sign verdict.
  std::optional<double> corner_sum;
};

enum class BoundaryModel { PerClass, Lumped };

struct FitReport {
  double alpha0 = 0.0;
  bool alpha0_pinned = false;
  BoundaryModel boundary_model = BoundaryModel::PerClass;
  /// Coefficients of boundary classes whose counts change with L ("lumped"
  /// when they had to be merged into one column).
  std::map<std::string, double> class_coefficients;
  /// Classes with L-independent counts; their α1 values sit in alpha3.
  std::vector<std::string> absorbed_classes;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  std::vector<std::int64_t> scales;
  std::vector<double> residuals;
  double residual_rms = 0.0;
  double residual_max = 0.0;
  double condition_number = 0.0;
  std::optional<double> corner_sum;
  /// +1 if α2 is nearer +corner_sum, -1 if nearer -corner_sum, 0 if unknown.
  int alpha2_sign = 0;
  std::string alpha2_verdict;
};

FitReport fit_expansion(std::span<const SweepRecord> records, const FitOptions& options = {});

struct Alpha0Reference {
  double heat_kernel_integral = 0.0;  // ∫ [1(t < e^{-γ}) - P0(t)] dt/t
  double lattice_integral = 0.0;      // (1/4π²)∬ log(4 - 2cos θ - 2cos φ)
  double value() const noexcept { return lattice_integral; }
};

/// Both routes to the per-site constant; throws if they disagree by > 1e-8.
Alpha0Reference alpha0_reference();

struct RatioRow {
  std::int64_t L = 0;
  double logdet_first = 0.0;
  double logdet_second = 0.0;
  double difference = 0.0;
  double delta = 0.0;  // change from the previous L (0 for the first row)
};

struct RatioTable {
  std::vector<RatioRow> rows;
  std::vector<SweepRecord> first;
  std::vector<SweepRecord> second;
  std::optional<FitReport> fit_first;
  std::optional<FitReport> fit_second;
  double limit = 0.0;  // difference at the largest L
  std::optional<double> fitted_difference;

  /// |delta| non-increasing from `from_L` on and below `tol` at the end.
  bool cauchy_converged(double tol, std::int64_t from_L) const;
};

RatioTable sigma_ratio_experiment(const LatticeRegion& base, std::span<const Puncture> sigma1,
                                  std::span<const Puncture> sigma2,
                                  std::span<const std::int64_t> scales,
                                  CutDirection dir = CutDirection::PosX,
                                  const FitOptions& fit_options = {});

}  // namespace polydet
