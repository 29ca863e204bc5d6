#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace polydet {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

/// quick: exact determinants, matrix-tree, gauge, monodromy, zeta identity,
/// Kac and rescaling checks. full: everything, including the large sweeps.
enum class Suite { Quick, Full };

Suite parse_suite(std::string_view name);

struct AcceptanceOptions {
  std::uint64_t seed = 20240917;
  std::int64_t max_scale = 256;       // square / L-shape / rectangle sweeps
  std::int64_t ratio_max_scale = 128;  // annulus Σ-ratio sweep
};

std::vector<CriterionResult> run_acceptance(
    Suite suite, const AcceptanceOptions& options = {},
    const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [3] gauge-invariance (0.41 s): ..."
std::string format_result(const CriterionResult& r);

}  // namespace polydet
