#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "polydet/connection.hpp"
#include "polydet/fit.hpp"
#include "polydet/geometry.hpp"
#include "polydet/store.hpp"
#include "polydet/walker.hpp"

namespace polydet {

/// Contents of a domain file:
///   {"format": 1, "loops": [[[x, y], ...], ...], "scale": 1,
///    "sigma": [[x2, y2], ...], "cut_dir": "+x"}
/// Loop vertices are integers; sigma entries are doubled coordinates of the
/// unscaled region.
struct DomainSpec {
  std::vector<Loop> loops;
  std::int64_t scale = 1;
  std::vector<Puncture> sigma;
  CutDirection cut = CutDirection::PosX;

  LatticeRegion base() const { return LatticeRegion(loops, 1); }
};

/// Throws ConfigError for unreadable files or malformed content, including
/// invalid geometry.
DomainSpec parse_domain_spec(const nlohmann::json& j);
DomainSpec load_domain_spec(const std::filesystem::path& path);
nlohmann::json to_json(const DomainSpec& spec);

/// Puncture list as doubled coordinates, e.g. "3,3;5,1".
std::vector<Puncture> parse_sigma_list(const std::string& text);

nlohmann::json to_json(const SweepRecord& r);
nlohmann::json to_json(const FitReport& r);
nlohmann::json to_json(const RatioTable& t);
nlohmann::json to_json(const McEstimate& e);
nlohmann::json to_json(const DecayTable& t);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace polydet
