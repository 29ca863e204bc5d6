#include "polydet/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "polydet/error.hpp"

namespace polydet {

namespace {

std::int64_t as_integer(const nlohmann::json& v, const char* what) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d) && std::fabs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  throw ConfigError(std::string("non-integer ") + what + ": " + v.dump());
}

}  // namespace

DomainSpec parse_domain_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("domain file must hold a JSON object");
  if (j.contains("format") && j["format"] != kFileFormat) throw ConfigError("unsupported domain format");
  if (!j.contains("loops") || !j["loops"].is_array() || j["loops"].empty())
    throw ConfigError("domain needs a nonempty \"loops\" array");
  DomainSpec spec;
  for (const auto& loop : j["loops"]) {
    if (!loop.is_array()) throw ConfigError("each loop must be an array of [x, y] vertices");
    Loop l;
    for (const auto& v : loop) {
      if (!v.is_array() || v.size() != 2) throw ConfigError("vertex must be [x, y]: " + v.dump());
      l.push_back({as_integer(v[0], "vertex"), as_integer(v[1], "vertex")});
    }
    spec.loops.push_back(std::move(l));
  }
  if (j.contains("scale")) {
    spec.scale = as_integer(j["scale"], "scale");
    if (spec.scale < 1) throw ConfigError("scale must be >= 1");
  }
  if (j.contains("sigma")) {
    for (const auto& s : j["sigma"]) {
      if (!s.is_array() || s.size() != 2) throw ConfigError("sigma entry must be [x2, y2]: " + s.dump());
      spec.sigma.push_back({as_integer(s[0], "puncture"), as_integer(s[1], "puncture")});
    }
  }
  if (j.contains("cut_dir")) spec.cut = parse_cut_direction(j["cut_dir"].get<std::string>());
  try {
    const LatticeRegion region = spec.base();
    PunctureSet check(region, spec.sigma);
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("invalid domain: ") + e.what());
  } catch (const ConnectionError& e) {
    throw ConfigError(std::string("invalid sigma: ") + e.what());
  }
  return spec;
}

DomainSpec load_domain_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open domain file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_domain_spec(j);
}

nlohmann::json to_json(const DomainSpec& spec) {
  nlohmann::json j;
  j["format"] = kFileFormat;
  j["loops"] = nlohmann::json::array();
  for (const auto& loop : spec.loops) {
    auto l = nlohmann::json::array();
    for (const auto& p : loop) l.push_back({p.x, p.y});
    j["loops"].push_back(l);
  }
  j["scale"] = spec.scale;
  j["sigma"] = nlohmann::json::array();
  for (const auto& s : spec.sigma) j["sigma"].push_back({s.x2, s.y2});
  j["cut_dir"] = to_string(spec.cut);
  return j;
}

std::vector<Puncture> parse_sigma_list(const std::string& text) {
  std::vector<Puncture> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw ConfigError("sigma entry must be x2,y2: '" + item + "'");
    try {
      std::size_t a = 0, b = 0;
      const auto x = std::stoll(item.substr(0, comma), &a);
      const auto rest = item.substr(comma + 1);
      const auto y = std::stoll(rest, &b);
      if (a != comma || b != rest.size()) throw std::invalid_argument(item);
      out.push_back({x, y});
    } catch (const std::logic_error&) {
      throw ConfigError("sigma entry must be x2,y2: '" + item + "'");
    }
  }
  return out;
}

nlohmann::json to_json(const SweepRecord& r) {
  return {{"L", r.L},           {"n", r.n_sites},         {"edges", r.n_edges},
          {"ext_boundary", r.ext_boundary}, {"class_counts", r.class_counts},
          {"logdet", r.logdet}, {"sigma", r.sigma}};
}

nlohmann::json to_json(const FitReport& r) {
  nlohmann::json j;
  j["format"] = kFileFormat;
  j["alpha0"] = r.alpha0;
  j["alpha0_pinned"] = r.alpha0_pinned;
  j["boundary_model"] = r.boundary_model == BoundaryModel::PerClass ? "per_class" : "lumped";
  j["class_coefficients"] = r.class_coefficients;
  j["absorbed_classes"] = r.absorbed_classes;
  j["alpha2"] = r.alpha2;
  j["alpha3"] = r.alpha3;
  j["residuals"] = nlohmann::json::array();
  for (std::size_t i = 0; i < r.scales.size(); ++i)
    j["residuals"].push_back({{"L", r.scales[i]}, {"residual", r.residuals[i]}});
  j["residual_rms"] = r.residual_rms;
  j["residual_max"] = r.residual_max;
  j["condition_number"] = r.condition_number;
  if (r.corner_sum) j["corner_sum"] = *r.corner_sum;
  j["alpha2_sign"] = r.alpha2_sign;
  j["alpha2_verdict"] = r.alpha2_verdict;
  return j;
}

nlohmann::json to_json(const RatioTable& t) {
  nlohmann::json j;
  j["format"] = kFileFormat;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : t.rows)
    j["rows"].push_back({{"L", r.L},
                         {"logdet_first", r.logdet_first},
                         {"logdet_second", r.logdet_second},
                         {"difference", r.difference},
                         {"delta", r.delta}});
  j["limit"] = t.limit;
  if (t.fitted_difference) {
    j["fitted_difference"] = *t.fitted_difference;
    j["fit_first"] = to_json(*t.fit_first);
    j["fit_second"] = to_json(*t.fit_second);
  }
  return j;
}

nlohmann::json to_json(const McEstimate& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"samples", e.samples}, {"seed", e.seed}};
}

nlohmann::json to_json(const DecayTable& t) {
  nlohmann::json j;
  j["format"] = kFileFormat;
  j["distance"] = t.distance;
  j["fitted_constant"] = t.fitted_constant;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : t.rows)
    j["rows"].push_back({{"t", r.t},
                         {"difference", r.difference},
                         {"std_error", r.std_error},
                         {"envelope", r.envelope},
                         {"ratio", r.ratio}});
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace polydet
