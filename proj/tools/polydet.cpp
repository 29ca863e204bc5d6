#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polydet/acceptance.hpp"
#include "polydet/continuum.hpp"
#include "polydet/domain.hpp"
#include "polydet/error.hpp"
#include "polydet/fit.hpp"
#include "polydet/io.hpp"
#include "polydet/spectral.hpp"
#include "polydet/store.hpp"
#include "polydet/walker.hpp"

using namespace polydet;
using nlohmann::json;

namespace {

struct DomainArgs {
  std::string path;
  std::int64_t scale = 0;  // 0: take it from the file
  std::string sigma;       // overrides the file when set
  std::string cut;

  void attach(CLI::App* app, bool with_scale = true) {
    app->add_option("--domain", path, "domain JSON file")->required();
    if (with_scale) app->add_option("--scale", scale, "scale factor L")->check(CLI::PositiveNumber);
    app->add_option("--sigma", sigma, "punctures as doubled coordinates 'x2,y2;...'");
    app->add_option("--cut", cut, "cut direction (+x, -x, +y, -y)");
  }

  DomainSpec spec() const {
    DomainSpec s = load_domain_spec(path);
    if (scale > 0) s.scale = scale;
    if (!sigma.empty()) s.sigma = parse_sigma_list(sigma);
    if (!cut.empty()) s.cut = parse_cut_direction(cut);
    return s;
  }

  Domain domain() const {
    const DomainSpec s = spec();
    return make_scaled_domain(s.base(), s.scale, s.sigma, s.cut);
  }
};

void emit(const json& j, const std::string& out) {
  if (out.empty()) std::cout << j.dump(2) << '\n';
  else write_json(out, j);
}

LatticePoint parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("point must be 'x,y'");
  try {
    return {std::stoll(text.substr(0, comma)), std::stoll(text.substr(comma + 1))};
  } catch (const std::logic_error&) {
    throw ConfigError("point must be 'x,y'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("POLYDET_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }

  CLI::App app{"Lattice Laplacian determinants on scaled polygons"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  std::string out;

  auto* graph_cmd = app.add_subcommand("graph", "lattice graph and geometry summary");
  DomainArgs graph_args;
  graph_args.attach(graph_cmd);
  graph_cmd->add_option("--out", out, "output JSON (stdout if omitted)");

  auto* logdet_cmd = app.add_subcommand("logdet", "log det of the twisted Dirichlet operator");
  DomainArgs logdet_args;
  logdet_args.attach(logdet_cmd);
  std::optional<std::uint64_t> gauge_seed;
  logdet_cmd->add_option("--gauge", gauge_seed, "apply a random vertex gauge with this seed");
  logdet_cmd->add_option("--out", out, "output JSON");

  auto* heat_cmd = app.add_subcommand("heat", "heat trace Tr exp(-tM)");
  DomainArgs heat_args;
  heat_args.attach(heat_cmd);
  std::vector<double> times;
  SlqOptions slq;
  std::size_t dense_threshold = kDenseThreshold;
  heat_cmd->add_option("--t", times, "times")->required()->check(CLI::NonNegativeNumber);
  heat_cmd->add_option("--probes", slq.probes, "SLQ probe vectors")->check(CLI::PositiveNumber);
  heat_cmd->add_option("--lanczos-steps", slq.lanczos_steps, "SLQ Lanczos steps")->check(CLI::PositiveNumber);
  heat_cmd->add_option("--seed", slq.seed, "SLQ seed");
  heat_cmd->add_option("--dense-threshold", dense_threshold, "largest dimension for the dense path");
  heat_cmd->add_option("--out", out, "output JSON");

  auto* mc_cmd = app.add_subcommand("mc-kernel", "Monte Carlo heat kernel diagonal (CSV)");
  DomainArgs mc_args;
  mc_args.attach(mc_cmd);
  std::string mc_point;
  std::uint64_t samples = 100000, seed = 1;
  bool mc_trace = false;
  mc_cmd->add_option("--x", mc_point, "vertex 'x,y' (scaled coordinates)");
  mc_cmd->add_flag("--trace", mc_trace, "estimate the full trace instead of one diagonal entry");
  mc_cmd->add_option("--t", times, "times")->required()->check(CLI::NonNegativeNumber);
  mc_cmd->add_option("--samples", samples, "paths per vertex")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--seed", seed, "RNG seed");

  auto* cont_cmd = app.add_subcommand("continuum", "continuum rectangle references");
  cont_cmd->require_subcommand(1);
  auto* zeta_cmd = cont_cmd->add_subcommand("zeta", "zeta'(0) of the Dirichlet Laplacian on a rectangle");
  std::vector<double> rect;
  zeta_cmd->add_option("--rect", rect, "side lengths a b")->required()->expected(2)->check(CLI::PositiveNumber);
  zeta_cmd->add_option("--out", out, "output JSON");
  auto* trace_cmd = cont_cmd->add_subcommand("trace", "heat trace of a rectangle");
  trace_cmd->add_option("--rect", rect, "side lengths a b")->required()->expected(2)->check(CLI::PositiveNumber);
  trace_cmd->add_option("--t", times, "times")->required()->check(CLI::PositiveNumber);
  trace_cmd->add_option("--out", out, "output JSON");

  auto* sweep_cmd = app.add_subcommand("sweep", "log det over a range of scales, appended to a CSV store");
  DomainArgs sweep_args;
  sweep_args.attach(sweep_cmd, false);
  std::string range = "8:256:geom", records_path;
  bool force = false;
  sweep_cmd->add_option("--L", range, "scales: lo:hi:geom, lo:hi:step or a comma list");
  sweep_cmd->add_option("--out", records_path, "record CSV")->required();
  sweep_cmd->add_flag("--force", force, "recompute stored scales and accept other tool versions");

  auto* fit_cmd = app.add_subcommand("fit", "regress stored log dets on the asymptotic ansatz");
  std::string fit_records, fit_domain;
  bool pin = false;
  fit_cmd->add_option("--records", fit_records, "record CSV")->required();
  fit_cmd->add_option("--domain", fit_domain, "domain JSON (selects records, enables the alpha2 verdict)");
  fit_cmd->add_flag("--pin-alpha0", pin, "fix alpha0 to the reference value");
  fit_cmd->add_flag("--force", force, "accept records from other tool versions");
  fit_cmd->add_option("--out", out, "output JSON");

  auto* ratio_cmd = app.add_subcommand("ratio", "log det differences between two puncture sets");
  std::string ratio_domain, sigma1, sigma2;
  ratio_cmd->add_option("--domain", ratio_domain, "domain JSON")->required();
  ratio_cmd->add_option("--sigma1", sigma1, "first puncture set 'x2,y2;...'")->required();
  ratio_cmd->add_option("--sigma2", sigma2, "second puncture set (empty for none)")->required();
  ratio_cmd->add_option("--L", range, "scales");
  ratio_cmd->add_flag("--pin-alpha0", pin, "pin alpha0 in the two fits");
  ratio_cmd->add_option("--out", out, "output JSON");

  auto* validate_cmd = app.add_subcommand("validate", "run the acceptance suite");
  std::string suite = "quick";
  AcceptanceOptions acc;
  validate_cmd->add_option("--suite", suite, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  validate_cmd->add_option("--seed", acc.seed, "seed");
  validate_cmd->add_option("--max-scale", acc.max_scale, "largest L of the sweeps")->check(CLI::Range(64, 4096));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*graph_cmd) {
      const DomainSpec spec = graph_args.spec();
      const Domain d = make_scaled_domain(spec.base(), spec.scale, spec.sigma, spec.cut);
      const GeometrySummary g = summarize_geometry(d.region);
      json j{{"format", kFileFormat},
             {"scale", spec.scale},
             {"n", d.graph.size()},
             {"edges", d.graph.edges.size()},
             {"ext_boundary", d.graph.ext_boundary.size()},
             {"boundary_lattice_points", boundary_lattice_points(d.region)},
             {"area", g.area()},
             {"perimeter", g.perimeter},
             {"class_counts", boundary_class_counts(d.region, d.graph)},
             {"domain_hash", domain_hash(spec.base())}};
      j["corners"] = json::array();
      for (const auto& c : g.corners) j["corners"].push_back({{"x", c.vertex.x}, {"y", c.vertex.y}, {"angle", c.angle}});
      emit(j, out);
    } else if (*logdet_cmd) {
      const Domain d = logdet_args.domain();
      const FlatConnection conn = gauge_seed ? apply_vertex_gauge(d.connection, d.graph, *gauge_seed) : d.connection;
      const double v = logdet(assemble(d.graph, conn));
      emit({{"format", kFileFormat}, {"n", d.graph.size()}, {"logdet", v}}, out);
    } else if (*heat_cmd) {
      const Domain d = heat_args.domain();
      const SymmetricOperator op = assemble(d.graph, d.connection);
      json rows = json::array();
      for (double t : times) {
        const auto p = heat_trace(op, t, dense_threshold, slq);
        rows.push_back({{"t", p.t}, {"value", p.value}, {"std_error", p.std_error}, {"exact", p.exact}});
      }
      emit({{"format", kFileFormat}, {"n", d.graph.size()}, {"rows", rows}}, out);
    } else if (*mc_cmd) {
      const Domain d = mc_args.domain();
      int x = -1;
      if (!mc_trace) {
        if (mc_point.empty()) throw ConfigError("mc-kernel needs --x or --trace");
        x = d.graph.find(parse_point(mc_point));
        if (x < 0) throw ConfigError("--x is not a site of the domain");
      }
      std::printf("t,mean,se,samples\n");
      for (double t : times) {
        const McEstimate e = mc_trace ? mc_heat_trace(d.graph, d.connection, t, samples, seed)
                                      : mc_dirichlet_kernel(d.graph, d.connection, x, t, samples, seed);
        std::printf("%.17g,%.17g,%.17g,%llu\n", t, e.mean, e.std_error,
                    static_cast<unsigned long long>(e.samples));
      }
    } else if (*zeta_cmd) {
      const ZetaResult z = continuum_zeta_prime_zero(rect[0], rect[1]);
      emit({{"format", kFileFormat},
            {"a", rect[0]},
            {"b", rect[1]},
            {"a0", z.kac.a0},
            {"a1", z.kac.a1},
            {"a2", z.kac.a2},
            {"zeta_prime_0", z.zeta_prime_0},
            {"err_bound", z.err_bound}},
           out);
    } else if (*trace_cmd) {
      json rows = json::array();
      for (double t : times) rows.push_back({{"t", t}, {"value", rectangle_heat_trace(rect[0], rect[1], t)}});
      emit({{"format", kFileFormat}, {"rows", rows}}, out);
    } else if (*sweep_cmd) {
      const DomainSpec spec = sweep_args.spec();
      const auto Ls = parse_scale_range(range);
      ResultStore store(records_path);
      store.load(force);
      for (const auto& w : store.warnings()) std::cerr << "warning: " << w << '\n';
      const ResumeResult res = resume_sweep(store, spec.base(), spec.sigma, spec.cut, Ls, force);
      std::cerr << "computed " << res.computed.size() << " of " << res.records.size() << " scales\n";
      json rows = json::array();
      for (const auto& r : res.records) rows.push_back(to_json(r));
      std::cout << json{{"format", kFileFormat}, {"records", rows}}.dump(2) << '\n';
    } else if (*fit_cmd) {
      ResultStore store(fit_records);
      store.load(force);
      for (const auto& w : store.warnings()) std::cerr << "warning: " << w << '\n';
      std::vector<SweepRecord> recs;
      FitOptions opts;
      if (!fit_domain.empty()) {
        const DomainSpec spec = load_domain_spec(fit_domain);
        recs = store.records(domain_hash(spec.base()), sigma_hash(sigma_descriptor(spec.sigma, spec.cut)));
        opts.corner_sum = corner_log_sum(summarize_geometry(spec.base()));
      } else {
        std::set<std::pair<std::string, std::string>> keys;
        for (const auto& e : store.entries()) keys.insert({e.domain_hash, e.sigma_hash});
        if (keys.size() != 1) throw ConfigError("records hold several domains; pass --domain to choose one");
        recs = store.records(keys.begin()->first, keys.begin()->second);
      }
      if (recs.empty()) throw ConfigError("no records for this domain");
      if (pin) opts.pinned_alpha0 = alpha0_reference().value();
      emit(to_json(fit_expansion(recs, opts)), out);
    } else if (*ratio_cmd) {
      const DomainSpec spec = load_domain_spec(ratio_domain);
      const auto s1 = parse_sigma_list(sigma1), s2 = parse_sigma_list(sigma2);
      FitOptions opts;
      if (pin) opts.pinned_alpha0 = alpha0_reference().value();
      const RatioTable t =
          sigma_ratio_experiment(spec.base(), s1, s2, parse_scale_range(range), spec.cut, opts);
      json j = to_json(t);
      j["cauchy_converged"] = t.cauchy_converged(5e-3, 32);
      emit(j, out);
    } else if (*validate_cmd) {
      const auto results = run_acceptance(parse_suite(suite), acc, [](const CriterionResult& r) {
        std::printf("%s\n", format_result(r).c_str());
        std::fflush(stdout);
      });
      for (const auto& r : results)
        if (!r.passed) return 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "polydet: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "polydet: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
