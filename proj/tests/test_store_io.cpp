#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "polydet/error.hpp"
#include "polydet/io.hpp"
#include "polydet/shapes.hpp"
#include "polydet/store.hpp"

using namespace polydet;
namespace fs = std::filesystem;

namespace {

fs::path fresh(const std::string& name) {
  const fs::path p = fs::current_path() / ("store_io_" + name + ".csv");
  fs::remove(p);
  fs::remove(p.string() + ".quarantine");
  return p;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("csv rows round-trip exactly") {
  SweepRecord r;
  r.L = 23;
  r.n_sites = 484;
  r.n_edges = 924;
  r.ext_boundary = 88;
  r.class_counts = {{"39eea9baf54489fb", 8}, {"d7296808578385fb", 80}};
  r.logdet = 575.43464336855868;
  r.sigma = sigma_descriptor(std::vector<Puncture>{{3, 3}}, CutDirection::PosX);
  const auto row = csv_row(r, domain_hash(shapes::unit_square()), sigma_hash(r.sigma));
  const auto back = parse_csv_row(row);
  CHECK(back.record.logdet == r.logdet);
  CHECK(back.record.class_counts == r.class_counts);
  CHECK(back.record.sigma == r.sigma);
  CHECK(back.tool_version == tool_version());
}

TEST_CASE("malformed rows") {
  CHECK_THROWS_AS(parse_csv_row("1,0.1.0,abc"), StoreError);
  SweepRecord r;
  r.L = 8;
  r.n_sites = 49;
  r.ext_boundary = 28;
  r.class_counts = {{"39eea9baf54489fb", 8}, {"d7296808578385fb", 19}};  // does not add up
  r.logdet = 60.1;
  CHECK_THROWS_AS(parse_csv_row(csv_row(r, domain_hash(shapes::unit_square()), sigma_hash(""))), StoreError);
}

TEST_CASE("domain hash ignores loop start and orientation") {
  const LatticeRegion a({{{0, 0}, {2, 0}, {2, 1}, {0, 1}}});
  const LatticeRegion b({{{2, 1}, {0, 1}, {0, 0}, {2, 0}}});
  const LatticeRegion c({{{0, 0}, {0, 1}, {2, 1}, {2, 0}}});
  CHECK(domain_hash(a) == domain_hash(b));
  CHECK(domain_hash(a) == domain_hash(c));
  CHECK(domain_hash(a) != domain_hash(shapes::rectangle(1, 2)));
  CHECK(fnv1a_hex("").size() == 16);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("resume computes only missing scales") {
  const auto path = fresh("resume");
  const auto base = shapes::unit_square();
  {
    ResultStore store(path);
    store.load();
    const auto first = resume_sweep(store, base, {}, CutDirection::PosX, std::vector<std::int64_t>{8, 16});
    CHECK(first.computed == std::vector<std::int64_t>{8, 16});
  }
  ResultStore store(path);
  store.load();
  CHECK(store.entries().size() == 2);
  const auto second = resume_sweep(store, base, {}, CutDirection::PosX, std::vector<std::int64_t>{8, 16, 32});
  CHECK(second.computed == std::vector<std::int64_t>{32});
  REQUIRE(second.records.size() == 3);
  CHECK(second.records[2].L == 32);
  const auto again = resume_sweep(store, base, {}, CutDirection::PosX, std::vector<std::int64_t>{8, 16, 32});
  CHECK(again.computed.empty());
  const auto forced = resume_sweep(store, base, {}, CutDirection::PosX, std::vector<std::int64_t>{8}, true);
  CHECK(forced.computed == std::vector<std::int64_t>{8});
  // Another puncture set is a different key.
  const auto other = resume_sweep(store, shapes::annulus(), std::vector<Puncture>{{3, 3}}, CutDirection::PosX,
                                  std::vector<std::int64_t>{4});
  CHECK(other.computed == std::vector<std::int64_t>{4});
  CHECK(lines_of(path).front() == csv_header());
}

TEST_CASE("corrupted lines are quarantined") {
  const auto path = fresh("corrupt");
  {
    ResultStore store(path);
    resume_sweep(store, shapes::unit_square(), {}, CutDirection::PosX, std::vector<std::int64_t>{8, 11});
  }
  {
    std::ofstream out(path, std::ios::app);
    out << "1,garbage\n";
  }
  ResultStore store(path);
  store.load();
  CHECK(store.entries().size() == 2);
  REQUIRE(store.warnings().size() == 1);
  CHECK(store.warnings()[0].find("quarantined") != std::string::npos);
  const auto q = lines_of(path.string() + ".quarantine");
  REQUIRE(q.size() == 1);
  CHECK(q[0] == "1,garbage");
  CHECK(lines_of(path).size() == 3);  // header + 2 records
}

TEST_CASE("records from another version need force") {
  const auto path = fresh("version");
  {
    ResultStore store(path);
    resume_sweep(store, shapes::unit_square(), {}, CutDirection::PosX, std::vector<std::int64_t>{8});
  }
  auto lines = lines_of(path);
  const auto pos = lines[1].find(tool_version());
  lines[1].replace(pos, tool_version().size(), "0.0.1");
  {
    std::ofstream out(path, std::ios::trunc);
    for (const auto& l : lines) out << l << '\n';
  }
  ResultStore store(path);
  CHECK_THROWS_WITH_AS(store.load(), doctest::Contains("--force"), StoreError);
  ResultStore forced(path);
  CHECK_NOTHROW(forced.load(true));
  CHECK(forced.entries().size() == 1);
}

TEST_CASE("domain files") {
  const auto spec = parse_domain_spec(nlohmann::json::parse(
      R"({"format": 1, "loops": [[[0,0],[3,0],[3,3],[0,3]], [[1,1],[2,1],[2,2],[1,2]]], "scale": 4,
          "sigma": [[3,3]], "cut_dir": "-y"})"));
  CHECK(spec.scale == 4);
  CHECK(spec.cut == CutDirection::NegY);
  REQUIRE(spec.sigma.size() == 1);
  CHECK(spec.sigma[0] == Puncture{3, 3});
  CHECK(parse_domain_spec(to_json(spec)).loops == spec.loops);

  CHECK_THROWS_WITH_AS(parse_domain_spec(nlohmann::json::parse(R"({"loops": [[[0,0],[1.5,0],[1,1]]]})")),
                       doctest::Contains("non-integer vertex"), ConfigError);
  CHECK_THROWS_AS(parse_domain_spec(nlohmann::json::parse(R"({"loops": []})")), ConfigError);
  CHECK_THROWS_AS(parse_domain_spec(nlohmann::json::parse(R"({"loops": [[[0,0],[2,2],[2,0],[0,2]]]})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_domain_spec(nlohmann::json::parse(R"({"loops": [[[0,0],[3,0],[0,3]]], "sigma": [[2,1]]})")),
                  ConfigError);
  CHECK_THROWS_AS(load_domain_spec("/nonexistent/domain.json"), ConfigError);
  CHECK(parse_sigma_list("3,3;7,3") == std::vector<Puncture>{{3, 3}, {7, 3}});
  CHECK_THROWS_AS(parse_sigma_list("3;3"), ConfigError);
}
