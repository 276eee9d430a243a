#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mckay/errors.hpp"
#include "mckay/pipeline.hpp"

using namespace mckay;
using namespace mckay::pipeline;

namespace {

RunConfig config_for(const std::string& family) {
  RunConfig c;
  c.family = binpoly::GroupSpec::parse(family);
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("check selection") {
  CHECK(parse_checks("all").size() == kStages.size());
  CHECK(parse_checks("tor") == std::set<std::string>{"group", "table", "mckay", "tor"});
  CHECK_THROWS_AS(parse_checks("tor,quux"), ConfigError);
  CHECK_THROWS_AS(parse_checks(""), ConfigError);
}

TEST_CASE("config validation") {
  auto c = config_for("A 2");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.checks = parse_checks("mckay");
  CHECK_NOTHROW(c.validate());

  auto d = config_for("A 3");
  d.held_out = 5;
  CHECK_THROWS_AS(d.validate(), ConfigError);
  d.held_out = 7;
  d.modulus = 11;
  CHECK_THROWS_AS(d.validate(), ConfigError);
  d.modulus.reset();
  d.caps.poly_degree = 5;
  CHECK_THROWS_AS(d.validate(), ConfigError);
  d.caps.poly_degree = 0;
  d.tor.samples = 2;
  CHECK_THROWS_AS(d.validate(), ConfigError);
}

TEST_CASE("config JSON merge keeps unspecified fields") {
  auto c = config_for("A 3");
  c.merge_json(nlohmann::json::parse(R"({"family": "D 2", "caps": {"hall_degree": 2}, "checks": ["serre"]})"));
  CHECK(c.family == binpoly::GroupSpec::binary_dihedral(2));
  CHECK(c.caps.hall_degree == 2);
  CHECK(c.caps.finite_degree == 4);
  CHECK(c.checks.count("serre"));
  CHECK_FALSE(c.checks.count("tor"));
  CHECK_THROWS_AS(c.merge_json(nlohmann::json::parse(R"({"seed": "x"})")), ConfigError);
}

TEST_CASE("A3 run passes and writes every table") {
  auto c = config_for("A 3");
  const auto r = run(c);
  CHECK(r.pass());
  CHECK_FALSE(r.abort.has_value());
  const auto j = r.to_json();
  CHECK(j["verdict"] == "pass");
  CHECK(j["stages"]["group"]["order"] == 3);
  CHECK(j["stages"]["mckay"]["expected_diagram"] == "affine A2");
  const auto dir = std::filesystem::temp_directory_path() / "mckay_pipeline_test";
  std::filesystem::remove_all(dir);
  emit_report(r, dir);
  for (const char* f : {"report.json", "chartable.csv", "mckay.csv", "tor.csv", "serre.csv", "dims.csv"})
    CHECK(std::filesystem::exists(dir / f));
  CHECK(slurp(dir / "report.json") == r.to_json().dump(2) + "\n");
}

TEST_CASE("verdict is pass iff every check passed") {
  Report r;
  r.checks.push_back({"x", {"a", true, ""}});
  CHECK(r.pass());
  r.checks.push_back({"x", {"b", false, ""}});
  CHECK_FALSE(r.pass());
  Report s;
  s.abort = StageCheck{"hall", {"abort", false, "held-out mismatch"}};
  CHECK_FALSE(s.pass());
  CHECK(s.to_json()["abort"]["stage"] == "hall");
}

TEST_CASE("property: identical config gives an identical report") {
  for (std::uint64_t seed : {1u, 7u}) {
    auto c = config_for("D 2");
    c.seed = seed;
    c.checks = parse_checks("tor,serre");
    CHECK(run(c).to_json().dump() == run(c).to_json().dump());
  }
}
