#pragma once

// Stage orchestration for one family: group -> classes -> table -> m ->
// graph -> {tor, hall, serre, dims}, collected into one report.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "mckay/binpoly.hpp"
#include "mckay/check.hpp"

namespace mckay::pipeline {

inline constexpr const char* kToolName = "mckay-verify";
inline constexpr const char* kToolVersion = "1.0.0";

// Stages that can be selected with --checks; group, table and mckay always run.
inline const std::vector<std::string> kStages{"group", "table", "mckay", "tor", "hall", "serre", "dims"};

struct Caps {
  unsigned poly_degree = 0;    // truncation D of F_p[x, y]; 0 means 2|G|
  unsigned hall_degree = 3;    // total degree on the affine graph
  unsigned finite_degree = 4;  // total degree on the finite part
  unsigned ug_degree = 6;      // U(g+) words
};

struct TorOptions {
  unsigned samples = 3;
  bool boundary = true;
  bool intersections = true;
};

struct RunConfig {
  binpoly::GroupSpec family;
  std::optional<std::uint32_t> modulus;
  std::vector<std::uint32_t> hall_primes{2, 3, 5};
  std::uint32_t held_out = 7;
  Caps caps;
  TorOptions tor;
  std::uint64_t seed = 1;
  std::set<std::string> checks{kStages.begin(), kStages.end()};
  std::filesystem::path out = "out";

  // Throws ConfigError on an invalid combination.
  void validate() const;
  nlohmann::ordered_json to_json() const;
  // Fields absent from the JSON keep their current values.
  void merge_json(const nlohmann::json& j);
};

// Parses a --checks list ("all" or comma-separated stage names).
std::set<std::string> parse_checks(const std::string& text);

struct StageCheck {
  std::string stage;
  Check check;
};

struct Report {
  nlohmann::ordered_json config;
  nlohmann::ordered_json stages = nlohmann::ordered_json::object();
  std::vector<StageCheck> checks;
  std::optional<StageCheck> abort;  // stage and datum of a CheckFailure or budget abort
  std::map<std::string, std::string> csv;  // file name -> contents

  bool pass() const;
  nlohmann::ordered_json to_json() const;
};

// Throws ConfigError for unusable configurations; every other failure is
// recorded in the report.
Report run(const RunConfig& config);

// Writes report.json and the CSV tables into dir.
void emit_report(const Report& r, const std::filesystem::path& dir);

}  // namespace mckay::pipeline
