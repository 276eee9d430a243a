// Command-line front end: run | mckay | tor-check | serre-check | dims-compare.
//
// Exit codes: 0 all selected checks pass, 1 a check failed or a stage
// aborted, 2 usage or configuration error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mckay/errors.hpp"
#include "mckay/pipeline.hpp"

using namespace mckay;

namespace {

struct Flags {
  std::vector<std::string> family;
  std::string config;
  std::optional<std::uint32_t> modulus;
  std::string hall_primes;
  std::optional<std::uint32_t> held_out;
  std::vector<std::string> caps;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string checks;
  bool quiet = false;
};

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("--family", f.family, "A n | D n | E6 | E7 | E8")->expected(1, 2);
  app->add_option("--config", f.config, "JSON config file; flags override its values");
  app->add_option("--modulus", f.modulus, "prime modulus for the group stages");
  app->add_option("--hall-primes", f.hall_primes, "comma-separated sample primes (default 2,3,5)");
  app->add_option("--held-out", f.held_out, "held-out prime (default 7)");
  app->add_option("--caps", f.caps, "poly=D hall=N finite=N ug=N")->expected(1, 4);
  app->add_option("--seed", f.seed, "random seed (default 1)");
  app->add_option("--out", f.out, "output directory (default out)");
  app->add_option("--checks", f.checks, "all or a list of group,table,mckay,tor,hall,serre,dims");
  app->add_flag("--quiet", f.quiet, "print only the verdict");
}

std::vector<std::uint32_t> parse_primes(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      throw ConfigError("bad prime '" + item + "' in --hall-primes");
    }
  }
  return out;
}

void apply_caps(const std::vector<std::string>& items, pipeline::Caps& caps) {
  for (const auto& item : items) {
    std::istringstream is(item);
    std::string pair;
    while (std::getline(is, pair, ',')) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos) throw ConfigError("bad cap '" + pair + "' (expected name=value)");
      const auto name = pair.substr(0, eq);
      unsigned value = 0;
      try {
        value = static_cast<unsigned>(std::stoul(pair.substr(eq + 1)));
      } catch (const std::exception&) {
        throw ConfigError("bad cap value in '" + pair + "'");
      }
      if (name == "poly") caps.poly_degree = value;
      else if (name == "hall") caps.hall_degree = value;
      else if (name == "finite") caps.finite_degree = value;
      else if (name == "ug") caps.ug_degree = value;
      else throw ConfigError("unknown cap '" + name + "' (poly, hall, finite, ug)");
    }
  }
}

pipeline::RunConfig build_config(const Flags& f, const std::string& default_checks) {
  pipeline::RunConfig cfg;
  bool have_family = false;
  cfg.checks = pipeline::parse_checks(default_checks);
  if (!f.config.empty()) {
    std::ifstream is(f.config);
    if (!is) throw ConfigError("cannot read config file " + f.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config file " + f.config + ": " + e.what());
    }
    cfg.merge_json(j);
    have_family = j.contains("family");
  }
  if (!f.family.empty()) {
    std::string text;
    for (const auto& s : f.family) text += s;
    cfg.family = binpoly::GroupSpec::parse(text);
    have_family = true;
  }
  if (!have_family) throw ConfigError("--family is required");
  if (f.modulus) cfg.modulus = *f.modulus;
  if (!f.hall_primes.empty()) cfg.hall_primes = parse_primes(f.hall_primes);
  if (f.held_out) cfg.held_out = *f.held_out;
  apply_caps(f.caps, cfg.caps);
  if (f.seed) cfg.seed = *f.seed;
  if (!f.out.empty()) cfg.out = f.out;
  if (!f.checks.empty()) cfg.checks = pipeline::parse_checks(f.checks);
  return cfg;
}

int execute(const Flags& f, const std::string& default_checks) {
  const auto cfg = build_config(f, default_checks);
  const auto report = pipeline::run(cfg);
  pipeline::emit_report(report, cfg.out);
  if (!f.quiet) {
    for (const auto& c : report.checks)
      std::cout << (c.check.pass ? "PASS " : "FAIL ") << c.stage << ": " << c.check.name << " [" << c.check.detail
                << "]\n";
    if (report.abort) std::cout << "ABORT " << report.abort->stage << ": " << report.abort->check.detail << "\n";
  }
  std::cout << cfg.family.label() << ": " << (report.pass() ? "pass" : "fail") << " (" << cfg.out.string()
            << "/report.json)\n";
  return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"McKay correspondence, Kleinian Tor and double-quiver Hall algebra checks"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands{
      {"run", "all"}, {"mckay", "mckay"}, {"tor-check", "tor"}, {"serre-check", "serre"}, {"dims-compare", "dims"}};
  std::vector<Flags> flags(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    subs.push_back(app.add_subcommand(commands[k].first, "stages: " + commands[k].second));
    add_flags(subs.back(), flags[k]);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    for (std::size_t k = 0; k < commands.size(); ++k)
      if (subs[k]->parsed()) return execute(flags[k], commands[k].second);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
