#include "mckay/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include "mckay/chartab.hpp"
#include "mckay/errors.hpp"
#include "mckay/hall.hpp"
#include "mckay/kacmoody.hpp"
#include "mckay/kleinian.hpp"

namespace mckay::pipeline {

using hall::DimVector;
using nlohmann::ordered_json;

namespace {

ordered_json checks_json(const CheckList& checks) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return arr;
}

std::string big(const ffla::BigInt& x) { return x.str(); }

// Group, classes, table and McKay graph at one modulus.
struct GroupData {
  binpoly::FiniteMatrixGroup group;
  binpoly::ConjugacyClasses classes;
  chartab::CharacterTable table;
  chartab::TensorMultiplicities tm;
  chartab::McKayGraphData graph;

  GroupData(const binpoly::GroupSpec& spec, const ffla::PrimeField& field, std::uint64_t seed)
      : group(spec, field),
        classes(binpoly::conjugacy_classes(group)),
        table(chartab::character_table(group, classes, seed)),
        tm(chartab::tensor_multiplicities(table)),
        graph(chartab::mckay_graph(tm, table, spec)) {}
};

class Recorder {
 public:
  explicit Recorder(Report& r) : r_(r) {}
  void add(const std::string& stage, const CheckList& checks) {
    for (const auto& c : checks) r_.checks.push_back({stage, c});
  }
  void add(const std::string& stage, Check c) { r_.checks.push_back({stage, std::move(c)}); }

 private:
  Report& r_;
};

std::size_t max_degree(const chartab::McKayGraphData& g) {
  std::vector<std::size_t> deg(g.vertex_count, 0);
  for (const auto& e : g.edges) {
    ++deg[e.a];
    ++deg[e.b];
  }
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

bool needs_quiver(const std::set<std::string>& checks) {
  return checks.count("tor") || checks.count("hall") || checks.count("serre") || checks.count("dims");
}

void stage_group(const RunConfig& cfg, const GroupData& d, Report& rep) {
  Recorder rec(rep);
  const auto& g = d.group;
  const auto expected_classes = chartab::affine_diagram(cfg.family).size();
  CheckList checks{
      {"order", g.order() == cfg.family.expected_order(),
       std::to_string(g.order()) + " elements, expected " + std::to_string(cfg.family.expected_order())},
      {"closure", g.closure_additions() == 0, std::to_string(g.closure_additions()) + " products added"},
      {"class count = affine vertex count", d.classes.count() == expected_classes,
       std::to_string(d.classes.count()) + " classes, " + std::to_string(expected_classes) + " vertices"}};
  rec.add("group", checks);
  rep.stages["group"] = {{"family", cfg.family.label()},
                         {"modulus", g.field().modulus()},
                         {"order", g.order()},
                         {"class_count", d.classes.count()},
                         {"class_sizes", d.classes.sizes},
                         {"closure_additions", g.closure_additions()},
                         {"checks", checks_json(checks)}};
}

void stage_table(const GroupData& d, Report& rep) {
  const auto checks = chartab::verify_table(d.table, d.group);
  Recorder(rep).add("table", checks);
  rep.stages["character_table"] = {{"modulus", d.table.field.modulus()},
                                   {"seed", d.table.seed},
                                   {"splitting_rounds", d.table.splitting_rounds},
                                   {"degrees", d.table.degrees},
                                   {"values", d.table.values},
                                   {"checks", checks_json(checks)}};
  rep.csv["chartable.csv"] = chartab::chartable_csv(d.table, d.group);
}

void stage_mckay(const GroupData& d, Report& rep) {
  const auto& g = d.graph;
  Recorder(rep).add("mckay", g.checks);
  ordered_json edges = ordered_json::array();
  for (const auto& e : g.edges) edges.push_back({e.a, e.b, e.multiplicity});
  ordered_json minors = ordered_json::array();
  for (const auto& m : g.leading_minors) minors.push_back(big(m));
  rep.stages["mckay"] = {{"m", d.tm.m},
                         {"dims", g.dims},
                         {"edges", edges},
                         {"shape", g.shape},
                         {"expected_diagram", g.expected_diagram},
                         {"affine_cartan", g.affine_cartan},
                         {"affine_determinant", big(g.affine_determinant)},
                         {"affine_kernel_dim", g.affine_kernel_dim},
                         {"finite_vertices", g.finite_vertices},
                         {"finite_cartan", g.finite_cartan},
                         {"leading_minors", minors},
                         {"checks", checks_json(g.checks)}};
  rep.csv["mckay.csv"] = chartab::mckay_csv(d.tm, d.table);
}

void stage_tor(const RunConfig& cfg, const GroupData& base, Report& rep) {
  const std::uint32_t p0 = base.group.field().modulus();
  const auto p = kleinian::tor_modulus(cfg.family, p0, cfg.tor.samples, static_cast<unsigned>(max_degree(base.graph)));
  std::unique_ptr<GroupData> own;
  const GroupData* d = &base;
  if (p != p0) {
    own = std::make_unique<GroupData>(cfg.family, ffla::PrimeField(p), cfg.seed);
    d = own.get();
  }
  const unsigned cap = cfg.caps.poly_degree ? cfg.caps.poly_degree : 2 * static_cast<unsigned>(d->group.order());
  kleinian::EquivariantPolyAlgebra alg(d->group, cap);
  const auto n = kleinian::invariant_ideal(alg);
  auto dec = kleinian::isotypic_pairs(alg, n, d->table, cfg.seed);
  Recorder(rep).add("tor", dec.checks);
  kleinian::TorSuiteOptions opts;
  opts.generic_samples = cfg.tor.samples;
  opts.boundary = cfg.tor.boundary;
  opts.intersections = cfg.tor.intersections;
  const auto suite = kleinian::tor_suite(dec, d->graph, opts);
  Recorder(rep).add("tor", suite.checks);

  ordered_json gens = ordered_json::array();
  for (const auto& f : n.generators) gens.push_back(f.to_string(d->group.field()));
  ordered_json pairs = ordered_json::array();
  for (const auto& pr : dec.pairs)
    pairs.push_back({{"pi", pr.pi},
                     {"dim", pr.dim},
                     {"copy_degrees", pr.copy_degrees},
                     {"degree_prime", pr.degree_prime},
                     {"degree_second", pr.degree_second}});
  ordered_json samples = ordered_json::array();
  for (const auto& s : suite.samples) samples.push_back(kleinian::tor_row(s, cfg.family.label()));
  rep.stages["tor"] = {{"modulus", p},
                       {"degree_cap", cap},
                       {"invariant_generators", gens},
                       {"saturation_degree", n.saturation_degree},
                       {"quotient_dim", dec.quotient->dim()},
                       {"pairs", pairs},
                       {"samples", samples},
                       {"checks", checks_json(suite.checks)}};
  rep.csv["tor.csv"] = kleinian::tor_csv(suite, cfg.family.label());
}

hall::HallOptions hall_options(const RunConfig& cfg) {
  hall::HallOptions o;
  o.primes = cfg.hall_primes;
  o.held_out = cfg.held_out;
  return o;
}

// Class of dims e_i + e_j in which x_ij has rank one and x_ji vanishes.
std::size_t rank_one_class(hall::HallAlgebra& h, std::size_t i, std::size_t j) {
  DimVector d(h.graph().vertex_count(), 0);
  d[i] = d[j] = 1;
  const auto xi = h.graph().map_index(i, j), xj = h.graph().map_index(j, i);
  for (std::size_t k = 0; k < h.class_count(d); ++k) {
    const auto& key = h.key({d, k});
    if (key[xi] == 1 && key[xj] == 0) return k;
  }
  throw CheckFailure("hall", "no rank-one class on edge " + std::to_string(i) + "-" + std::to_string(j));
}

void stage_hall(hall::HallAlgebra& h, Report& rep) {
  using hall::HallTerm;
  CheckList checks;
  const auto& g = h.graph();
  const std::size_t n = g.vertex_count();
  auto unit_dims = [&](std::initializer_list<std::pair<std::size_t, unsigned>> entries) {
    DimVector d(n, 0);
    for (auto [v, k] : entries) d[v] += k;
    return d;
  };
  ordered_json highlights = ordered_json::object();
  const auto [i, j] = g.edges().front();
  {
    const auto& r = h.euler_hall_constant({unit_dims({{i, 1}}), 0}, {unit_dims({{i, 1}}), 0}, {unit_dims({{i, 2}}), 0});
    checks.push_back({"chi(C(i), C(i), C(i)^2) = 2", r.value == 2 && r.polynomial.to_string() == "q + 1",
                      "polynomial " + r.polynomial.to_string() + ", chi " + ffla::to_string(r.value)});
    highlights["square"] = hall::to_json(h, r);
  }
  {
    const DimVector dij = unit_dims({{i, 1}, {j, 1}});
    // The split class has every map zero, hence the least key.
    const auto& r = h.euler_hall_constant({unit_dims({{i, 1}}), 0}, {unit_dims({{j, 1}}), 0}, {dij, 0});
    checks.push_back({"chi(C(i), C(j), C(i)+C(j)) = 1", r.value == 1, "chi " + ffla::to_string(r.value)});
    highlights["split"] = hall::to_json(h, r);
  }
  {
    auto diff = h.product(h.theta(i), h.theta(j));
    diff -= h.product(h.theta(j), h.theta(i));
    const DimVector dij = unit_dims({{i, 1}, {j, 1}});
    hall::HallElement expected;
    expected.add({dij, rank_one_class(h, i, j)}, 1);
    expected.add({dij, rank_one_class(h, j, i)}, -1);
    checks.push_back({"theta_i theta_j - theta_j theta_i = [x_ij rank 1] - [x_ji rank 1] (adjacent)",
                      diff == expected, "vertices " + std::to_string(i) + ", " + std::to_string(j)});
    highlights["adjacent_commutator"] = hall::to_json(h, diff);
  }
  std::optional<std::pair<std::size_t, std::size_t>> far;
  for (std::size_t a = 0; a < n && !far; ++a)
    for (std::size_t b = a + 1; b < n && !far; ++b)
      if (!g.adjacent(a, b)) far = std::make_pair(a, b);
  if (far) {
    auto diff = h.product(h.theta(far->first), h.theta(far->second));
    diff -= h.product(h.theta(far->second), h.theta(far->first));
    checks.push_back({"theta_i theta_j = theta_j theta_i (non-adjacent)", diff.is_zero(),
                      "vertices " + std::to_string(far->first) + ", " + std::to_string(far->second)});
  } else {
    checks.push_back({"theta_i theta_j = theta_j theta_i (non-adjacent)", true, "no non-adjacent pair"});
  }
  Recorder(rep).add("hall", checks);
  rep.stages["hall"] = {{"graph", g.name()},
                        {"primes", h.options().primes},
                        {"held_out", h.options().held_out},
                        {"adjacent_pair", {i, j}},
                        {"non_adjacent_pair", far ? ordered_json{far->first, far->second} : ordered_json(nullptr)},
                        {"highlights", highlights},
                        {"checks", checks_json(checks)}};
}

void stage_serre(hall::HallAlgebra& h, Report& rep) {
  std::vector<hall::SerreResult> results;
  const std::size_t n = h.graph().vertex_count();
  std::size_t zero = 0;
  ordered_json pairs = ordered_json::array();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      results.push_back(h.serre_check(i, j));
      zero += results.back().zero;
      pairs.push_back(hall::to_json(h, results.back()));
    }
  CheckList checks{{"serre_check = 0 for all ordered pairs", zero == results.size(),
                    std::to_string(zero) + "/" + std::to_string(results.size()) + " pairs"}};
  Recorder(rep).add("serre", checks);
  rep.stages["serre"] = {{"graph", h.graph().name()}, {"pairs", pairs}, {"checks", checks_json(checks)}};
  rep.csv["serre.csv"] = hall::serre_csv(results, h.graph().name());
}

void stage_dims(const RunConfig& cfg, hall::HallAlgebra& affine, hall::HallAlgebra& finite, Report& rep) {
  auto a = kacmoody::dims_compare(affine, cfg.caps.hall_degree, true);
  auto f = kacmoody::dims_compare(finite, cfg.caps.finite_degree, false);
  for (auto& c : a.checks) c.name = "affine: " + c.name;
  for (auto& c : f.checks) c.name = "finite: " + c.name;
  Recorder(rep).add("dims", a.checks);
  Recorder(rep).add("dims", f.checks);
  rep.stages["dims"] = {{"affine", kacmoody::to_json(a)}, {"finite", kacmoody::to_json(f)}};
  std::string csv = kacmoody::dims_csv(a);
  std::istringstream rows(kacmoody::dims_csv(f));
  std::string line;
  for (int skip = 0; std::getline(rows, line);)
    if (skip++ >= 2) csv += line + "\n";
  rep.csv["dims.csv"] = csv;
}

}  // namespace

std::set<std::string> parse_checks(const std::string& text) {
  std::set<std::string> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") {
      out.insert(kStages.begin(), kStages.end());
      continue;
    }
    if (std::find(kStages.begin(), kStages.end(), item) == kStages.end())
      throw ConfigError("unknown check '" + item + "' (expected all or a list of group,table,mckay,tor,hall,serre,dims)");
    out.insert(item);
  }
  if (out.empty()) throw ConfigError("empty --checks list");
  out.insert({"group", "table", "mckay"});
  return out;
}

void RunConfig::validate() const {
  hall::validate_primes(hall_primes, held_out);
  if (caps.hall_degree == 0 || caps.finite_degree == 0 || caps.ug_degree == 0)
    throw ConfigError("caps must be positive");
  if (caps.hall_degree > caps.ug_degree || caps.finite_degree > caps.ug_degree)
    throw ConfigError("Hall degree caps exceed the U(g+) cap");
  if (tor.samples < 3) throw ConfigError("at least 3 Tor samples per irreducible are required");
  if (modulus && !binpoly::is_admissible_modulus(family, *modulus))
    throw ConfigError("modulus " + std::to_string(*modulus) + " is not admissible for " + family.label());
  if (caps.poly_degree && caps.poly_degree < 2 * family.expected_order())
    throw ConfigError("polynomial degree cap " + std::to_string(caps.poly_degree) + " is below 2|G| = " +
                      std::to_string(2 * family.expected_order()));
  if (family.family == binpoly::Family::CyclicA && family.n == 2 && needs_quiver(checks))
    throw ConfigError("family A2 has the affine A1 diagram with a multiple edge; graphs with loops or multiple "
                      "edges are excluded from the Tor, Hall, Serre and dimension stages");
}

ordered_json RunConfig::to_json() const {
  return {{"family", family.label()},
          {"modulus", modulus ? ordered_json(*modulus) : ordered_json(nullptr)},
          {"hall_primes", hall_primes},
          {"held_out", held_out},
          {"caps",
           {{"poly_degree", caps.poly_degree},
            {"hall_degree", caps.hall_degree},
            {"finite_degree", caps.finite_degree},
            {"ug_degree", caps.ug_degree}}},
          {"tor", {{"samples", tor.samples}, {"boundary", tor.boundary}, {"intersections", tor.intersections}}},
          {"seed", seed},
          {"checks", std::vector<std::string>(checks.begin(), checks.end())}};
}

void RunConfig::merge_json(const nlohmann::json& j) {
  try {
    if (j.contains("family")) family = binpoly::GroupSpec::parse(j.at("family").get<std::string>());
    if (j.contains("modulus") && !j.at("modulus").is_null()) modulus = j.at("modulus").get<std::uint32_t>();
    if (j.contains("hall_primes")) hall_primes = j.at("hall_primes").get<std::vector<std::uint32_t>>();
    if (j.contains("held_out")) held_out = j.at("held_out").get<std::uint32_t>();
    if (j.contains("caps")) {
      const auto& c = j.at("caps");
      caps.poly_degree = c.value("poly_degree", caps.poly_degree);
      caps.hall_degree = c.value("hall_degree", caps.hall_degree);
      caps.finite_degree = c.value("finite_degree", caps.finite_degree);
      caps.ug_degree = c.value("ug_degree", caps.ug_degree);
    }
    if (j.contains("tor")) {
      const auto& t = j.at("tor");
      tor.samples = t.value("samples", tor.samples);
      tor.boundary = t.value("boundary", tor.boundary);
      tor.intersections = t.value("intersections", tor.intersections);
    }
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("checks")) {
      std::string list;
      for (const auto& c : j.at("checks")) list += c.get<std::string>() + ",";
      checks = parse_checks(list);
    }
    if (j.contains("out")) out = j.at("out").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

bool Report::pass() const {
  return !abort && std::all_of(checks.begin(), checks.end(), [](const StageCheck& c) { return c.check.pass; });
}

ordered_json Report::to_json() const {
  ordered_json cs = ordered_json::array();
  for (const auto& c : checks)
    cs.push_back({{"stage", c.stage}, {"name", c.check.name}, {"pass", c.check.pass}, {"detail", c.check.detail}});
  ordered_json j{{"tool", kToolName}, {"version", kToolVersion}, {"config", config}, {"stages", stages},
                 {"checks", cs}};
  j["abort"] = abort ? ordered_json{{"stage", abort->stage}, {"detail", abort->check.detail}} : ordered_json(nullptr);
  j["verdict"] = pass() ? "pass" : "fail";
  return j;
}

Report run(const RunConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.config = cfg.to_json();
  std::string stage = "group";
  try {
    const auto field = cfg.modulus ? ffla::PrimeField(*cfg.modulus) : binpoly::choose_modulus(cfg.family);
    std::unique_ptr<GroupData> d;
    try {
      d = std::make_unique<GroupData>(cfg.family, field, cfg.seed);
    } catch (const CheckFailure& e) {
      stage = e.stage();
      throw;
    }
    stage_group(cfg, *d, rep);
    stage = "table";
    stage_table(*d, rep);
    stage = "mckay";
    stage_mckay(*d, rep);
    if (cfg.checks.count("tor")) {
      stage = "tor";
      stage_tor(cfg, *d, rep);
    }
    if (cfg.checks.count("hall") || cfg.checks.count("serre") || cfg.checks.count("dims")) {
      stage = "hall";
      hall::HallAlgebra affine(hall::quiver_graph(d->graph), hall_options(cfg));
      if (cfg.checks.count("hall")) stage_hall(affine, rep);
      if (cfg.checks.count("serre")) {
        stage = "serre";
        stage_serre(affine, rep);
      }
      if (cfg.checks.count("dims")) {
        stage = "dims";
        hall::HallAlgebra finite(hall::finite_quiver_graph(d->graph), hall_options(cfg));
        stage_dims(cfg, affine, finite, rep);
      }
      stage = "hall";
      rep.csv["hall.csv"] = hall::euler_csv(affine);
      ordered_json constants = ordered_json::array();
      std::size_t ok = 0;
      for (const auto& [k, r] : affine.records()) {
        constants.push_back(hall::to_json(affine, r));
        ok += r.ok();
      }
      const Check held{"held-out prime predicted for every Euler constant", ok == affine.records().size(),
                       std::to_string(ok) + "/" + std::to_string(affine.records().size()) + " constants"};
      Recorder(rep).add("hall", held);
      auto& hs = rep.stages["hall_constants"];
      hs = {{"graph", affine.graph().name()}, {"count", affine.records().size()}, {"constants", constants}};
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const CheckFailure& e) {
    rep.abort = StageCheck{e.stage(), {"abort", false, e.what()}};
  } catch (const BudgetExceeded& e) {
    rep.abort = StageCheck{stage, {"abort", false, std::string("budget exceeded: ") + e.what()}};
  }
  return rep;
}

void emit_report(const Report& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw Error("cannot write " + (dir / name).string());
    os << text;
    if (!os) throw Error("write failed for " + (dir / name).string());
  };
  write("report.json", r.to_json().dump(2) + "\n");
  for (const auto& [name, text] : r.csv) write(name, text);
}

}  // namespace mckay::pipeline
