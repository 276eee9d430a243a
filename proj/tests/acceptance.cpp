// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Each criterion recomputes its invariants from the raw
// module outputs instead of trusting the modules' own verdicts.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include "mckay/binpoly.hpp"
#include "mckay/chartab.hpp"
#include "mckay/errors.hpp"
#include "mckay/hall.hpp"
#include "mckay/kacmoody.hpp"
#include "mckay/kleinian.hpp"
#include "mckay/pipeline.hpp"

using namespace mckay;
using binpoly::GroupSpec;
using hall::DimVector;
using hall::HallAlgebra;
using hall::HallElement;
using hall::HallTerm;

namespace {

struct Failures {
  std::vector<std::string> items;
  void require(bool ok, const std::string& what) {
    if (!ok) items.push_back(what);
  }
};

struct Built {
  std::unique_ptr<binpoly::FiniteMatrixGroup> group;
  binpoly::ConjugacyClasses classes;
  chartab::CharacterTable table;
  chartab::TensorMultiplicities tm;
  chartab::McKayGraphData graph;
};

Built build(const GroupSpec& spec, std::uint32_t after = 0) {
  Built b;
  b.group = std::make_unique<binpoly::FiniteMatrixGroup>(spec, binpoly::choose_modulus(spec, after));
  b.classes = binpoly::conjugacy_classes(*b.group);
  b.table = chartab::character_table(*b.group, b.classes);
  b.tm = chartab::tensor_multiplicities(b.table);
  b.graph = chartab::mckay_graph(b.tm, b.table, spec);
  return b;
}

std::string join(const std::vector<std::string>& v, std::size_t limit = 4) {
  std::string s;
  for (std::size_t i = 0; i < v.size() && i < limit; ++i) s += (i ? "; " : "") + v[i];
  if (v.size() > limit) s += "; +" + std::to_string(v.size() - limit) + " more";
  return s;
}

// --- 1 -------------------------------------------------------------------

std::string criterion1(Failures& f) {
  struct Case {
    GroupSpec spec;
    std::size_t order, classes;
  };
  const std::vector<Case> cases{{GroupSpec::e6(), 24, 7},
                                {GroupSpec::e7(), 48, 8},
                                {GroupSpec::e8(), 120, 9},
                                {GroupSpec::binary_dihedral(2), 8, 5},
                                {GroupSpec::binary_dihedral(3), 12, 6},
                                {GroupSpec::binary_dihedral(4), 16, 7}};
  std::string detail;
  for (const auto& c : cases) {
    binpoly::FiniteMatrixGroup g(c.spec, binpoly::choose_modulus(c.spec));
    const auto cl = binpoly::conjugacy_classes(g);
    // Closure recomputed: every product of two elements is an element.
    std::size_t outside = 0;
    for (const auto& a : g.elements())
      for (const auto& b : g.elements()) {
        const auto p = binpoly::mul(a, b, g.field());
        if (std::find(g.elements().begin(), g.elements().end(), p) == g.elements().end()) ++outside;
      }
    const auto label = c.spec.label();
    f.require(g.order() == c.order, label + " order " + std::to_string(g.order()));
    f.require(cl.count() == c.classes, label + " classes " + std::to_string(cl.count()));
    f.require(outside == 0 && g.closure_additions() == 0, label + " not closed");
    f.require(cl.count() == chartab::affine_diagram(c.spec).size(), label + " class count != affine vertex count");
    detail += label + ":" + std::to_string(g.order()) + "/" + std::to_string(cl.count()) + " ";
  }
  return detail;
}

// --- 2 -------------------------------------------------------------------

std::string criterion2(Failures& f) {
  std::string detail;
  for (const auto& spec : {GroupSpec::cyclic(3), GroupSpec::cyclic(4), GroupSpec::binary_dihedral(2),
                           GroupSpec::binary_dihedral(3), GroupSpec::e6(), GroupSpec::e7(), GroupSpec::e8()}) {
    const auto label = spec.label();
    Built b;
    try {
      b = build(spec);
    } catch (const CheckFailure& e) {
      f.require(false, label + ": " + e.what());
      continue;
    }
    const auto& m = b.tm.m;
    const auto& d = b.table.degrees;
    const std::size_t n = m.size();
    chartab::IntMatrix cartan(n, std::vector<std::int64_t>(n));
    for (std::size_t a = 0; a < n; ++a) {
      f.require(m[a][a] == 0, label + " nonzero diagonal");
      std::int64_t sum = 0;
      for (std::size_t r = 0; r < n; ++r) {
        f.require(m[a][r] == m[r][a], label + " m not symmetric");
        sum += m[a][r] * d[r];
        cartan[a][r] = (a == r ? 2 : 0) - m[a][r];
      }
      f.require(sum == 2 * static_cast<std::int64_t>(d[a]), label + " sum m d != 2d");
    }
    for (std::size_t a = 0; a < n; ++a) {
      std::int64_t s = 0;
      for (std::size_t r = 0; r < n; ++r) s += cartan[a][r] * d[r];
      f.require(s == 0, label + " affine Cartan does not kill d");
    }
    f.require(ffla::integer_determinant(cartan) == 0, label + " det != 0");
    f.require(chartab::graphs_isomorphic(m, chartab::affine_diagram(spec)),
              label + " not " + chartab::affine_diagram_name(spec));
    // Finite Cartan: delete the trivial vertex, all leading minors positive.
    std::vector<std::size_t> keep;
    for (std::size_t a = 0; a < n; ++a)
      if (a != b.table.trivial) keep.push_back(a);
    chartab::IntMatrix fin(keep.size(), std::vector<std::int64_t>(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a)
      for (std::size_t r = 0; r < keep.size(); ++r) fin[a][r] = cartan[keep[a]][keep[r]];
    f.require(kacmoody::is_finite_type(fin), label + " finite Cartan not positive definite");
    detail += label + " ";
  }
  return detail;
}

// --- 3 -------------------------------------------------------------------

std::vector<unsigned> unit(std::size_t n, std::initializer_list<std::size_t> at) {
  std::vector<unsigned> v(n, 0);
  for (auto i : at) ++v[i];
  return v;
}

std::string criterion3(Failures& f) {
  std::string detail;
  for (const auto& spec : {GroupSpec::cyclic(3), GroupSpec::cyclic(4), GroupSpec::binary_dihedral(2)}) {
    const auto label = spec.label();
    const auto base = build(spec);
    std::size_t maxdeg = 0;
    for (std::size_t v = 0; v < base.graph.vertex_count; ++v) {
      std::size_t deg = 0;
      for (const auto& e : base.graph.edges) deg += (e.a == v) + (e.b == v);
      maxdeg = std::max(maxdeg, deg);
    }
    const auto p = kleinian::tor_modulus(spec, base.group->field().modulus(), 3, static_cast<unsigned>(maxdeg));
    const auto b = build(spec, p - 1);
    const std::size_t order = b.group->order();
    kleinian::EquivariantPolyAlgebra alg(*b.group, 2 * static_cast<unsigned>(order));
    const auto n = kleinian::invariant_ideal(alg);
    const auto dec = kleinian::isotypic_pairs(alg, n, b.table);
    const auto suite = kleinian::tor_suite(dec, b.graph, {});
    const std::size_t k = b.table.size();
    const auto triv = b.table.trivial;
    const auto& field = b.group->field();
    const auto id_class = b.classes.identity_class;

    auto regular = [&](const kleinian::PointIdeal& ideal) {
      if (ideal.colength != order) return false;
      for (std::size_t c = 0; c < ideal.quotient_character.size(); ++c)
        if (ideal.quotient_character[c] != (c == id_class ? field.reduce(static_cast<std::int64_t>(order)) : 0))
          return false;
      return true;
    };
    auto alternating_zero = [&](const kleinian::TorTriple& t) {
      for (std::size_t c = 0; c < t.characters[0].size(); ++c)
        if (field.add(field.sub(t.characters[0][c], t.characters[1][c]), t.characters[2][c]) != 0) return false;
      return true;
    };

    std::vector<std::size_t> generic(k, 0);
    std::size_t intersections = 0;
    for (const auto& s : suite.samples) {
      if (s.kind != "generic" && s.kind != "intersection") continue;
      const auto& id = s.ideal;
      const std::string where = label + " " + s.kind + " pi=" + std::to_string(id.pi) + " (" +
                                std::to_string(id.parameter.lambda) + ":" + std::to_string(id.parameter.mu) + ")";
      if (!s.tor) {
        f.require(false, where + " has no Tor");
        continue;
      }
      const auto& t = *s.tor;
      f.require(regular(id), where + " quotient not regular of dim |G|");
      f.require(alternating_zero(t), where + " alternating character sum nonzero");
      if (s.kind == "generic") {
        const unsigned dpi = b.table.degrees[id.pi];
        f.require(!id.parameter.boundary(), where + " is a boundary point");
        f.require(t.dims == std::array<std::size_t, 3>{1, 1 + dpi, dpi}, where + " Tor dims");
        f.require(t.multiplicities[0] == unit(k, {triv}), where + " Tor0 multiplicities");
        f.require(t.multiplicities[1] == unit(k, {triv, id.pi}), where + " Tor1 multiplicities");
        f.require(t.multiplicities[2] == unit(k, {id.pi}), where + " Tor2 multiplicities");
        ++generic[id.pi];
      } else {
        f.require(id.rho.has_value(), where + " without a second irreducible");
        if (!id.rho) continue;
        f.require(t.multiplicities[1] == unit(k, {triv, id.pi, *id.rho}), where + " Tor1 != C + pi + rho");
        ++intersections;
      }
    }
    for (std::size_t pi = 0; pi < k; ++pi)
      if (pi != triv) f.require(generic[pi] >= 3, label + " pi=" + std::to_string(pi) + " has < 3 interior samples");
    // One intersection point per edge between nontrivial vertices.
    std::size_t inner_edges = 0;
    for (const auto& e : b.graph.edges) inner_edges += e.a != triv && e.b != triv;
    f.require(intersections == inner_edges, label + " intersections " + std::to_string(intersections) + " of " +
                                                std::to_string(inner_edges));
    std::size_t total = 0;
    for (auto g : generic) total += g;
    detail += label + "@p=" + std::to_string(p) + ":" + std::to_string(total) + "+" + std::to_string(intersections) +
              " ";
  }
  return detail;
}

// --- 4 -------------------------------------------------------------------

std::size_t class_with(HallAlgebra& h, const DimVector& d, std::size_t map, std::size_t other) {
  for (std::size_t k = 0; k < h.class_count(d); ++k) {
    const auto& key = h.key({d, k});
    if (key[map] == 1 && key[other] == 0) return k;
  }
  throw std::runtime_error("no rank-one class");
}

std::string criterion4(Failures& f) {
  std::string detail;
  for (const auto& spec : {GroupSpec::cyclic(3), GroupSpec::cyclic(4), GroupSpec::binary_dihedral(2)}) {
    const auto b = build(spec);
    HallAlgebra h(hall::quiver_graph(b.graph));
    const auto& g = h.graph();
    const std::size_t n = g.vertex_count();
    const auto label = g.name();
    std::size_t adjacent = 0, far = 0;
    for (std::size_t i = 0; i < n; ++i) {
      DimVector ei(n, 0), e2i(n, 0);
      ei[i] = 1;
      e2i[i] = 2;
      const auto& sq = h.euler_hall_constant({ei, 0}, {ei, 0}, {e2i, 0});
      f.require(sq.value == 2 && sq.polynomial.to_string() == "q + 1",
                label + " chi(C(i),C(i),C(i)^2) = " + ffla::to_string(sq.value));
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        DimVector ej(n, 0), eij(n, 0);
        ej[j] = 1;
        eij[i] = eij[j] = 1;
        const auto& split = h.euler_hall_constant({ei, 0}, {ej, 0}, {eij, 0});  // all maps zero: least key
        f.require(split.value == 1, label + " chi(C(i),C(j),C(i)+C(j)) = " + ffla::to_string(split.value));
        auto diff = h.product(h.theta(i), h.theta(j));
        diff -= h.product(h.theta(j), h.theta(i));
        if (g.adjacent(i, j)) {
          HallElement expected;
          expected.add({eij, class_with(h, eij, g.map_index(i, j), g.map_index(j, i))}, 1);
          expected.add({eij, class_with(h, eij, g.map_index(j, i), g.map_index(i, j))}, -1);
          f.require(diff == expected, label + " adjacent commutator " + std::to_string(i) + "," + std::to_string(j));
          ++adjacent;
        } else {
          f.require(diff.is_zero(), label + " non-adjacent commutator " + std::to_string(i) + "," + std::to_string(j));
          ++far;
        }
      }
    }
    std::size_t verified = 0;
    for (const auto& [k, r] : h.records()) {
      // Held-out prediction checked again from the raw samples.
      const auto poly = ffla::interpolate_counts(r.samples);
      const bool ok = poly.evaluate(ffla::Rational(r.held_out)) == ffla::Rational(r.held_out_count);
      f.require(ok && r.held_out_ok, label + " held-out prime missed");
      verified += ok;
    }
    detail += label + ":" + std::to_string(adjacent) + " adj/" + std::to_string(far) + " far/" +
              std::to_string(verified) + " held-out ";
  }
  return detail;
}

// --- 5 -------------------------------------------------------------------

std::string criterion5(Failures& f) {
  std::string detail;
  for (const auto& spec : {GroupSpec::cyclic(3), GroupSpec::cyclic(4), GroupSpec::binary_dihedral(2), GroupSpec::e6()}) {
    const auto b = build(spec);
    HallAlgebra h(hall::quiver_graph(b.graph));
    const auto start = std::chrono::steady_clock::now();
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < h.graph().vertex_count(); ++i)
      for (std::size_t j = 0; j < h.graph().vertex_count(); ++j) {
        if (i == j) continue;
        const auto s = h.serre_check(i, j);
        HallElement sum;
        for (const auto& t : s.terms) sum += t;
        f.require(s.zero && sum.is_zero(), h.graph().name() + " pair " + std::to_string(i) + "," + std::to_string(j));
        ++pairs;
      }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    f.require(secs <= 300.0, h.graph().name() + " took " + std::to_string(secs) + " s");
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << h.graph().name() << ":" << pairs << " pairs " << secs << "s ";
    detail += os.str();
  }
  return detail;
}

// --- 6 -------------------------------------------------------------------

std::string criterion6(Failures& f) {
  std::string detail;
  for (const auto& spec : {GroupSpec::cyclic(3), GroupSpec::cyclic(4)}) {
    const auto b = build(spec);
    HallAlgebra h(hall::finite_quiver_graph(b.graph));
    const auto cartan = h.graph().cartan();
    const auto roots = kacmoody::root_system(cartan);
    std::size_t rows = 0;
    for (const auto& a : kacmoody::degrees_up_to(cartan.size(), 4, false)) {
      const auto c = h.composition_dim(a);
      const auto u = kacmoody::positive_part_dim(cartan, a);
      const auto p = kacmoody::pbw_dim(roots, a);
      f.require(c == u && u == p, h.graph().name() + " " + hall::dims_string(a) + ": " + std::to_string(c) + "/" +
                                      std::to_string(u) + "/" + std::to_string(p));
      ++rows;
    }
    if (cartan.size() == 2) {
      f.require(h.composition_dim({1, 1}) == 2, "A2 (1,1) != 2");
      f.require(h.composition_dim({2, 1}) == 2, "A2 (2,1) != 2");
    }
    detail += h.graph().name() + ":" + std::to_string(rows) + " degrees ";
  }
  for (const auto& spec : {GroupSpec::cyclic(3), GroupSpec::cyclic(4), GroupSpec::binary_dihedral(2), GroupSpec::e6()}) {
    const auto b = build(spec);
    HallAlgebra h(hall::quiver_graph(b.graph));
    const auto cartan = h.graph().cartan();
    std::size_t rows = 0;
    for (const auto& a : kacmoody::degrees_up_to(cartan.size(), 3, true)) {
      const auto c = h.composition_dim(a);
      const auto u = kacmoody::positive_part_dim(cartan, a);
      f.require(c <= u, h.graph().name() + " " + hall::dims_string(a) + ": " + std::to_string(c) + " > " +
                            std::to_string(u));
      ++rows;
    }
    detail += h.graph().name() + ":" + std::to_string(rows) + " ";
  }
  return detail;
}

// --- 7 -------------------------------------------------------------------

nlohmann::ordered_json stable_view(const nlohmann::ordered_json& report) {
  const auto& st = report["stages"];
  auto degrees = st["character_table"]["degrees"].get<std::vector<unsigned>>();
  std::sort(degrees.begin(), degrees.end());
  nlohmann::ordered_json tor = nlohmann::ordered_json::array();
  for (const auto& s : st["tor"]["samples"])
    if (s["kind"] == "generic" || s["kind"] == "intersection")
      tor.push_back({s["kind"], s["pi"], s["rho"], s["multiplicities"]});
  std::sort(tor.begin(), tor.end());
  return {{"degrees", degrees}, {"m", st["mckay"]["m"]}, {"tor", tor}, {"hall", st["hall_constants"]["constants"]}};
}

std::string criterion7(Failures& f) {
  std::string detail;
  for (const auto& spec : {GroupSpec::cyclic(3), GroupSpec::e6()}) {
    pipeline::RunConfig c;
    c.family = spec;
    c.checks = pipeline::parse_checks("tor,hall");
    const auto p0 = binpoly::choose_modulus(spec).modulus();
    const auto p1 = binpoly::choose_modulus(spec, p0).modulus();
    c.modulus = p0;
    const auto r0 = pipeline::run(c);
    c.modulus = p1;
    const auto r1 = pipeline::run(c);
    f.require(r0.pass() && r1.pass(), spec.label() + " run failed");
    const auto a = stable_view(r0.to_json()), b = stable_view(r1.to_json());
    for (const char* key : {"degrees", "m", "tor", "hall"})
      f.require(a[key] == b[key], spec.label() + " " + key + " differ between p=" + std::to_string(p0) +
                                      " and p=" + std::to_string(p1));
    detail += spec.label() + ":p=" + std::to_string(p0) + "," + std::to_string(p1) + " (" +
              std::to_string(a["tor"].size()) + " Tor vectors, " + std::to_string(a["hall"].size()) + " constants) ";
  }
  return detail;
}

// --- 8 -------------------------------------------------------------------

std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string criterion8(Failures& f) {
  std::string detail;
  const auto root = std::filesystem::temp_directory_path() / "mckay_acceptance";
  for (const auto& spec : {GroupSpec::cyclic(3), GroupSpec::binary_dihedral(2)}) {
    pipeline::RunConfig c;
    c.family = spec;
    c.seed = 11;
    const auto d1 = root / (spec.label() + "_1"), d2 = root / (spec.label() + "_2");
    std::filesystem::remove_all(d1);
    std::filesystem::remove_all(d2);
    pipeline::emit_report(pipeline::run(c), d1);
    pipeline::emit_report(pipeline::run(c), d2);
    const auto a = read_file(d1 / "report.json"), b = read_file(d2 / "report.json");
    f.require(!a.empty() && a == b, spec.label() + " report.json differs");
    detail += spec.label() + ":" + std::to_string(a.size()) + " bytes ";
  }
  return detail;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string(Failures&)>>> criteria{
      {"group construction", criterion1}, {"McKay suite", criterion2},   {"Tor suite", criterion3},
      {"Hall constants", criterion4},     {"Serre suite", criterion5},   {"dimension suite", criterion6},
      {"cross-prime stability", criterion7}, {"determinism", criterion8}};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Failures f;
    std::string detail;
    try {
      detail = criteria[k].second(f);
    } catch (const std::exception& e) {
      f.items.push_back(std::string("exception: ") + e.what());
    }
    const bool pass = f.items.empty();
    failed += !pass;
    std::cout << "criterion " << k + 1 << " (" << criteria[k].first << "): " << (pass ? "PASS" : "FAIL") << " | "
              << (pass ? detail : join(f.items)) << std::endl;
  }
  return failed ? 1 : 0;
}
