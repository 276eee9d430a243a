#include "doctest.h"

#include "mckay/errors.hpp"
#include "mckay/kleinian.hpp"

using namespace mckay;
using namespace mckay::binpoly;
using namespace mckay::kleinian;

namespace {

struct Fixture {
  GroupSpec spec;
  FiniteMatrixGroup g;
  chartab::CharacterTable t;
  chartab::McKayGraphData graph;
  EquivariantPolyAlgebra alg;
  InvariantIdealN n;

  explicit Fixture(GroupSpec s, std::uint32_t after = 0)
      : spec(s),
        g(s, choose_modulus(s, after)),
        t(chartab::character_table(g, conjugacy_classes(g))),
        graph(chartab::mckay_graph(chartab::tensor_multiplicities(t), t, s)),
        alg(g, 2 * static_cast<unsigned>(g.order())),
        n(invariant_ideal(alg)) {}
};

std::vector<std::string> generator_strings(const Fixture& fx) {
  std::vector<std::string> out;
  for (const auto& p : fx.n.generators) out.push_back(p.to_string(fx.g.field()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("invariant generators of cyclic groups") {
  CHECK(generator_strings(Fixture(GroupSpec::cyclic(2))) == std::vector<std::string>{"x*y", "x^2", "y^2"});
  CHECK(generator_strings(Fixture(GroupSpec::cyclic(3))) == std::vector<std::string>{"x*y", "x^3", "y^3"});
}

TEST_CASE("generators are invariant and the action is multiplicative") {
  for (auto spec : {GroupSpec::cyclic(4), GroupSpec::binary_dihedral(2), GroupSpec::e6()}) {
    Fixture fx(spec);
    const auto& f = fx.g.field();
    for (const auto& gen : fx.n.generators)
      for (std::size_t e = 0; e < fx.g.order(); ++e)
        CHECK(ffla::apply(fx.alg.action(e, gen.degree), gen.coeffs, f) == gen.coeffs);
    for (unsigned d : {1u, 3u})
      for (std::size_t a = 0; a < fx.g.order(); a += 3)
        for (std::size_t b = 0; b < fx.g.order(); b += 5)
          CHECK(ffla::multiply(fx.alg.action(a, d), fx.alg.action(b, d), f) ==
                fx.alg.action(fx.g.product(a, b), d));
  }
}

TEST_CASE("cap below 2|G| is rejected") {
  FiniteMatrixGroup g(GroupSpec::cyclic(3), choose_modulus(GroupSpec::cyclic(3)));
  EquivariantPolyAlgebra alg(g, 5);
  CHECK_THROWS_AS(invariant_ideal(alg), ConfigError);
}

TEST_CASE("A3 copies: x and y^2") {
  Fixture fx(GroupSpec::cyclic(3));
  auto d = isotypic_pairs(fx.alg, fx.n, fx.t);
  CHECK(d.quotient->dim() == 5);
  CHECK(all_pass(d.checks));
  const auto& f = fx.g.field();
  // The weight-one character is the one whose pi' is x.
  bool seen = false;
  for (const auto& p : d.pairs) {
    const auto a = p.representatives_prime[0][0].to_string(f);
    const auto b = p.representatives_second[0][0].to_string(f);
    if (a == "x") {
      CHECK(b == "y^2");
      seen = true;
    } else {
      CHECK(a == "y");
      CHECK(b == "x^2");
    }
  }
  CHECK(seen);
}

TEST_CASE("A3 point ideal at (1:1)") {
  Fixture fx(GroupSpec::cyclic(3));
  auto d = isotypic_pairs(fx.alg, fx.n, fx.t);
  auto ideal = point_ideal(d, 1, {1, 1});
  CHECK(ideal.colength == 3);
  CHECK(ideal.regular);
  auto tor = koszul_tor(d, ideal);
  CHECK(tor.dims == std::array<std::size_t, 3>{1, 2, 1});
  CHECK(tor.multiplicities[1][0] == 1);
  CHECK(tor.multiplicities[1][1] == 1);
  CHECK(tor.multiplicities[2][1] == 1);
}

TEST_CASE("A2 is excluded from the pair construction") {
  Fixture fx(GroupSpec::cyclic(2));
  CHECK_THROWS_AS(isotypic_pairs(fx.alg, fx.n, fx.t), ConfigError);
}

TEST_CASE("Tor suites pass on A3, A4, D2") {
  for (auto spec : {GroupSpec::cyclic(3), GroupSpec::cyclic(4), GroupSpec::binary_dihedral(2)}) {
    CAPTURE(spec.label());
    const auto p = tor_modulus(spec, choose_modulus(spec).modulus(), 3, 3);
    Fixture fx(spec, p - 1);
    REQUIRE(fx.g.field().modulus() == p);
    auto d = isotypic_pairs(fx.alg, fx.n, fx.t);
    auto suite = tor_suite(d, fx.graph, {});
    for (const auto& c : suite.checks) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("tor modulus escalation") {
  CHECK(tor_modulus(GroupSpec::cyclic(3), 7, 3, 1) == 7);
  CHECK(tor_modulus(GroupSpec::cyclic(4), 5, 3, 2) == 13);
  CHECK(tor_modulus(GroupSpec::binary_dihedral(2), 5, 3, 3) == 13);
}

TEST_CASE("property: Tor multiplicities agree across primes for E6") {
  auto spec = GroupSpec::e6();
  Fixture a(spec);
  Fixture b(spec, a.g.field().modulus());
  auto da = isotypic_pairs(a.alg, a.n, a.t);
  auto db = isotypic_pairs(b.alg, b.n, b.t);
  TorSuiteOptions opts;
  opts.intersections = false;
  opts.boundary = false;
  auto sa = tor_suite(da, a.graph, opts);
  auto sb = tor_suite(db, b.graph, opts);
  CHECK(all_pass(sa.checks));
  CHECK(all_pass(sb.checks));
  for (std::size_t pi = 1; pi < a.t.size(); ++pi) {
    CHECK(da.pair(pi).copy_degrees == db.pair(pi).copy_degrees);
  }
  auto generic = [](const TorSuite& s) {
    std::vector<std::pair<std::size_t, std::array<std::vector<unsigned>, 3>>> out;
    for (const auto& x : s.samples)
      if (x.kind == "generic") out.emplace_back(x.ideal.pi, x.tor->multiplicities);
    return out;
  };
  CHECK(generic(sa) == generic(sb));
}
