#include "doctest.h"

#include <algorithm>

#include "mckay/chartab.hpp"

using namespace mckay;
using namespace mckay::binpoly;
using namespace mckay::chartab;

namespace {

struct Built {
  FiniteMatrixGroup g;
  CharacterTable t;
};

Built build(const GroupSpec& spec, std::uint32_t after = 0, std::uint64_t seed = 1) {
  FiniteMatrixGroup g(spec, choose_modulus(spec, after));
  auto cc = conjugacy_classes(g);
  auto t = character_table(g, cc, seed);
  return {std::move(g), std::move(t)};
}

std::vector<unsigned> sorted(std::vector<unsigned> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("degrees of the E-type tables") {
  CHECK(sorted(build(GroupSpec::e6()).t.degrees) == std::vector<unsigned>{1, 1, 1, 2, 2, 2, 3});
  CHECK(sorted(build(GroupSpec::e7()).t.degrees) == std::vector<unsigned>{1, 1, 2, 2, 2, 3, 3, 4});
  CHECK(sorted(build(GroupSpec::e8()).t.degrees) == std::vector<unsigned>{1, 2, 2, 3, 3, 4, 4, 5, 6});
}

TEST_CASE("every family passes table verification and graph checks") {
  for (auto spec : {GroupSpec::cyclic(2), GroupSpec::cyclic(3), GroupSpec::cyclic(6), GroupSpec::binary_dihedral(2),
                    GroupSpec::binary_dihedral(3), GroupSpec::binary_dihedral(5), GroupSpec::e6(), GroupSpec::e7(),
                    GroupSpec::e8()}) {
    CAPTURE(spec.label());
    auto b = build(spec);
    for (const auto& c : verify_table(b.t, b.g)) {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
    auto m = tensor_multiplicities(b.t);
    auto graph = mckay_graph(m, b.t, spec);
    CHECK(all_pass(graph.checks));
    CHECK(graph.vertex_count == b.t.size());
    CHECK(graph.trivial == 0);
  }
}

TEST_CASE("A3 McKay graph is a triangle") {
  auto b = build(GroupSpec::cyclic(3));
  auto m = tensor_multiplicities(b.t);
  CHECK(m.m == IntMatrix{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  auto g = mckay_graph(m, b.t, GroupSpec::cyclic(3));
  CHECK(g.shape == "cycle");
  CHECK(g.finite_cartan == IntMatrix{{2, -1}, {-1, 2}});
}

TEST_CASE("shapes") {
  CHECK(mckay_graph(tensor_multiplicities(build(GroupSpec::binary_dihedral(3)).t), build(GroupSpec::binary_dihedral(3)).t,
                    GroupSpec::binary_dihedral(3))
            .shape == "D-shape");
  auto e8 = build(GroupSpec::e8());
  auto g = mckay_graph(tensor_multiplicities(e8.t), e8.t, GroupSpec::e8());
  CHECK(g.shape == "E-shape");
  CHECK(g.leading_minors.back() == 1);
}

TEST_CASE("property: multiplicity matrix is independent of prime and seed") {
  for (auto spec : {GroupSpec::binary_dihedral(2), GroupSpec::binary_dihedral(4), GroupSpec::e6(), GroupSpec::e7()}) {
    CAPTURE(spec.label());
    auto a = build(spec, 0, 1);
    auto p = a.g.field().modulus();
    auto b = build(spec, p, 99);
    CHECK(tensor_multiplicities(a.t).m == tensor_multiplicities(b.t).m);
    CHECK(a.t.degrees == b.t.degrees);
  }
}

TEST_CASE("wrong diagram is rejected") {
  CHECK_FALSE(graphs_isomorphic(affine_diagram(GroupSpec::e6()), affine_diagram(GroupSpec::binary_dihedral(4))));
  CHECK(graphs_isomorphic(affine_diagram(GroupSpec::binary_dihedral(2)), affine_diagram(GroupSpec::binary_dihedral(2))));
}
