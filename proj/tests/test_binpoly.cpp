#include "doctest.h"

#include "mckay/binpoly.hpp"
#include "mckay/errors.hpp"

using namespace mckay::binpoly;

TEST_CASE("moduli") {
  CHECK(choose_modulus(GroupSpec::cyclic(3)).modulus() == 7);
  CHECK(choose_modulus(GroupSpec::cyclic(4)).modulus() == 5);
  CHECK(choose_modulus(GroupSpec::binary_dihedral(2)).modulus() == 5);
  CHECK(choose_modulus(GroupSpec::e6()).modulus() == 13);
  CHECK(choose_modulus(GroupSpec::e7()).modulus() == 73);
  CHECK(choose_modulus(GroupSpec::e8()).modulus() == 61);
  CHECK(choose_modulus(GroupSpec::e6(), 13).modulus() > 13);
  CHECK_FALSE(is_admissible_modulus(GroupSpec::e6(), 7));
}

TEST_CASE("parse") {
  CHECK(GroupSpec::parse("A 3") == GroupSpec::cyclic(3));
  CHECK(GroupSpec::parse("D2") == GroupSpec::binary_dihedral(2));
  CHECK(GroupSpec::parse("E8") == GroupSpec::e8());
  CHECK_THROWS_AS(GroupSpec::parse("F4"), mckay::ConfigError);
  CHECK_THROWS_AS(GroupSpec::parse("A"), mckay::ConfigError);
}

TEST_CASE("orders, closure and class counts") {
  struct Case {
    GroupSpec spec;
    std::size_t order;
    std::size_t classes;
  };
  for (auto c : {Case{GroupSpec::cyclic(3), 3, 3}, Case{GroupSpec::cyclic(5), 5, 5}, Case{GroupSpec::binary_dihedral(2), 8, 5},
                 Case{GroupSpec::binary_dihedral(3), 12, 6}, Case{GroupSpec::binary_dihedral(4), 16, 7},
                 Case{GroupSpec::e6(), 24, 7}, Case{GroupSpec::e7(), 48, 8}, Case{GroupSpec::e8(), 120, 9}}) {
    CAPTURE(c.spec.label());
    FiniteMatrixGroup g(c.spec, choose_modulus(c.spec));
    CHECK(g.order() == c.order);
    CHECK(g.order() == c.spec.expected_order());
    CHECK(g.closure_additions() == 0);
    CHECK(g.identity() == 0);
    auto cc = conjugacy_classes(g);
    CHECK(cc.count() == c.classes);
    std::size_t total = 0;
    for (auto s : cc.sizes) {
      total += s;
      CHECK(g.order() % s == 0);
    }
    CHECK(total == g.order());
    for (std::size_t i = 0; i < g.order(); ++i) {
      CHECK(g.element(i).det(g.field()) == 1);
      CHECK(g.product(i, g.inverse(i)) == g.identity());
      CHECK(c.spec.exponent() % g.element_order(i) == 0);
    }
  }
}

TEST_CASE("property: same group at the next admissible prime") {
  for (auto spec : {GroupSpec::cyclic(4), GroupSpec::binary_dihedral(3), GroupSpec::e7()}) {
    auto p1 = choose_modulus(spec);
    auto p2 = choose_modulus(spec, p1.modulus());
    FiniteMatrixGroup a(spec, p1), b(spec, p2);
    CHECK(a.order() == b.order());
    CHECK(conjugacy_classes(a).count() == conjugacy_classes(b).count());
  }
}
