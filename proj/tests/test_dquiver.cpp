#include "doctest.h"

#include <random>

#include "mckay/dquiver.hpp"
#include "mckay/errors.hpp"

using namespace mckay;
using namespace mckay::dquiver;

namespace {

// Rep of the one-edge graph with x_01 = x and x_10 = y, both 1x1.
DoubleRep edge_rep(Residue x, Residue y) {
  auto g = SimplyLacedGraph::path(2);
  auto r = DoubleRep::zero(g, {1, 1});
  r.maps[0](0, 0) = x;
  r.maps[1](0, 0) = y;
  return r;
}

std::size_t class_with_ranks(const ClassCatalogue& cat, std::int32_t fw, std::int32_t bw) {
  for (const auto& c : cat.classes)
    if (c.key[0] == fw && c.key[1] == bw) return c.id;
  FAIL("class not found");
  return 0;
}

}  // namespace

TEST_CASE("graph construction") {
  auto g = SimplyLacedGraph::cycle(4);
  CHECK(g.edges().size() == 4);
  CHECK(g.neighbours(0) == std::vector<std::size_t>{1, 3});
  CHECK(g.map_index(3, 0) == 2 * 1 + 1);
  CHECK(g.cartan()[0] == std::vector<std::int64_t>{2, -1, 0, -1});
  CHECK_THROWS_AS(SimplyLacedGraph::cycle(2), ConfigError);
  CHECK_THROWS_AS(SimplyLacedGraph::from_adjacency({{0, 1}, {0, 0}}), ConfigError);
  CHECK_THROWS_AS(SimplyLacedGraph::from_adjacency({{1}}), ConfigError);
}

TEST_CASE("encode and decode are inverse") {
  auto g = SimplyLacedGraph::path(3);
  PrimeField f(5);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto r = DoubleRep::zero(g, {1, 2, 1});
    for (auto& m : r.maps)
      for (std::size_t a = 0; a < m.rows(); ++a)
        for (std::size_t b = 0; b < m.cols(); ++b) m(a, b) = static_cast<Residue>(rng() % 5);
    CHECK(decode(g, r.dims, encode(r, 5), 5) == r);
  }
}

TEST_CASE("iso classes on one edge") {
  auto g = SimplyLacedGraph::path(2);
  PrimeField f(3);
  CHECK(enumerate_iso_classes(g, {1, 1}, f).classes.size() == 3);
  CHECK(enumerate_iso_classes(g, {1, 0}, f).classes.size() == 1);
  CHECK(enumerate_iso_classes(g, {0, 1}, f).classes.size() == 1);
  CHECK(enumerate_iso_classes(g, {2, 1}, f).classes.size() == 3);
  auto cat = enumerate_iso_classes(g, {1, 1}, f);
  CHECK(cat.classes.front().code == 0);
  for (std::size_t i = 1; i < cat.classes.size(); ++i) CHECK(cat.classes[i - 1].code < cat.classes[i].code);
}

TEST_CASE("are_isomorphic") {
  auto g = SimplyLacedGraph::path(2);
  PrimeField f(5);
  auto w = are_isomorphic(g, edge_rep(2, 0), edge_rep(3, 0), f);
  CHECK(w.isomorphic);
  REQUIRE(w.base_change.has_value());
  CHECK_FALSE(are_isomorphic(g, edge_rep(1, 0), edge_rep(0, 1), f).isomorphic);
  CHECK_FALSE(are_isomorphic(g, edge_rep(1, 0), edge_rep(0, 0), f).isomorphic);
  auto a = DoubleRep::zero(g, {2, 1});
  auto b = a;
  a.maps[0](0, 0) = 1;
  b.maps[0](1, 0) = 4;
  CHECK(are_isomorphic(g, a, b, f).isomorphic);
  Budget tight;
  tight.group_cap = 10;
  CHECK_THROWS_AS(are_isomorphic(g, a, b, f, tight), BudgetExceeded);
}

TEST_CASE("hall counts on one edge") {
  for (std::uint32_t q : {2u, 3u, 5u}) {
    RepContext ctx(SimplyLacedGraph::path(2), PrimeField(q));
    const DimVector ei{1, 0}, ej{0, 1}, eij{1, 1}, e2i{2, 0};
    const auto& cat = ctx.classes(eij);
    const auto split = class_with_ranks(cat, 0, 0);
    const auto m = class_with_ranks(cat, 1, 0);  // x_01 : V_1 -> V_0 nonzero
    CHECK(hall_count(ctx, 0, ei, 0, ej, split, eij) == 1);
    CHECK(hall_count(ctx, 0, ej, 0, ei, split, eij) == 1);
    CHECK(hall_count(ctx, 0, ei, 0, ei, 0, e2i) == q + 1);
    CHECK(hall_count(ctx, 0, ej, 0, ei, m, eij) == 0);
    CHECK(hall_count(ctx, 0, ei, 0, ej, m, eij) == 1);
  }
}

TEST_CASE("property: orbit sizes sum to the relation variety") {
  struct Case {
    SimplyLacedGraph g;
    DimVector d;
    std::uint32_t q;
  };
  std::vector<Case> cases{{SimplyLacedGraph::path(2), {1, 1}, 3}, {SimplyLacedGraph::path(2), {2, 1}, 3},
                          {SimplyLacedGraph::path(3), {1, 1, 1}, 3}, {SimplyLacedGraph::cycle(3), {1, 1, 1}, 2},
                          {SimplyLacedGraph::path(2), {2, 2}, 2},     {SimplyLacedGraph::cycle(4), {1, 1, 1, 1}, 2}};
  for (const auto& c : cases) {
    PrimeField f(c.q);
    auto cat = enumerate_iso_classes(c.g, c.d, f);
    std::uint64_t sum = 0;
    for (const auto& cls : cat.classes) {
      sum += cls.orbit_size;
      CHECK(base_change_group_order_mod(c.d, c.q, cls.orbit_size) == 0);
      CHECK(satisfies_relation(c.g, cls.representative, f));
    }
    CHECK(sum == cat.variety_points);
    CHECK(sum == relation_variety_count_bruteforce(c.g, c.d, f));
  }
}

TEST_CASE("property: single-vertex counts are Gaussian binomials") {
  for (std::uint32_t q : {2u, 3u, 5u})
    for (unsigned n = 1; n <= 3; ++n)
      for (unsigned k = 0; k <= n; ++k) {
        RepContext ctx(SimplyLacedGraph::path(2), PrimeField(q));
        const DimVector a{k, 0}, b{n - k, 0}, c{n, 0};
        CHECK(hall_count(ctx, 0, a, 0, b, 0, c) == mckay::ffla::gaussian_binomial(n, k, q));
      }
}

TEST_CASE("property: transpose duality swaps sub and quotient") {
  // D(x_ij) = x_ji^T preserves the relation and reverses arrows of extensions.
  auto dual = [](const DoubleRep& r) {
    DoubleRep d = r;
    for (std::size_t e = 0; 2 * e < r.maps.size(); ++e) {
      d.maps[2 * e] = r.maps[2 * e + 1].transpose();
      d.maps[2 * e + 1] = r.maps[2 * e].transpose();
    }
    return d;
  };
  RepContext ctx(SimplyLacedGraph::path(3), PrimeField(3));
  const DimVector a{0, 1, 1}, b{1, 1, 0}, c{1, 2, 1};
  const auto& cat = ctx.classes(c);
  const auto& ca = ctx.classes(a);
  const auto& cb = ctx.classes(b);
  for (std::size_t ci = 0; ci < cat.classes.size(); ci += 5) {
    const auto dc = ctx.class_of(dual(cat.classes[ci].representative));
    const auto counts = hall_counts_into(ctx, a, b, ci, c);
    const auto dual_counts = hall_counts_into(ctx, b, a, dc, c);
    for (std::size_t x = 0; x < ca.classes.size(); ++x)
      for (std::size_t y = 0; y < cb.classes.size(); ++y) {
        const auto dx = ctx.class_of(dual(ca.classes[x].representative));
        const auto dy = ctx.class_of(dual(cb.classes[y].representative));
        CHECK(counts[x][y] == dual_counts[dy][dx]);
      }
  }
}

TEST_CASE("budget is enforced") {
  Budget tiny;
  tiny.variety_cap = 16;
  CHECK_THROWS_AS(enumerate_iso_classes(SimplyLacedGraph::path(2), {2, 2}, PrimeField(3), tiny), BudgetExceeded);
}
