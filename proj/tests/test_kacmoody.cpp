#include "doctest.h"

#include "mckay/dquiver.hpp"
#include "mckay/errors.hpp"
#include "mckay/kacmoody.hpp"

using namespace mckay;
using namespace mckay::kacmoody;

namespace {

IntMatrix cartan_of(const dquiver::SimplyLacedGraph& g) { return g.cartan(); }

// Path on n vertices with a branch vertex attached to vertex `at`.
IntMatrix branched(std::size_t n, std::size_t at) {
  dquiver::IntMatrix a(n + 1, std::vector<std::int64_t>(n + 1, 0));
  for (std::size_t i = 0; i + 1 < n; ++i) a[i][i + 1] = a[i + 1][i] = 1;
  a[at][n] = a[n][at] = 1;
  return dquiver::SimplyLacedGraph::from_adjacency(a).cartan();
}

std::uint64_t multinomial(const DimVector& a) {
  std::uint64_t r = 1, n = 0;
  for (auto k : a)
    for (unsigned m = 1; m <= k; ++m) r = r * ++n / m;
  return r;
}

}  // namespace

TEST_CASE("Serre elements") {
  const auto a2 = cartan_of(dquiver::SimplyLacedGraph::path(2));
  auto s = serre_element(0, 1, a2);
  CHECK(s.terms.size() == 3);
  CHECK(s.terms.at({0, 0, 1}) == Rational(1, 2));
  CHECK(s.terms.at({0, 1, 0}) == -1);
  CHECK(s.terms.at({1, 0, 0}) == Rational(1, 2));
  CHECK(s.degree(2) == DimVector{2, 1});

  const auto a3 = cartan_of(dquiver::SimplyLacedGraph::path(3));
  auto c = serre_element(0, 2, a3);
  CHECK(c.terms.size() == 2);
  // k = 0 gives e_j e_i, k = 1 gives -e_i e_j.
  CHECK(c.terms.at({2, 0}) == 1);
  CHECK(c.terms.at({0, 2}) == -1);
}

TEST_CASE("positive part on A2") {
  const auto a2 = cartan_of(dquiver::SimplyLacedGraph::path(2));
  CHECK(positive_part_dim(a2, {1, 1}) == 2);
  CHECK(positive_part_dim(a2, {2, 1}) == 2);
  CHECK(positive_part_dim(a2, {2, 2}) == 3);
  CHECK(positive_part_dim(a2, {3, 1}) == 2);
  CHECK(positive_part_dim(a2, {4, 0}) == 1);
  CHECK(serre_ideal_slice(a2, {1, 1}).rank == 0);
  CHECK(serre_ideal_slice(a2, {2, 1}).rank == 1);
  CHECK_THROWS_AS(positive_part_dim(a2, {4, 3}, 6), BudgetExceeded);
}

TEST_CASE("root systems") {
  CHECK(root_system(cartan_of(dquiver::SimplyLacedGraph::path(2))).positive_roots.size() == 3);
  CHECK(root_system(cartan_of(dquiver::SimplyLacedGraph::path(4))).positive_roots.size() == 10);
  CHECK(root_system(branched(3, 1)).positive_roots.size() == 12);   // D4
  CHECK(root_system(branched(5, 2)).positive_roots.size() == 36);   // E6
  CHECK(root_system(branched(6, 2)).positive_roots.size() == 63);   // E7
  CHECK(root_system(branched(7, 2)).positive_roots.size() == 120);  // E8
  CHECK_THROWS_AS(root_system(cartan_of(dquiver::SimplyLacedGraph::cycle(3))), ConfigError);
  CHECK(is_finite_type(branched(4, 1)));  // D5
  dquiver::IntMatrix star(5, std::vector<std::int64_t>(5, 0));
  for (std::size_t k = 1; k < 5; ++k) star[0][k] = star[k][0] = 1;
  CHECK_FALSE(is_finite_type(dquiver::SimplyLacedGraph::from_adjacency(star).cartan()));  // affine D4
}

TEST_CASE("PBW counts on A2") {
  auto r = root_system(cartan_of(dquiver::SimplyLacedGraph::path(2)));
  CHECK(pbw_dim(r, {1, 1}) == 2);
  CHECK(pbw_dim(r, {2, 1}) == 2);
  CHECK(pbw_dim(r, {2, 2}) == 3);
  CHECK(pbw_dim(r, {3, 1}) == 2);
}

TEST_CASE("degree enumeration") {
  auto d = degrees_up_to(2, 2, false);
  CHECK(d == std::vector<DimVector>{{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}});
  auto p = degrees_up_to(3, 3, true);
  CHECK(std::find(p.begin(), p.end(), DimVector{1, 1, 1}) == p.end());
  CHECK(p.size() == 19 - 1);
}

TEST_CASE("property: word counts are multinomial") {
  for (const DimVector& a : {DimVector{2, 1}, DimVector{1, 1, 1}, DimVector{2, 2}, DimVector{3, 0, 1}})
    CHECK(words_of_content(a).size() == multinomial(a));
}

TEST_CASE("property: positive part equals PBW on finite types") {
  for (const auto& c : {cartan_of(dquiver::SimplyLacedGraph::path(3)), branched(3, 1)}) {
    auto roots = root_system(c);
    for (const auto& a : degrees_up_to(c.size(), 4, false)) CHECK(positive_part_dim(c, a) == pbw_dim(roots, a));
  }
}

TEST_CASE("property: symmetric under graph automorphisms") {
  const auto tri = cartan_of(dquiver::SimplyLacedGraph::cycle(3));
  for (const auto& a : degrees_up_to(3, 4, false)) {
    const DimVector rot{a[2], a[0], a[1]}, flip{a[0], a[2], a[1]};
    const auto d = positive_part_dim(tri, a);
    CHECK(positive_part_dim(tri, rot) == d);
    CHECK(positive_part_dim(tri, flip) == d);
  }
}

TEST_CASE("property: Serre slice is a two-sided ideal") {
  // I_alpha = S_alpha + sum_i e_i I_(alpha - e_i) + sum_i I_(alpha - e_i) e_i.
  const auto c = cartan_of(dquiver::SimplyLacedGraph::cycle(3));
  for (const auto& a : degrees_up_to(3, 4, false)) {
    const auto full = serre_ideal_slice(c, a);
    const auto words = words_of_content(a);
    std::map<Word, std::size_t> index;
    for (std::size_t k = 0; k < words.size(); ++k) index.emplace(words[k], k);
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j && serre_element(i, j, c).degree(3) == a) {
          std::vector<Rational> row(words.size(), Rational(0));
          for (const auto& [w, v] : serre_element(i, j, c).terms) row[index.at(w)] += v;
          rows.push_back(row);
        }
    for (std::size_t i = 0; i < 3; ++i) {
      if (a[i] == 0) continue;
      DimVector rest = a;
      --rest[i];
      const auto sub = serre_ideal_slice(c, rest);
      const auto sub_words = words_of_content(rest);
      for (const auto& r : sub.spanning)
        for (int side = 0; side < 2; ++side) {
          std::vector<Rational> row(words.size(), Rational(0));
          for (std::size_t k = 0; k < r.size(); ++k) {
            Word w = sub_words[k];
            if (side == 0) w.insert(w.begin(), static_cast<std::uint8_t>(i));
            else w.push_back(static_cast<std::uint8_t>(i));
            row[index.at(w)] += r[k];
          }
          rows.push_back(row);
        }
    }
    CHECK((rows.empty() ? 0 : ffla::rank_over_q(rows)) == full.rank);
  }
}

TEST_CASE("dims_compare on the A2 path") {
  hall::HallAlgebra h(dquiver::SimplyLacedGraph::path(2));
  auto r = dims_compare(h, 3, false);
  CHECK(all_pass(r.checks));
  std::vector<std::size_t> dims;
  for (const auto& row : r.rows) {
    dims.push_back(row.hall_dim);
    CHECK(row.pbw_dim.has_value());
    CHECK(row.hall_equals_ug);
  }
  CHECK(dims == std::vector<std::size_t>{1, 1, 1, 2, 1, 1, 2, 2, 1});
}
