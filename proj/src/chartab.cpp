#include "mckay/chartab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "mckay/errors.hpp"

namespace mckay::chartab {

using ffla::EchelonBasis;
using ffla::FpMatrix;

namespace {

constexpr unsigned kSplittingBudget = 200;

// Class matrices M_j with (M_j)[k][l] = #{x in C_j : x^-1 g_l in C_k}; the
// vector of central character values of each irreducible is a common right
// eigenvector, with eigenvalue omega(C_j) for M_j.
std::vector<FpMatrix> class_matrices(const FiniteMatrixGroup& g, const ConjugacyClasses& cc) {
  const auto& f = g.field();
  const std::size_t r = cc.count();
  std::vector<FpMatrix> out(r, FpMatrix(r, r));
  for (std::size_t x = 0; x < g.order(); ++x) {
    const std::size_t j = cc.class_of[x];
    for (std::size_t l = 0; l < r; ++l) {
      const std::size_t y = g.product(g.inverse(x), cc.representatives[l]);
      auto& entry = out[j](cc.class_of[y], l);
      entry = f.add(entry, 1);
    }
  }
  return out;
}

// Splits an invariant subspace (rows of `space`) by the eigenvalues of m.
std::vector<FpMatrix> split_by(const FpMatrix& space, const FpMatrix& m, const PrimeField& f) {
  const std::size_t s = space.rows();
  const std::size_t r = space.cols();
  EchelonBasis basis(r, f);
  for (std::size_t i = 0; i < s; ++i) basis.insert({space.row(i).begin(), space.row(i).end()});
  const auto b = basis.as_matrix();
  // Restriction of m to the subspace in the echelon basis.
  FpMatrix restricted(s, s);
  for (std::size_t i = 0; i < s; ++i) {
    const auto image = ffla::apply(m, b.row(i), f);
    const auto coords = basis.coordinates(image);
    for (std::size_t t = 0; t < s; ++t) restricted(t, i) = coords[t];
  }
  std::vector<FpMatrix> parts;
  std::size_t found = 0;
  for (Residue lambda = 0; lambda < f.modulus() && found < s; ++lambda) {
    FpMatrix shifted = restricted;
    for (std::size_t i = 0; i < s; ++i) shifted(i, i) = f.sub(shifted(i, i), lambda);
    const auto kernel = ffla::nullspace(shifted, f);
    if (kernel.rows() == 0) continue;
    FpMatrix part(0, r);
    for (std::size_t k = 0; k < kernel.rows(); ++k) {
      std::vector<Residue> v(r, 0);
      for (std::size_t t = 0; t < s; ++t)
        for (std::size_t c = 0; c < r; ++c) v[c] = f.add(v[c], f.mul(kernel(k, t), b(t, c)));
      part.append_row(v);
    }
    found += kernel.rows();
    parts.push_back(std::move(part));
  }
  if (found != s)
    throw CheckFailure("character_table", "class matrix combination is not diagonalisable over F_" +
                                              std::to_string(f.modulus()) + " (bad modulus?)");
  return parts;
}

unsigned lift_degree(Residue d_squared, std::uint32_t order, const PrimeField& f) {
  std::vector<unsigned> candidates;
  for (unsigned d = 1; static_cast<std::uint64_t>(d) * d <= order; ++d)
    if (f.mul(d, d) == d_squared) candidates.push_back(d);
  if (candidates.size() != 1)
    throw CheckFailure("character_table", "no unique degree lift for d^2 = " + std::to_string(d_squared) + " mod " +
                                              std::to_string(f.modulus()));
  return candidates.front();
}

IntMatrix raw_multiplicities(const CharacterTable& t) {
  const std::size_t n = t.size();
  IntMatrix m(n, std::vector<std::int64_t>(n, 0));
  const auto& f = t.field;
  const Residue inv_order = f.inv(f.reduce(t.group_order));
  for (std::size_t pi = 0; pi < n; ++pi) {
    for (std::size_t rho = 0; rho < n; ++rho) {
      Residue acc = 0;
      for (std::size_t j = 0; j < t.classes.count(); ++j) {
        Residue term = f.mul(f.reduce(static_cast<std::int64_t>(t.classes.sizes[j])), t.values[rho][j]);
        term = f.mul(term, t.tau[j]);
        term = f.mul(term, t.values[pi][t.classes.inverse_class[j]]);
        acc = f.add(acc, term);
      }
      m[pi][rho] = f.mul(acc, inv_order);
    }
  }
  return m;
}

// Reorders characters: trivial first, then by degree, then within each block
// of equal degree by the permutation giving the least multiplicity matrix.
void canonicalise(CharacterTable& t) {
  const std::size_t n = t.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if ((a == t.trivial) != (b == t.trivial)) return a == t.trivial;
    return t.degrees[a] < t.degrees[b];
  });
  auto permute = [&](const std::vector<std::size_t>& ord) {
    CharacterTable out = t;
    for (std::size_t i = 0; i < n; ++i) {
      out.degrees[i] = t.degrees[ord[i]];
      out.values[i] = t.values[ord[i]];
    }
    out.trivial = 0;
    return out;
  };
  t = permute(order);

  const IntMatrix m = raw_multiplicities(t);
  // Blocks of equal degree after the trivial character.
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t i = 1; i < n;) {
    std::size_t j = i;
    while (j < n && t.degrees[j] == t.degrees[i]) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }
  std::uint64_t combos = 1;
  for (auto [lo, hi] : blocks)
    for (std::size_t k = 2; k <= hi - lo; ++k) combos *= k;
  if (combos > 4'000'000) return;  // keep degree order only

  std::vector<std::size_t> best(n), current(n);
  std::iota(current.begin(), current.end(), std::size_t{0});
  best = current;
  std::vector<std::int64_t> best_key;
  auto key_of = [&](const std::vector<std::size_t>& perm) {
    std::vector<std::int64_t> key;
    key.reserve(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) key.push_back(m[perm[a]][perm[b]]);
    return key;
  };
  std::function<void(std::size_t)> recurse = [&](std::size_t block) {
    if (block == blocks.size()) {
      auto key = key_of(current);
      if (best_key.empty() || key < best_key) {
        best_key = std::move(key);
        best = current;
      }
      return;
    }
    auto [lo, hi] = blocks[block];
    std::sort(current.begin() + static_cast<std::ptrdiff_t>(lo), current.begin() + static_cast<std::ptrdiff_t>(hi));
    do {
      recurse(block + 1);
    } while (std::next_permutation(current.begin() + static_cast<std::ptrdiff_t>(lo),
                                   current.begin() + static_cast<std::ptrdiff_t>(hi)));
  };
  recurse(0);
  t = permute(best);
}

}  // namespace

CharacterTable character_table(const FiniteMatrixGroup& g, const ConjugacyClasses& classes, std::uint64_t seed) {
  const auto& f = g.field();
  const std::size_t r = classes.count();
  const std::uint32_t order = static_cast<std::uint32_t>(g.order());
  if ((f.modulus() - 1) % g.spec().exponent() != 0 || order % f.modulus() == 0)
    throw CheckFailure("character_table", "modulus " + std::to_string(f.modulus()) + " unsuitable for " +
                                              g.spec().label());

  CharacterTable t;
  t.field = f;
  t.classes = classes;
  t.group_order = order;
  t.seed = seed;

  const auto mats = class_matrices(g, classes);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Residue> coeff(0, f.modulus() - 1);

  std::vector<FpMatrix> spaces{FpMatrix::identity(r)};
  unsigned rounds = 0;
  auto all_split = [&] {
    return std::all_of(spaces.begin(), spaces.end(), [](const FpMatrix& s) { return s.rows() == 1; });
  };
  while (!all_split()) {
    if (++rounds > kSplittingBudget)
      throw CheckFailure("character_table", "eigenspace splitting did not finish within " +
                                                std::to_string(kSplittingBudget) + " rounds");
    FpMatrix combo(r, r);
    for (std::size_t j = 0; j < r; ++j) {
      const Residue c = coeff(rng);
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) combo(a, b) = f.add(combo(a, b), f.mul(c, mats[j](a, b)));
    }
    std::vector<FpMatrix> next;
    for (const auto& s : spaces) {
      if (s.rows() == 1) {
        next.push_back(s);
        continue;
      }
      for (auto& part : split_by(s, combo, f)) next.push_back(std::move(part));
    }
    spaces = std::move(next);
  }
  t.splitting_rounds = rounds;

  const std::size_t e = classes.identity_class;
  for (const auto& s : spaces) {
    std::vector<Residue> omega(s.row(0).begin(), s.row(0).end());
    if (omega[e] == 0) throw CheckFailure("character_table", "eigenvector vanishes at the identity class");
    const Residue scale = f.inv(omega[e]);
    for (auto& w : omega) w = f.mul(w, scale);
    Residue sum = 0;
    for (std::size_t j = 0; j < r; ++j) {
      const Residue term = f.mul(f.mul(omega[j], omega[classes.inverse_class[j]]),
                                 f.inv(f.reduce(static_cast<std::int64_t>(classes.sizes[j]))));
      sum = f.add(sum, term);
    }
    if (sum == 0) throw CheckFailure("character_table", "degenerate eigen-data (zero norm)");
    const unsigned d = lift_degree(f.mul(f.reduce(order), f.inv(sum)), order, f);
    std::vector<Residue> chi(r);
    for (std::size_t j = 0; j < r; ++j)
      chi[j] = f.mul(f.mul(f.reduce(d), omega[j]), f.inv(f.reduce(static_cast<std::int64_t>(classes.sizes[j]))));
    t.degrees.push_back(d);
    t.values.push_back(std::move(chi));
  }

  t.tau.resize(r);
  for (std::size_t j = 0; j < r; ++j) t.tau[j] = g.element(classes.representatives[j]).trace(f);

  bool found_trivial = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::all_of(t.values[i].begin(), t.values[i].end(), [](Residue v) { return v == 1; })) {
      t.trivial = i;
      found_trivial = true;
    }
  }
  if (!found_trivial) throw CheckFailure("character_table", "trivial character not found");

  canonicalise(t);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.values[i] == t.tau) t.defining = i;
  return t;
}

std::uint32_t inner_product(const CharacterTable& t, std::span<const Residue> class_function, std::size_t chi) {
  const auto& f = t.field;
  Residue acc = 0;
  for (std::size_t j = 0; j < t.classes.count(); ++j) {
    Residue term = f.mul(f.reduce(static_cast<std::int64_t>(t.classes.sizes[j])), class_function[j]);
    acc = f.add(acc, f.mul(term, t.values[chi][t.classes.inverse_class[j]]));
  }
  return f.mul(acc, f.inv(f.reduce(t.group_order)));
}

std::vector<unsigned> decompose(const CharacterTable& t, std::span<const Residue> class_function, unsigned bound,
                                const std::string& stage) {
  std::vector<unsigned> out(t.size());
  for (std::size_t chi = 0; chi < t.size(); ++chi) {
    const auto v = inner_product(t, class_function, chi);
    if (v > bound)
      throw CheckFailure(stage, "multiplicity lift " + std::to_string(v) + " exceeds bound " + std::to_string(bound) +
                                    " for character " + std::to_string(chi));
    out[chi] = v;
  }
  return out;
}

CheckList verify_table(const CharacterTable& t, const FiniteMatrixGroup& g) {
  const auto& f = t.field;
  CheckList checks;
  const std::size_t r = t.classes.count();
  checks.push_back({"character count equals class count", t.size() == r,
                    std::to_string(t.size()) + " characters, " + std::to_string(r) + " classes"});
  std::uint64_t sum_sq = 0;
  for (auto d : t.degrees) sum_sq += static_cast<std::uint64_t>(d) * d;
  checks.push_back({"sum of squared degrees equals |G|", sum_sq == t.group_order,
                    std::to_string(sum_sq) + " vs " + std::to_string(t.group_order)});
  checks.push_back({"trivial character has degree 1", t.degrees[t.trivial] == 1, ""});

  bool rows_ok = true;
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = 0; b < t.size(); ++b)
      rows_ok = rows_ok && inner_product(t, t.values[b], a) == (a == b ? 1u : 0u);
  checks.push_back({"row orthogonality mod p", rows_ok, ""});

  bool cols_ok = true;
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t k = 0; k < r; ++k) {
      Residue acc = 0;
      for (std::size_t chi = 0; chi < t.size(); ++chi)
        acc = f.add(acc, f.mul(t.values[chi][j], t.values[chi][t.classes.inverse_class[k]]));
      const Residue expected =
          j == k ? f.mul(f.reduce(t.group_order), f.inv(f.reduce(static_cast<std::int64_t>(t.classes.sizes[j])))) : 0;
      cols_ok = cols_ok && acc == expected;
    }
  }
  checks.push_back({"column orthogonality mod p", cols_ok, ""});

  bool degrees_match = true;
  for (std::size_t chi = 0; chi < t.size(); ++chi)
    degrees_match = degrees_match && t.values[chi][t.classes.identity_class] == f.reduce(t.degrees[chi]);
  checks.push_back({"character value at identity equals degree", degrees_match, ""});

  const bool abelian = t.size() == g.order();
  if (abelian) {
    checks.push_back({"defining representation splits (abelian group)", !t.defining.has_value(), ""});
  } else {
    const bool ok = t.defining.has_value() && t.degrees[*t.defining] == 2;
    checks.push_back({"defining character is irreducible of degree 2", ok, ""});
  }
  return checks;
}

TensorMultiplicities tensor_multiplicities(const CharacterTable& t) {
  TensorMultiplicities out{raw_multiplicities(t)};
  for (const auto& row : out.m)
    for (auto v : row)
      if (v > 2)
        throw CheckFailure("tensor_multiplicities", "multiplicity lift " + std::to_string(v) + " outside {0,1,2}");
  return out;
}

IntMatrix affine_diagram(const binpoly::GroupSpec& spec) {
  using binpoly::Family;
  auto graph = [](std::size_t n) { return IntMatrix(n, std::vector<std::int64_t>(n, 0)); };
  auto link = [](IntMatrix& g, std::size_t a, std::size_t b) {
    g[a][b] += 1;
    g[b][a] += 1;
  };
  // Star with the given arm lengths around vertex 0.
  auto star = [&](std::initializer_list<std::size_t> arms) {
    std::size_t n = 1;
    for (auto a : arms) n += a;
    IntMatrix g = graph(n);
    std::size_t next = 1;
    for (auto a : arms) {
      std::size_t prev = 0;
      for (std::size_t k = 0; k < a; ++k) {
        link(g, prev, next);
        prev = next++;
      }
    }
    return g;
  };
  switch (spec.family) {
    case Family::CyclicA: {
      IntMatrix g = graph(spec.n);
      for (std::size_t i = 0; i < spec.n; ++i) link(g, i, (i + 1) % spec.n);
      return g;
    }
    case Family::BinaryDihedralD: {
      // Affine D_{n+2}: a chain of n-1 vertices with two leaves at each end.
      const std::size_t chain = spec.n - 1;
      IntMatrix g = graph(spec.n + 3);
      for (std::size_t i = 0; i + 1 < chain; ++i) link(g, i, i + 1);
      link(g, 0, chain);
      link(g, 0, chain + 1);
      link(g, chain - 1, chain + 2);
      link(g, chain - 1, chain + 3);
      return g;
    }
    case Family::BinaryTetrahedralE6: return star({2, 2, 2});
    case Family::BinaryOctahedralE7: return star({3, 3, 1});
    case Family::BinaryIcosahedralE8: return star({5, 2, 1});
  }
  return {};
}

std::string affine_diagram_name(const binpoly::GroupSpec& spec) {
  using binpoly::Family;
  switch (spec.family) {
    case Family::CyclicA: return "affine A" + std::to_string(spec.n - 1);
    case Family::BinaryDihedralD: return "affine D" + std::to_string(spec.n + 2);
    case Family::BinaryTetrahedralE6: return "affine E6";
    case Family::BinaryOctahedralE7: return "affine E7";
    case Family::BinaryIcosahedralE8: return "affine E8";
  }
  return "?";
}

bool graphs_isomorphic(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.size();
  if (b.size() != n) return false;
  auto signature = [](const IntMatrix& g, std::size_t v) {
    std::vector<std::int64_t> s = g[v];
    std::sort(s.begin(), s.end());
    return s;
  };
  std::vector<std::vector<std::int64_t>> sa(n), sb(n);
  for (std::size_t v = 0; v < n; ++v) {
    sa[v] = signature(a, v);
    sb[v] = signature(b, v);
  }
  {
    auto x = sa, y = sb;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return false;
  }
  std::vector<std::size_t> image(n, n);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t v) {
    if (v == n) return true;
    for (std::size_t w = 0; w < n; ++w) {
      if (used[w] || sa[v] != sb[w] || a[v][v] != b[w][w]) continue;
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u) ok = a[v][u] == b[w][image[u]];
      if (!ok) continue;
      image[v] = w;
      used[w] = true;
      if (extend(v + 1)) return true;
      used[w] = false;
    }
    return false;
  };
  return extend(0);
}

McKayGraphData mckay_graph(const TensorMultiplicities& tm, const CharacterTable& t, const binpoly::GroupSpec& spec) {
  const auto& m = tm.m;
  const std::size_t n = m.size();
  McKayGraphData g;
  g.vertex_count = n;
  g.trivial = t.trivial;
  g.dims = t.degrees;
  auto require = [&](const std::string& name, bool ok, const std::string& detail = "") {
    g.checks.push_back({name, ok, detail});
    if (!ok) throw CheckFailure("mckay_graph", name + (detail.empty() ? "" : " (" + detail + ")"));
  };

  bool symmetric = true, zero_diag = true;
  for (std::size_t i = 0; i < n; ++i) {
    zero_diag = zero_diag && m[i][i] == 0;
    for (std::size_t j = 0; j < n; ++j) symmetric = symmetric && m[i][j] == m[j][i];
  }
  require("m symmetric", symmetric);
  if (t.group_order >= 3) require("m has zero diagonal", zero_diag);

  bool dims_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < n; ++j) s += m[i][j] * g.dims[j];
    dims_ok = dims_ok && s == 2 * static_cast<std::int64_t>(g.dims[i]);
  }
  require("sum_rho m[pi][rho] d_rho = 2 d_pi", dims_ok);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m[i][j] != 0) g.edges.push_back({i, j, static_cast<unsigned>(m[i][j])});

  g.affine_cartan.assign(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g.affine_cartan[i][j] = (i == j ? 2 : 0) - m[i][j];

  bool null_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < n; ++j) s += g.affine_cartan[i][j] * g.dims[j];
    null_ok = null_ok && s == 0;
  }
  require("affine Cartan annihilates the dimension vector", null_ok);

  g.affine_determinant = ffla::integer_determinant(g.affine_cartan);
  require("affine Cartan determinant is zero", g.affine_determinant == 0, "det = " + g.affine_determinant.str());

  std::vector<std::vector<ffla::Rational>> rows(n, std::vector<ffla::Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = g.affine_cartan[i][j];
  g.affine_kernel_dim = n - ffla::rank_over_q(rows);
  require("affine Cartan kernel is one-dimensional", g.affine_kernel_dim == 1,
          "kernel dim " + std::to_string(g.affine_kernel_dim));

  for (std::size_t i = 0; i < n; ++i)
    if (i != g.trivial) g.finite_vertices.push_back(i);
  const std::size_t k = g.finite_vertices.size();
  g.finite_cartan.assign(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) g.finite_cartan[a][b] = g.affine_cartan[g.finite_vertices[a]][g.finite_vertices[b]];
  bool positive = true;
  for (std::size_t s = 1; s <= k; ++s) {
    IntMatrix minor(s, std::vector<std::int64_t>(s));
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b) minor[a][b] = g.finite_cartan[a][b];
    g.leading_minors.push_back(ffla::integer_determinant(minor));
    positive = positive && g.leading_minors.back() > 0;
  }
  require("finite Cartan positive definite", positive);

  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : g.edges) {
    degree[e.a] += e.multiplicity;
    degree[e.b] += e.multiplicity;
  }
  const auto max_degree = n == 0 ? 0 : *std::max_element(degree.begin(), degree.end());
  const auto branch = std::count_if(degree.begin(), degree.end(), [](std::size_t d) { return d >= 3; });
  if (max_degree <= 2)
    g.shape = "cycle";
  else if (max_degree == 4 || branch == 2)
    g.shape = "D-shape";
  else
    g.shape = "E-shape";

  g.expected_diagram = affine_diagram_name(spec);
  require("graph isomorphic to " + g.expected_diagram, graphs_isomorphic(m, affine_diagram(spec)));
  return g;
}

std::string chartable_csv(const CharacterTable& t, const FiniteMatrixGroup& g) {
  std::ostringstream os;
  os << "# csv v1 p=" << t.field.modulus() << " seed=" << t.seed << " group=" << g.spec().label() << "\n";
  os << "class,class_size,representative_trace";
  for (std::size_t chi = 0; chi < t.size(); ++chi) os << ",chi" << chi << "_d" << t.degrees[chi];
  os << "\n";
  for (std::size_t j = 0; j < t.classes.count(); ++j) {
    os << j << "," << t.classes.sizes[j] << "," << t.tau[j];
    for (std::size_t chi = 0; chi < t.size(); ++chi) os << "," << t.values[chi][j];
    os << "\n";
  }
  return os.str();
}

std::string mckay_csv(const TensorMultiplicities& tm, const CharacterTable& t) {
  std::ostringstream os;
  os << "# csv v1 p=" << t.field.modulus() << " seed=" << t.seed << "\n";
  os << "irrep,degree";
  for (std::size_t j = 0; j < tm.m.size(); ++j) os << ",m" << j;
  os << "\n";
  for (std::size_t i = 0; i < tm.m.size(); ++i) {
    os << i << "," << t.degrees[i];
    for (auto v : tm.m[i]) os << "," << v;
    os << "\n";
  }
  return os.str();
}

}  // namespace mckay::chartab
