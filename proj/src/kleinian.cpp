#include "mckay/kleinian.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "mckay/errors.hpp"

namespace mckay::kleinian {

namespace {

using Vec = std::vector<Residue>;

constexpr unsigned kRandomBudget = 64;

// (alpha x + beta y) * p for p homogeneous of degree len-1.
Vec times_linear(const Vec& p, Residue alpha, Residue beta, const PrimeField& f) {
  Vec out(p.size() + 1, 0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k] = f.add(out[k], f.mul(alpha, p[k]));
    out[k + 1] = f.add(out[k + 1], f.mul(beta, p[k]));
  }
  return out;
}

// Reduce v against a fully reduced RREF (rows with pivots).
void reduce_by(Vec& v, const FpMatrix& rref_rows, const std::vector<std::size_t>& pivots, const PrimeField& f) {
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    const Residue c = v[pivots[r]];
    if (c == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f.sub(v[j], f.mul(c, rref_rows(r, j)));
  }
}

std::vector<std::size_t> pivots_of(const FpMatrix& rref_rows) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rref_rows.rows(); ++r) {
    std::size_t j = 0;
    while (j < rref_rows.cols() && rref_rows(r, j) == 0) ++j;
    out.push_back(j);
  }
  return out;
}

// Trace of g on a G-stable subspace given by a fully reduced echelon basis.
template <class Act>
Residue trace_on(const EchelonBasis& basis, Act&& act, const PrimeField& f) {
  Residue t = 0;
  for (std::size_t i = 0; i < basis.rank(); ++i) {
    const Vec image = act(basis.rows()[i]);
    t = f.add(t, image[basis.pivots()[i]]);
  }
  return t;
}

FpMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, const PrimeField& f) {
  std::uniform_int_distribution<Residue> d(0, f.modulus() - 1);
  FpMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

// Matrix of g on span(rows of basis) with column i the coordinates of g.b_i.
FpMatrix restricted_action(const CoinvariantQuotient& q, std::size_t g, const EchelonBasis& basis) {
  const std::size_t k = basis.rank();
  FpMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto coords = basis.coordinates(q.act(g, basis.rows()[i]));
    for (std::size_t t = 0; t < k; ++t) m(t, i) = coords[t];
  }
  return m;
}

EchelonBasis echelon_of(const FpMatrix& rows, const PrimeField& f) {
  EchelonBasis b(rows.cols(), f);
  for (std::size_t i = 0; i < rows.rows(); ++i) b.insert(Vec(rows.row(i).begin(), rows.row(i).end()));
  return b;
}

FpMatrix rows_of(const EchelonBasis& b) { return b.as_matrix(); }

std::vector<Residue> regular_character(const CharacterTable& t) {
  std::vector<Residue> out(t.classes.count(), 0);
  out[t.classes.identity_class] = t.field.reduce(t.group_order);
  return out;
}

std::string param_string(const ChartParameter& c) {
  return "(" + std::to_string(c.lambda) + ":" + std::to_string(c.mu) + ")";
}

std::string vec_string(const std::vector<unsigned>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

}  // namespace

std::string HomogeneousPoly::to_string(const PrimeField& f) const {
  std::string out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    const std::int64_t c = f.lift_symmetric(coeffs[i]);
    const unsigned ex = degree - static_cast<unsigned>(i), ey = static_cast<unsigned>(i);
    std::string mono;
    auto factor = [&](const char* var, unsigned e) {
      if (e == 0) return;
      if (!mono.empty()) mono += "*";
      mono += var;
      if (e > 1) mono += "^" + std::to_string(e);
    };
    factor("x", ex);
    factor("y", ey);
    std::string term;
    const std::int64_t mag = c < 0 ? -c : c;
    if (mono.empty())
      term = std::to_string(mag);
    else if (mag == 1)
      term = mono;
    else
      term = std::to_string(mag) + "*" + mono;
    if (out.empty())
      out = (c < 0 ? "-" : "") + term;
    else
      out += (c < 0 ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

EquivariantPolyAlgebra::EquivariantPolyAlgebra(const FiniteMatrixGroup& group, unsigned degree_cap)
    : group_(&group), cap_(degree_cap) {}

const FpMatrix& EquivariantPolyAlgebra::action(std::size_t element, unsigned degree) const {
  if (degree > cap_) throw std::out_of_range("degree above the algebra's cap");
  const auto& f = field();
  while (cache_.size() <= degree) {
    const unsigned d = static_cast<unsigned>(cache_.size());
    std::vector<FpMatrix> level;
    level.reserve(group_->order());
    for (std::size_t g = 0; g < group_->order(); ++g) {
      const auto& inv = group_->element(group_->inverse(g)).m;
      FpMatrix m(d + 1, d + 1);
      if (d == 0) {
        m(0, 0) = 1;
      } else {
        const auto& prev = cache_[d - 1][g];
        for (unsigned j = 0; j <= d; ++j) {
          // x^(d-j) y^j = x * (previous monomial j) for j < d, y * (monomial d-1) for j = d.
          const unsigned src = j < d ? j : d - 1;
          Vec column(d, 0);
          for (unsigned k = 0; k < d; ++k) column[k] = prev(k, src);
          const Vec image = j < d ? times_linear(column, inv[0], inv[1], f) : times_linear(column, inv[2], inv[3], f);
          for (unsigned k = 0; k <= d; ++k) m(k, j) = image[k];
        }
      }
      level.push_back(std::move(m));
    }
    cache_.push_back(std::move(level));
  }
  return cache_[degree][element];
}

InvariantIdealN invariant_ideal(const EquivariantPolyAlgebra& alg) {
  const auto& g = alg.group();
  const auto& f = alg.field();
  if (alg.degree_cap() < 2 * g.order())
    throw ConfigError("degree cap " + std::to_string(alg.degree_cap()) + " is below 2|G| = " +
                      std::to_string(2 * g.order()));
  InvariantIdealN n;
  n.spans.emplace_back(0, 1);  // n_0 = 0
  for (unsigned d = 1; d <= alg.degree_cap(); ++d) {
    EchelonBasis span(d + 1, f);
    const auto& prev = n.spans[d - 1];
    for (std::size_t r = 0; r < prev.rows(); ++r) {
      Vec v(prev.row(r).begin(), prev.row(r).end());
      Vec vx(d + 1, 0), vy(d + 1, 0);
      for (unsigned k = 0; k < d; ++k) {
        vx[k] = v[k];
        vy[k + 1] = v[k];
      }
      span.insert(std::move(vx));
      span.insert(std::move(vy));
    }
    // Reynolds projector image.
    FpMatrix reynolds(d + 1, d + 1);
    for (std::size_t e = 0; e < g.order(); ++e) {
      const auto& a = alg.action(e, d);
      for (unsigned i = 0; i <= d; ++i)
        for (unsigned j = 0; j <= d; ++j) reynolds(i, j) = f.add(reynolds(i, j), a(i, j));
    }
    const auto invariants = ffla::rref(reynolds.transpose(), f);
    for (std::size_t r = 0; r < invariants.rank; ++r) {
      Vec v(invariants.form.row(r).begin(), invariants.form.row(r).end());
      if (span.insert(v)) n.generators.push_back({d, std::move(v)});
    }
    n.spans.push_back(span.as_matrix());
    if (span.rank() == d + 1) {
      n.saturation_degree = d;
      return n;
    }
  }
  throw CheckFailure("invariant_ideal", "n does not contain all monomials of any degree <= " +
                                            std::to_string(alg.degree_cap()) + "; raise the degree cap");
}

CoinvariantQuotient::CoinvariantQuotient(const EquivariantPolyAlgebra& alg, const InvariantIdealN& n)
    : group_(&alg.group()) {
  const auto& f = alg.field();
  const unsigned top = n.saturation_degree - 1;
  std::vector<std::vector<std::size_t>> pivots(top + 2);
  for (unsigned d = 0; d <= top; ++d) {
    pivots[d] = pivots_of(n.spans[d]);
    std::vector<std::size_t> standard;
    for (std::size_t j = 0; j <= d; ++j)
      if (std::find(pivots[d].begin(), pivots[d].end(), j) == pivots[d].end()) standard.push_back(j);
    offsets_.push_back(dim_);
    dim_ += standard.size();
    monomials_.push_back(std::move(standard));
  }
  // Reduce a degree-d polynomial to coordinates on the standard monomials.
  auto coords = [&](Vec v, unsigned d) {
    Vec out(monomials_[d].size(), 0);
    reduce_by(v, n.spans[d], pivots[d], f);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = v[monomials_[d][k]];
    return out;
  };

  x_ = FpMatrix(dim_, dim_);
  y_ = FpMatrix(dim_, dim_);
  for (unsigned d = 0; d < top; ++d) {
    for (std::size_t k = 0; k < monomials_[d].size(); ++k) {
      const std::size_t j = monomials_[d][k];
      Vec ex(d + 2, 0), ey(d + 2, 0);
      ex[j] = 1;
      ey[j + 1] = 1;
      const auto cx = coords(ex, d + 1), cy = coords(ey, d + 1);
      for (std::size_t t = 0; t < cx.size(); ++t) {
        x_(offsets_[d + 1] + t, offsets_[d] + k) = cx[t];
        y_(offsets_[d + 1] + t, offsets_[d] + k) = cy[t];
      }
    }
  }

  blocks_.resize(group_->order());
  for (std::size_t e = 0; e < group_->order(); ++e) {
    for (unsigned d = 0; d <= top; ++d) {
      const auto& a = alg.action(e, d);
      FpMatrix block(monomials_[d].size(), monomials_[d].size());
      for (std::size_t k = 0; k < monomials_[d].size(); ++k) {
        Vec col(d + 1);
        for (unsigned i = 0; i <= d; ++i) col[i] = a(i, monomials_[d][k]);
        const auto c = coords(std::move(col), d);
        for (std::size_t t = 0; t < c.size(); ++t) block(t, k) = c[t];
      }
      blocks_[e].push_back(std::move(block));
    }
  }
}

unsigned CoinvariantQuotient::degree_of(std::size_t index) const {
  unsigned d = 0;
  while (d + 1 < offsets_.size() && offsets_[d + 1] <= index) ++d;
  return d;
}

std::vector<Residue> CoinvariantQuotient::act(std::size_t element, std::span<const Residue> v) const {
  const auto& f = field();
  Vec out(dim_, 0);
  for (unsigned d = 0; d < offsets_.size(); ++d) {
    const auto& b = blocks_[element][d];
    const std::size_t o = offsets_[d];
    for (std::size_t k = 0; k < b.cols(); ++k) {
      const Residue c = v[o + k];
      if (c == 0) continue;
      for (std::size_t t = 0; t < b.rows(); ++t) out[o + t] = f.add(out[o + t], f.mul(c, b(t, k)));
    }
  }
  return out;
}

std::vector<Residue> CoinvariantQuotient::character() const {
  const auto& f = field();
  const auto cc = binpoly::conjugacy_classes(*group_);
  std::vector<Residue> out(cc.count(), 0);
  for (std::size_t j = 0; j < cc.count(); ++j) {
    for (const auto& b : blocks_[cc.representatives[j]])
      for (std::size_t k = 0; k < b.rows(); ++k) out[j] = f.add(out[j], b(k, k));
  }
  return out;
}

std::vector<HomogeneousPoly> CoinvariantQuotient::as_polynomials(std::span<const Residue> v) const {
  std::vector<HomogeneousPoly> out;
  for (unsigned d = 0; d < offsets_.size(); ++d) {
    HomogeneousPoly p{d, Vec(d + 1, 0)};
    bool any = false;
    for (std::size_t k = 0; k < monomials_[d].size(); ++k) {
      p.coeffs[monomials_[d][k]] = v[offsets_[d] + k];
      any = any || v[offsets_[d] + k] != 0;
    }
    if (any) out.push_back(std::move(p));
  }
  return out;
}

const IsotypicPair& IsotypicDecomposition::pair(std::size_t pi) const {
  for (const auto& p : pairs)
    if (p.pi == pi) return p;
  throw std::out_of_range("no isotypic pair for irreducible " + std::to_string(pi));
}

IsotypicDecomposition isotypic_pairs(const EquivariantPolyAlgebra& alg, const InvariantIdealN& n,
                                     const CharacterTable& t, std::uint64_t seed) {
  const auto& g = alg.group();
  const auto& f = alg.field();
  if (g.spec() == binpoly::GroupSpec::cyclic(2))
    throw ConfigError("CyclicA(2) is excluded: its McKay graph has a multiple edge");
  IsotypicDecomposition out;
  auto q = std::make_shared<CoinvariantQuotient>(alg, n);
  out.quotient = q;
  out.table = &t;
  std::mt19937_64 rng(seed);

  const auto& cc = t.classes;
  const std::size_t dim = q->dim();
  out.checks.push_back({"dim A/n = 2|G| - 1", dim == 2 * g.order() - 1,
                        std::to_string(dim) + " vs " + std::to_string(2 * g.order() - 1)});

  for (std::size_t pi = 0; pi < t.size(); ++pi) {
    const unsigned dpi = t.degrees[pi];
    // Isotypic image per degree block of m/n.
    std::vector<EchelonBasis> iso;
    std::vector<unsigned> copy_degrees;
    for (unsigned d = 0; d <= q->top_degree(); ++d) {
      const std::size_t k = q->block_dim(d);
      FpMatrix proj(k, k);
      for (std::size_t e = 0; e < g.order(); ++e) {
        const Residue c = t.values[pi][cc.class_of[g.inverse(e)]];
        if (c == 0) continue;
        const auto& b = q->group_block(e, d);
        for (std::size_t r = 0; r < k; ++r)
          for (std::size_t s = 0; s < k; ++s) proj(r, s) = f.add(proj(r, s), f.mul(c, b(r, s)));
      }
      // Column space, embedded in A/n.
      EchelonBasis img(dim, f);
      for (std::size_t s = 0; s < k; ++s) {
        Vec v(dim, 0);
        for (std::size_t r = 0; r < k; ++r) v[q->offset(d) + r] = proj(r, s);
        img.insert(std::move(v));
      }
      if (img.rank() % dpi != 0)
        throw CheckFailure("isotypic_pairs", "isotypic rank " + std::to_string(img.rank()) + " in degree " +
                                                 std::to_string(d) + " not a multiple of dim " + std::to_string(dpi));
      if (d > 0)
        for (std::size_t c = 0; c < img.rank() / dpi; ++c) copy_degrees.push_back(d);
      iso.push_back(std::move(img));
    }
    if (pi == t.trivial) {
      out.checks.push_back({"trivial character absent from m/n", copy_degrees.empty(),
                            std::to_string(copy_degrees.size()) + " copies"});
      continue;
    }
    const bool count_ok = copy_degrees.size() == 2 * dpi;
    out.checks.push_back({"irreducible " + std::to_string(pi) + " occurs 2 dim(pi) times in m/n", count_ok,
                          std::to_string(copy_degrees.size()) + " copies in degrees " + vec_string(copy_degrees)});
    if (!count_ok)
      throw CheckFailure("isotypic_pairs", "irreducible " + std::to_string(pi) + " occurs " +
                                               std::to_string(copy_degrees.size()) + " times in m/n, expected " +
                                               std::to_string(2 * dpi) + "; raise the degree cap or check the table");

    IsotypicPair pair;
    pair.pi = pi;
    pair.dim = dpi;
    pair.copy_degrees = copy_degrees;
    pair.degree_prime = copy_degrees[dpi - 1];
    pair.degree_second = copy_degrees[dpi];
    auto copies_in = [&](unsigned d) { return iso[d].rank() / dpi; };
    EchelonBasis prime(dim, f), second(dim, f);
    if (pair.degree_prime != pair.degree_second) {
      if (copies_in(pair.degree_prime) != 1 || copies_in(pair.degree_second) != 1)
        throw CheckFailure("isotypic_pairs", "middle copies of irreducible " + std::to_string(pi) +
                                                 " share their degrees with other copies");
      prime = iso[pair.degree_prime];
      second = iso[pair.degree_second];
    } else {
      const auto& both = iso[pair.degree_prime];
      if (copies_in(pair.degree_prime) != 2)
        throw CheckFailure("isotypic_pairs", "middle degree of irreducible " + std::to_string(pi) + " holds " +
                                                 std::to_string(copies_in(pair.degree_prime)) + " copies, expected 2");
      // Split with a G-endomorphism having two distinct eigenvalues.
      std::vector<FpMatrix> rep(g.order());
      for (std::size_t e = 0; e < g.order(); ++e) rep[e] = restricted_action(*q, e, both);
      bool split = false;
      for (unsigned attempt = 0; attempt < kRandomBudget && !split; ++attempt) {
        const auto x = random_matrix(2 * dpi, 2 * dpi, rng, f);
        FpMatrix endo(2 * dpi, 2 * dpi);
        for (std::size_t e = 0; e < g.order(); ++e) {
          const auto term = ffla::multiply(ffla::multiply(rep[e], x, f), rep[g.inverse(e)], f);
          for (std::size_t i = 0; i < 2 * dpi; ++i)
            for (std::size_t j = 0; j < 2 * dpi; ++j) endo(i, j) = f.add(endo(i, j), term(i, j));
        }
        std::vector<FpMatrix> eigenspaces;
        for (Residue lambda = 0; lambda < f.modulus(); ++lambda) {
          FpMatrix shifted = endo;
          for (std::size_t i = 0; i < 2 * dpi; ++i) shifted(i, i) = f.sub(shifted(i, i), lambda);
          auto kernel = ffla::nullspace(shifted, f);
          if (kernel.rows() > 0) eigenspaces.push_back(std::move(kernel));
        }
        if (eigenspaces.size() != 2 || eigenspaces[0].rows() != dpi || eigenspaces[1].rows() != dpi) continue;
        const auto b = both.as_matrix();
        for (int which = 0; which < 2; ++which) {
          auto& target = which == 0 ? prime : second;
          const auto& ker = eigenspaces[static_cast<std::size_t>(which)];
          for (std::size_t r = 0; r < ker.rows(); ++r) {
            Vec v(dim, 0);
            for (std::size_t s = 0; s < ker.cols(); ++s)
              for (std::size_t c = 0; c < dim; ++c) v[c] = f.add(v[c], f.mul(ker(r, s), b(s, c)));
            target.insert(std::move(v));
          }
        }
        split = true;
      }
      if (!split)
        throw CheckFailure("isotypic_pairs", "could not split the two copies of irreducible " + std::to_string(pi));
    }
    pair.basis_prime = rows_of(prime);
    pair.basis_second = rows_of(second);

    // G-isomorphism T: pi' -> pi'' by averaging a random map.
    std::vector<FpMatrix> rp(g.order()), rs(g.order());
    for (std::size_t e = 0; e < g.order(); ++e) {
      rp[e] = restricted_action(*q, e, prime);
      rs[e] = restricted_action(*q, e, second);
    }
    bool found = false;
    for (unsigned attempt = 0; attempt < kRandomBudget && !found; ++attempt) {
      const auto x = random_matrix(dpi, dpi, rng, f);
      FpMatrix iso_map(dpi, dpi);
      for (std::size_t e = 0; e < g.order(); ++e) {
        const auto term = ffla::multiply(ffla::multiply(rs[e], x, f), rp[g.inverse(e)], f);
        for (std::size_t i = 0; i < dpi; ++i)
          for (std::size_t j = 0; j < dpi; ++j) iso_map(i, j) = f.add(iso_map(i, j), term(i, j));
      }
      if (ffla::determinant(iso_map, f) == 0) continue;
      pair.iso = std::move(iso_map);
      found = true;
    }
    if (!found) throw CheckFailure("isotypic_pairs", "no G-isomorphism pi' -> pi'' found for " + std::to_string(pi));

    for (std::size_t r = 0; r < dpi; ++r) {
      pair.representatives_prime.push_back(q->as_polynomials(pair.basis_prime.row(r)));
      pair.representatives_second.push_back(q->as_polynomials(pair.basis_second.row(r)));
    }
    // Character of each copy.
    Vec chi_prime(cc.count()), chi_second(cc.count());
    for (std::size_t j = 0; j < cc.count(); ++j) {
      const auto e = cc.representatives[j];
      const auto ap = rp[e], as = rs[e];
      Residue tp = 0, ts = 0;
      for (std::size_t i = 0; i < dpi; ++i) {
        tp = f.add(tp, ap(i, i));
        ts = f.add(ts, as(i, i));
      }
      chi_prime[j] = tp;
      chi_second[j] = ts;
    }
    out.checks.push_back({"pi' and pi'' carry the character of " + std::to_string(pi),
                          chi_prime == t.values[pi] && chi_second == t.values[pi],
                          "degrees " + std::to_string(pair.degree_prime) + ", " + std::to_string(pair.degree_second)});
    EchelonBasis sum = prime;
    for (const auto& row : second.rows()) sum.insert(row);
    out.checks.push_back({"pi' != pi''", sum.rank() == 2 * dpi, ""});
    out.pairs.push_back(std::move(pair));
  }
  if (!all_pass(out.checks)) {
    for (const auto& c : out.checks)
      if (!c.pass) throw CheckFailure("isotypic_pairs", c.name + " (" + c.detail + ")");
  }
  return out;
}

namespace {

FpMatrix graph_vectors(const IsotypicPair& pair, ChartParameter c, const PrimeField& f) {
  const std::size_t dpi = pair.dim;
  const std::size_t n = pair.basis_prime.cols();
  FpMatrix w(dpi, n);
  for (std::size_t i = 0; i < dpi; ++i) {
    for (std::size_t col = 0; col < n; ++col) {
      Residue v = f.mul(c.lambda, pair.basis_prime(i, col));
      for (std::size_t k = 0; k < dpi; ++k)
        v = f.add(v, f.mul(f.mul(c.mu, pair.iso(k, i)), pair.basis_second(k, col)));
      w(i, col) = v;
    }
  }
  return w;
}

// A/n-submodule generated by the rows of w; multiplication rounds continue
// until the span is unchanged for two consecutive rounds.
PointIdeal close_ideal(const IsotypicDecomposition& d, FpMatrix w) {
  const auto& q = *d.quotient;
  const auto& f = q.field();
  const auto& t = *d.table;
  PointIdeal out;
  auto span = std::make_shared<EchelonBasis>(q.dim(), f);
  std::vector<Vec> frontier;
  for (std::size_t r = 0; r < w.rows(); ++r) {
    Vec v(w.row(r).begin(), w.row(r).end());
    if (span->insert(v)) frontier.push_back(std::move(v));
  }
  unsigned stable = 0;
  unsigned rounds = 0;
  while (stable < 2) {
    if (++rounds > 2 * q.top_degree() + 4)
      throw CheckFailure("point_ideal", "quotient did not stabilise within the working-degree cap");
    std::vector<Vec> next;
    for (const auto& v : frontier) {
      for (const auto* m : {&q.x(), &q.y()}) {
        Vec image = ffla::apply(*m, v, f);
        if (span->insert(image)) next.push_back(std::move(image));
      }
    }
    stable = next.empty() ? stable + 1 : 0;
    frontier = std::move(next);
  }
  out.generators = std::move(w);
  out.working_degree = rounds;
  out.colength = q.dim() - span->rank();

  const auto qchar = q.character();
  out.quotient_character.resize(t.classes.count());
  for (std::size_t j = 0; j < t.classes.count(); ++j) {
    const auto e = t.classes.representatives[j];
    const Residue sub = trace_on(*span, [&](const Vec& v) { return q.act(e, v); }, f);
    out.quotient_character[j] = f.sub(qchar[j], sub);
  }
  out.regular = out.quotient_character == regular_character(t);
  out.span = std::move(span);
  return out;
}

}  // namespace

PointIdeal point_ideal(const IsotypicDecomposition& d, std::size_t pi, ChartParameter param) {
  if (param.lambda == 0 && param.mu == 0) throw ConfigError("chart parameter (0:0) is not a point of P^1");
  const auto& f = d.quotient->field();
  auto out = close_ideal(d, graph_vectors(d.pair(pi), param, f));
  out.pi = pi;
  out.parameter = param;
  return out;
}

PointIdeal intersection_ideal(const IsotypicDecomposition& d, std::size_t pi, ChartParameter s, std::size_t rho,
                              ChartParameter t) {
  const auto& f = d.quotient->field();
  auto a = graph_vectors(d.pair(pi), s, f);
  const auto b = graph_vectors(d.pair(rho), t, f);
  for (std::size_t r = 0; r < b.rows(); ++r) a.append_row(b.row(r));
  auto out = close_ideal(d, std::move(a));
  out.pi = pi;
  out.parameter = s;
  out.rho = rho;
  out.rho_parameter = t;
  return out;
}

TorTriple koszul_tor(const IsotypicDecomposition& d, const PointIdeal& ideal) {
  const auto& q = *d.quotient;
  const auto& f = q.field();
  const auto& t = *d.table;
  const auto& g = q.group();
  if (ideal.colength != g.order())
    throw CheckFailure("koszul_tor", "ideal has colength " + std::to_string(ideal.colength) + ", expected " +
                                         std::to_string(g.order()));
  const auto& span = *ideal.span;
  const auto standard = span.non_pivots();
  const std::size_t n = standard.size();
  // Coordinates in O = (A/n)/(I/n) on the standard complement.
  auto to_o = [&](Vec v) {
    span.reduce(v);
    Vec out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = v[standard[k]];
    return out;
  };
  auto lift = [&](std::size_t k) {
    Vec v(q.dim(), 0);
    v[standard[k]] = 1;
    return v;
  };
  FpMatrix xo(n, n), yo(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto cx = to_o(ffla::apply(q.x(), lift(k), f));
    const auto cy = to_o(ffla::apply(q.y(), lift(k), f));
    for (std::size_t r = 0; r < n; ++r) {
      xo(r, k) = cx[r];
      yo(r, k) = cy[r];
    }
  }
  auto group_on_o = [&](std::size_t e) {
    FpMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto c = to_o(q.act(e, lift(k)));
      for (std::size_t r = 0; r < n; ++r) m(r, k) = c[r];
    }
    return m;
  };

  // d2: O -> O+O, v -> (y v, -x v); d1: O+O -> O, (v, w) -> x v + y w.
  FpMatrix d2(2 * n, n), d1(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      d2(r, c) = yo(r, c);
      d2(n + r, c) = f.neg(xo(r, c));
      d1(r, c) = xo(r, c);
      d1(r, n + c) = yo(r, c);
    }
  }
  TorTriple out;
  out.differential_square_zero = ffla::multiply(d1, d2, f).is_zero();

  const auto ker2 = echelon_of(ffla::nullspace(d2, f), f);
  const auto ker1 = echelon_of(ffla::nullspace(d1, f), f);
  const auto im2 = echelon_of(d2.transpose(), f);
  const auto im1 = echelon_of(d1.transpose(), f);
  out.dims = {n - im1.rank(), ker1.rank() - im2.rank(), ker2.rank()};

  const auto& cc = t.classes;
  for (auto& ch : out.characters) ch.assign(cc.count(), 0);
  for (std::size_t j = 0; j < cc.count(); ++j) {
    const auto e = cc.representatives[j];
    const auto go = group_on_o(e);
    const auto& inv = g.element(g.inverse(e)).m;
    auto act_o = [&](const Vec& v) { return ffla::apply(go, v, f); };
    // Middle term O (x) tau: g.(v, w) = (a gv + c gw, b gv + d gw) with g^-1 = [[a, b], [c, d]].
    auto act_mid = [&](const Vec& vw) {
      const Vec gv = ffla::apply(go, std::span<const Residue>(vw.data(), n), f);
      const Vec gw = ffla::apply(go, std::span<const Residue>(vw.data() + n, n), f);
      Vec r(2 * n);
      for (std::size_t k = 0; k < n; ++k) {
        r[k] = f.add(f.mul(inv[0], gv[k]), f.mul(inv[2], gw[k]));
        r[n + k] = f.add(f.mul(inv[1], gv[k]), f.mul(inv[3], gw[k]));
      }
      return r;
    };
    Residue trace_o = 0;
    for (std::size_t k = 0; k < n; ++k) trace_o = f.add(trace_o, go(k, k));
    out.characters[0][j] = f.sub(trace_o, trace_on(im1, act_o, f));
    out.characters[1][j] = f.sub(trace_on(ker1, act_mid, f), trace_on(im2, act_mid, f));
    out.characters[2][j] = trace_on(ker2, act_o, f);
  }
  bool euler = true;
  for (std::size_t j = 0; j < cc.count(); ++j)
    euler = euler && f.add(f.sub(out.characters[0][j], out.characters[1][j]), out.characters[2][j]) == 0;
  out.euler_characteristic_zero = euler;
  for (std::size_t i = 0; i < 3; ++i)
    out.multiplicities[i] =
        chartab::decompose(t, out.characters[i], static_cast<unsigned>(out.dims[i]), "koszul_tor");
  return out;
}

namespace {

std::vector<unsigned> unit(std::size_t size, std::initializer_list<std::size_t> ones) {
  std::vector<unsigned> v(size, 0);
  for (auto i : ones) v[i] += 1;
  return v;
}

// Compares a Tor triple with the pattern for a point lying on the curves
// indexed by `curves`.
CheckList pattern_checks(const TorTriple& tor, const CharacterTable& t, const std::vector<std::size_t>& curves) {
  CheckList c;
  const std::size_t r = t.size();
  std::size_t dsum = 0;
  for (auto pi : curves) dsum += t.degrees[pi];
  c.push_back({"Tor dims (1, 1 + dim, dim)", tor.dims == std::array<std::size_t, 3>{1, 1 + dsum, dsum},
               "(" + std::to_string(tor.dims[0]) + "," + std::to_string(tor.dims[1]) + "," +
                   std::to_string(tor.dims[2]) + ")"});
  auto tor1 = unit(r, {t.trivial});
  auto tor2 = std::vector<unsigned>(r, 0);
  for (auto pi : curves) {
    tor1[pi] += 1;
    tor2[pi] += 1;
  }
  c.push_back({"Tor0 = trivial", tor.multiplicities[0] == unit(r, {t.trivial}), vec_string(tor.multiplicities[0])});
  c.push_back({"Tor1 = trivial + curves", tor.multiplicities[1] == tor1, vec_string(tor.multiplicities[1])});
  c.push_back({"Tor2 = curves", tor.multiplicities[2] == tor2, vec_string(tor.multiplicities[2])});
  c.push_back({"Tor2 has no invariants", tor.multiplicities[2][t.trivial] == 0, ""});
  c.push_back({"alternating character sum vanishes", tor.euler_characteristic_zero, ""});
  c.push_back({"d1 d2 = 0", tor.differential_square_zero, ""});
  return c;
}

TorSample make_sample(const IsotypicDecomposition& d, PointIdeal ideal, const std::string& kind, bool asserted,
                      const std::vector<std::size_t>& curves) {
  const auto& t = *d.table;
  TorSample s{kind, std::move(ideal), std::nullopt, {}, asserted};
  s.checks.push_back({"colength |G|", s.ideal.colength == t.group_order, std::to_string(s.ideal.colength)});
  s.checks.push_back({"regular character", s.ideal.regular, ""});
  if (s.ideal.colength == t.group_order) {
    s.tor = koszul_tor(d, s.ideal);
    for (auto& c : pattern_checks(*s.tor, t, curves)) s.checks.push_back(std::move(c));
  }
  return s;
}

}  // namespace

std::uint32_t tor_modulus(const binpoly::GroupSpec& spec, std::uint32_t base, unsigned samples, unsigned neighbours) {
  std::uint32_t p = base;
  while (!binpoly::is_admissible_modulus(spec, p) || p - 1 < samples + neighbours)
    p = binpoly::choose_modulus(spec, p).modulus();
  return p;
}

TorSuite tor_suite(const IsotypicDecomposition& d, const chartab::McKayGraphData& graph, const TorSuiteOptions& opts) {
  const auto& t = *d.table;
  const auto& f = t.field;
  const std::size_t order = t.group_order;
  TorSuite suite;
  std::map<std::size_t, std::vector<ChartParameter>> degenerate;

  for (const auto& pair : d.pairs) {
    const std::size_t pi = pair.pi;
    if (opts.boundary) {
      for (auto c : {ChartParameter{1, 0}, ChartParameter{0, 1}}) {
        auto s = make_sample(d, point_ideal(d, pi, c), "boundary", false, {pi});
        if (!s.ideal.valid(order)) degenerate[pi].push_back(c);
        suite.samples.push_back(std::move(s));
      }
    }
    unsigned generic = 0;
    for (Residue mu = 1; mu < f.modulus() && generic < opts.generic_samples; ++mu) {
      auto ideal = point_ideal(d, pi, {1, mu});
      if (!ideal.valid(order)) {
        degenerate[pi].push_back({1, mu});
        suite.samples.push_back(make_sample(d, std::move(ideal), "degenerate", false, {pi}));
        continue;
      }
      auto s = make_sample(d, std::move(ideal), "generic", true, {pi});
      ++generic;
      suite.samples.push_back(std::move(s));
    }
    suite.checks.push_back({"irreducible " + std::to_string(pi) + ": " + std::to_string(opts.generic_samples) +
                                " generic samples",
                            generic >= opts.generic_samples, std::to_string(generic) + " found"});
  }

  if (opts.intersections) {
    // Complete the degenerate scan over the whole chart before pairing.
    for (const auto& pair : d.pairs) {
      auto& list = degenerate[pair.pi];
      for (Residue mu = 1; mu < f.modulus(); ++mu) {
        const ChartParameter c{1, mu};
        if (std::find(list.begin(), list.end(), c) != list.end()) continue;
        bool sampled = false;
        for (const auto& s : suite.samples)
          sampled = sampled || (s.ideal.pi == pair.pi && !s.ideal.rho && s.ideal.parameter == c);
        if (sampled) continue;
        if (!point_ideal(d, pair.pi, c).valid(order)) list.push_back(c);
      }
      if (!opts.boundary)
        for (auto c : {ChartParameter{1, 0}, ChartParameter{0, 1}})
          if (!point_ideal(d, pair.pi, c).valid(order)) list.push_back(c);
    }
    for (const auto& e : graph.edges) {
      if (e.a == t.trivial || e.b == t.trivial) continue;
      std::optional<TorSample> found;
      for (const auto& s : degenerate[e.a]) {
        for (const auto& u : degenerate[e.b]) {
          auto ideal = intersection_ideal(d, e.a, s, e.b, u);
          if (!ideal.valid(order)) continue;
          found = make_sample(d, std::move(ideal), "intersection", true, {e.a, e.b});
          break;
        }
        if (found) break;
      }
      const std::string name = "intersection ideal for edge " + std::to_string(e.a) + "-" + std::to_string(e.b);
      suite.checks.push_back({name + " found", found.has_value(), ""});
      if (found) suite.samples.push_back(std::move(*found));
    }
  }

  for (const auto& s : suite.samples) {
    if (!s.asserted) continue;
    const std::string where = "irreducible " + std::to_string(s.ideal.pi) +
                              (s.ideal.rho ? "+" + std::to_string(*s.ideal.rho) : "") + " at " +
                              param_string(s.ideal.parameter);
    for (const auto& c : s.checks) suite.checks.push_back({where + ": " + c.name, c.pass, c.detail});
  }
  return suite;
}

nlohmann::ordered_json tor_row(const TorSample& s, const std::string& family) {
  nlohmann::ordered_json row;
  row["family"] = family;
  row["kind"] = s.kind;
  row["pi"] = s.ideal.pi;
  row["rho"] = s.ideal.rho ? nlohmann::ordered_json(*s.ideal.rho) : nlohmann::ordered_json(nullptr);
  row["lambda_mu"] = {s.ideal.parameter.lambda, s.ideal.parameter.mu};
  if (s.ideal.rho_parameter)
    row["rho_lambda_mu"] = {s.ideal.rho_parameter->lambda, s.ideal.rho_parameter->mu};
  row["colength"] = s.ideal.colength;
  row["working_degree"] = s.ideal.working_degree;
  row["asserted"] = s.asserted;
  if (s.tor) {
    row["dims"] = {s.tor->dims[0], s.tor->dims[1], s.tor->dims[2]};
    row["multiplicities"] = {{"tor0", s.tor->multiplicities[0]},
                             {"tor1", s.tor->multiplicities[1]},
                             {"tor2", s.tor->multiplicities[2]}};
  } else {
    row["dims"] = nullptr;
    row["multiplicities"] = nullptr;
  }
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : s.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  row["checks"] = std::move(checks);
  return row;
}

std::string tor_csv(const TorSuite& suite, const std::string& family) {
  std::ostringstream os;
  os << "# csv v1\n";
  os << "family,kind,pi,rho,lambda,mu,colength,tor0_dim,tor1_dim,tor2_dim,tor0,tor1,tor2,asserted,pass\n";
  auto mult = [](const std::vector<unsigned>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
  };
  for (const auto& s : suite.samples) {
    os << family << "," << s.kind << "," << s.ideal.pi << "," << (s.ideal.rho ? std::to_string(*s.ideal.rho) : "")
       << "," << s.ideal.parameter.lambda << "," << s.ideal.parameter.mu << "," << s.ideal.colength;
    if (s.tor)
      os << "," << s.tor->dims[0] << "," << s.tor->dims[1] << "," << s.tor->dims[2] << ","
         << mult(s.tor->multiplicities[0]) << "," << mult(s.tor->multiplicities[1]) << ","
         << mult(s.tor->multiplicities[2]);
    else
      os << ",,,,,,";
    os << "," << (s.asserted ? "yes" : "no") << "," << (all_pass(s.checks) ? "pass" : "fail") << "\n";
  }
  return os.str();
}

}  // namespace mckay::kleinian
