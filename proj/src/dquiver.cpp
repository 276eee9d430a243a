#include "mckay/dquiver.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>

#include "mckay/errors.hpp"

namespace mckay::dquiver {

namespace {

using Vec = std::vector<Residue>;

std::uint64_t checked_power(std::uint64_t q, std::uint64_t e, std::uint64_t cap, const std::string& what) {
  std::uint64_t r = 1;
  for (std::uint64_t k = 0; k < e; ++k) {
    if (r > cap / q) throw BudgetExceeded(what + ": q^" + std::to_string(e) + " exceeds cap " + std::to_string(cap));
    r *= q;
  }
  return r;
}

std::size_t entry_count(const SimplyLacedGraph& g, const DimVector& d) {
  std::size_t n = 0;
  for (auto [a, b] : g.edges()) n += 2 * d[a] * d[b];
  return n;
}

FpMatrix hstack(const std::vector<const FpMatrix*>& parts, std::size_t rows) {
  std::size_t cols = 0;
  for (auto* p : parts) cols += p->cols();
  FpMatrix out(rows, cols);
  std::size_t off = 0;
  for (auto* p : parts) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < p->cols(); ++c) out(r, off + c) = (*p)(r, c);
    off += p->cols();
  }
  return out;
}

FpMatrix vstack(const std::vector<const FpMatrix*>& parts, std::size_t cols) {
  FpMatrix out(0, cols);
  for (auto* p : parts)
    for (std::size_t r = 0; r < p->rows(); ++r) out.append_row(p->row(r));
  return out;
}

// All invertible d x d matrices over F_q.
std::vector<FpMatrix> general_linear(std::size_t d, const PrimeField& f, std::uint64_t cap) {
  const std::uint64_t total = checked_power(f.modulus(), d * d, cap, "general linear enumeration");
  std::vector<FpMatrix> out;
  for (std::uint64_t code = 0; code < total; ++code) {
    FpMatrix m(d, d);
    std::uint64_t c = code;
    for (std::size_t k = d * d; k-- > 0;) {
      m(k / d, k % d) = static_cast<Residue>(c % f.modulus());
      c /= f.modulus();
    }
    if (ffla::determinant(m, f) != 0) out.push_back(std::move(m));
  }
  return out;
}

// Acts by g at vertex v: maps into v are multiplied by g on the left, maps
// out of v by g^-1 on the right.
void act_at_vertex(const SimplyLacedGraph& g, DoubleRep& r, std::size_t v, const FpMatrix& m, const FpMatrix& m_inv,
                   const PrimeField& f) {
  const auto& edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [a, b] = edges[e];
    auto& fw = r.maps[2 * e];      // V_b -> V_a
    auto& bw = r.maps[2 * e + 1];  // V_a -> V_b
    if (a == v) {
      fw = ffla::multiply(m, fw, f);
      bw = ffla::multiply(bw, m_inv, f);
    } else if (b == v) {
      fw = ffla::multiply(fw, m_inv, f);
      bw = ffla::multiply(m, bw, f);
    }
  }
}

void walks(const SimplyLacedGraph& g, std::size_t length, std::vector<std::size_t>& prefix,
           const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (prefix.size() == length + 1) {
    visit(prefix);
    return;
  }
  for (auto n : g.neighbours(prefix.back())) {
    prefix.push_back(n);
    walks(g, length, prefix, visit);
    prefix.pop_back();
  }
}

}  // namespace

SimplyLacedGraph SimplyLacedGraph::from_adjacency(const IntMatrix& adjacency, std::string name) {
  SimplyLacedGraph g;
  const std::size_t n = adjacency.size();
  g.adjacent_.assign(n, std::vector<bool>(n, false));
  g.name_ = std::move(name);
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i].size() != n) throw ConfigError("adjacency matrix is not square");
    if (adjacency[i][i] != 0) throw ConfigError("graph has a loop at vertex " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency[i][j] != adjacency[j][i]) throw ConfigError("adjacency matrix is not symmetric");
      if (adjacency[i][j] > 1 || adjacency[i][j] < 0)
        throw ConfigError("graph has a multiple edge between " + std::to_string(i) + " and " + std::to_string(j));
      g.adjacent_[i][j] = adjacency[i][j] == 1;
      if (i < j && adjacency[i][j] == 1) g.edges_.emplace_back(i, j);
    }
  }
  return g;
}

SimplyLacedGraph SimplyLacedGraph::path(std::size_t n) {
  IntMatrix a(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i + 1 < n; ++i) a[i][i + 1] = a[i + 1][i] = 1;
  return from_adjacency(a, "A" + std::to_string(n));
}

SimplyLacedGraph SimplyLacedGraph::cycle(std::size_t n) {
  IntMatrix a(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][(i + 1) % n] += 1;
    a[(i + 1) % n][i] += 1;
  }
  return from_adjacency(a, "affine A" + std::to_string(n - 1));
}

std::vector<std::size_t> SimplyLacedGraph::neighbours(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < vertex_count(); ++j)
    if (adjacent_[i][j]) out.push_back(j);
  return out;
}

std::size_t SimplyLacedGraph::map_index(std::size_t i, std::size_t j) const {
  const auto key = std::minmax(i, j);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair<std::size_t, std::size_t>(key));
  if (it == edges_.end() || *it != std::pair<std::size_t, std::size_t>(key))
    throw std::invalid_argument("no edge between " + std::to_string(i) + " and " + std::to_string(j));
  const auto e = static_cast<std::size_t>(it - edges_.begin());
  return i < j ? 2 * e : 2 * e + 1;
}

IntMatrix SimplyLacedGraph::cartan() const {
  const std::size_t n = vertex_count();
  IntMatrix c(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i][j] = i == j ? 2 : (adjacent_[i][j] ? -1 : 0);
  return c;
}

DoubleRep DoubleRep::zero(const SimplyLacedGraph& g, const DimVector& dims) {
  if (dims.size() != g.vertex_count()) throw std::invalid_argument("dimension vector length mismatch");
  DoubleRep r;
  r.dims = dims;
  for (auto [a, b] : g.edges()) {
    r.maps.emplace_back(dims[a], dims[b]);
    r.maps.emplace_back(dims[b], dims[a]);
  }
  return r;
}

bool satisfies_relation(const SimplyLacedGraph& g, const DoubleRep& r, const PrimeField& f) {
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    FpMatrix sum(r.dims[i], r.dims[i]);
    for (auto j : g.neighbours(i)) {
      const auto prod = ffla::multiply(r.map(g, i, j), r.map(g, j, i), f);
      for (std::size_t a = 0; a < sum.rows(); ++a)
        for (std::size_t b = 0; b < sum.cols(); ++b) sum(a, b) = f.add(sum(a, b), prod(a, b));
    }
    if (!sum.is_zero()) return false;
  }
  return true;
}

ClassKey class_key(const SimplyLacedGraph& g, const DoubleRep& r, const PrimeField& f) {
  ClassKey key;
  for (const auto& m : r.maps) key.push_back(static_cast<std::int32_t>(ffla::rank(m, f)));
  for (std::size_t length = 2; length <= 4; ++length) {
    for (std::size_t start = 0; start < g.vertex_count(); ++start) {
      std::vector<std::size_t> prefix{start};
      walks(g, length, prefix, [&](const std::vector<std::size_t>& w) {
        FpMatrix m = r.map(g, w[0], w[1]);
        for (std::size_t k = 1; k + 1 < w.size(); ++k) m = ffla::multiply(m, r.map(g, w[k], w[k + 1]), f);
        key.push_back(static_cast<std::int32_t>(ffla::rank(m, f)));
      });
    }
  }
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    std::vector<const FpMatrix*> in, out;
    for (auto j : g.neighbours(i)) {
      in.push_back(&r.map(g, i, j));
      out.push_back(&r.map(g, j, i));
    }
    key.push_back(static_cast<std::int32_t>(ffla::rank(hstack(in, r.dims[i]), f)));
    key.push_back(static_cast<std::int32_t>(ffla::rank(vstack(out, r.dims[i]), f)));
  }
  return key;
}

std::string describe_key(const SimplyLacedGraph& g, const DoubleRep& r, const PrimeField& f) {
  std::ostringstream os;
  os << "d=(";
  for (std::size_t i = 0; i < r.dims.size(); ++i) os << (i ? "," : "") << r.dims[i];
  os << ")";
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    auto [a, b] = g.edges()[e];
    const auto rf = ffla::rank(r.maps[2 * e], f), rb = ffla::rank(r.maps[2 * e + 1], f);
    if (rf) os << " x" << a << "<" << b << ":" << rf;
    if (rb) os << " x" << b << "<" << a << ":" << rb;
  }
  return os.str();
}

std::uint64_t encode(const DoubleRep& r, std::uint32_t q) {
  std::uint64_t code = 0;
  for (const auto& m : r.maps)
    for (auto v : m.entries()) code = code * q + v;
  return code;
}

DoubleRep decode(const SimplyLacedGraph& g, const DimVector& dims, std::uint64_t code, std::uint32_t q) {
  DoubleRep r = DoubleRep::zero(g, dims);
  for (std::size_t m = r.maps.size(); m-- > 0;) {
    auto& mat = r.maps[m];
    for (std::size_t k = mat.rows() * mat.cols(); k-- > 0;) {
      mat(k / mat.cols(), k % mat.cols()) = static_cast<Residue>(code % q);
      code /= q;
    }
  }
  return r;
}

std::size_t ClassCatalogue::class_of_code(std::uint64_t code) const {
  const auto it = std::lower_bound(lookup.begin(), lookup.end(), std::pair<std::uint64_t, std::uint32_t>(code, 0));
  if (it == lookup.end() || it->first != code)
    throw CheckFailure("dquiver", "representation code " + std::to_string(code) + " is not a relation point");
  return it->second;
}

ClassCatalogue enumerate_iso_classes(const SimplyLacedGraph& g, const DimVector& dims, const PrimeField& f,
                                     const Budget& budget) {
  if (dims.size() != g.vertex_count()) throw std::invalid_argument("dimension vector length mismatch");
  const std::uint32_t q = f.modulus();
  const auto& edges = g.edges();
  // Codes must fit in 63 bits.
  checked_power(q, entry_count(g, dims), std::uint64_t{1} << 62, "representation code");

  std::size_t forward_entries = 0, backward_entries = 0, equations = 0;
  std::vector<std::size_t> backward_offset;
  for (auto [a, b] : edges) {
    forward_entries += dims[a] * dims[b];
    backward_offset.push_back(backward_entries);
    backward_entries += dims[a] * dims[b];
  }
  std::vector<std::size_t> eq_offset;
  for (auto d : dims) {
    eq_offset.push_back(equations);
    equations += d * d;
  }
  const std::uint64_t forward_total = checked_power(q, forward_entries, budget.variety_cap, "forward maps");

  // With the maps x_ab (a < b) fixed, the relation is linear in the maps x_ba.
  std::vector<std::uint64_t> codes;
  DoubleRep r = DoubleRep::zero(g, dims);
  for (std::uint64_t fcode = 0; fcode < forward_total; ++fcode) {
    std::uint64_t c = fcode;
    for (std::size_t e = edges.size(); e-- > 0;) {
      auto& fw = r.maps[2 * e];
      for (std::size_t k = fw.rows() * fw.cols(); k-- > 0;) {
        fw(k / fw.cols(), k % fw.cols()) = static_cast<Residue>(c % q);
        c /= q;
      }
    }
    FpMatrix system(equations, backward_entries);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto [a, b] = edges[e];
      const auto& fw = r.maps[2 * e];  // d_a x d_b
      const std::size_t off = backward_offset[e];
      // y = x_ba is d_b x d_a; unknown y[k][l] sits at off + k * d_a + l.
      // Vertex a: (fw y)[s][t] = sum_k fw[s][k] y[k][t].
      for (std::size_t s = 0; s < dims[a]; ++s)
        for (std::size_t t = 0; t < dims[a]; ++t)
          for (std::size_t k = 0; k < dims[b]; ++k)
            system(eq_offset[a] + s * dims[a] + t, off + k * dims[a] + t) =
                f.add(system(eq_offset[a] + s * dims[a] + t, off + k * dims[a] + t), fw(s, k));
      // Vertex b: (y fw)[s][t] = sum_k y[s][k] fw[k][t].
      for (std::size_t s = 0; s < dims[b]; ++s)
        for (std::size_t t = 0; t < dims[b]; ++t)
          for (std::size_t k = 0; k < dims[a]; ++k)
            system(eq_offset[b] + s * dims[b] + t, off + s * dims[a] + k) =
                f.add(system(eq_offset[b] + s * dims[b] + t, off + s * dims[a] + k), fw(k, t));
    }
    const auto kernel = backward_entries == 0 ? FpMatrix(0, 0) : ffla::nullspace(system, f);
    const std::uint64_t solutions = checked_power(q, kernel.rows(), budget.variety_cap, "relation variety");
    if (codes.size() + solutions > budget.variety_cap)
      throw BudgetExceeded("relation variety exceeds " + std::to_string(budget.variety_cap) + " points");
    Vec y(backward_entries);
    for (std::uint64_t s = 0; s < solutions; ++s) {
      std::fill(y.begin(), y.end(), 0);
      std::uint64_t cs = s;
      for (std::size_t k = 0; k < kernel.rows(); ++k) {
        const Residue coeff = static_cast<Residue>(cs % q);
        cs /= q;
        if (coeff == 0) continue;
        for (std::size_t u = 0; u < backward_entries; ++u) y[u] = f.add(y[u], f.mul(coeff, kernel(k, u)));
      }
      for (std::size_t e = 0; e < edges.size(); ++e) {
        auto& bw = r.maps[2 * e + 1];
        std::copy(y.begin() + static_cast<std::ptrdiff_t>(backward_offset[e]),
                  y.begin() + static_cast<std::ptrdiff_t>(backward_offset[e] + bw.rows() * bw.cols()),
                  bw.row(0).data());
      }
      codes.push_back(encode(r, q));
    }
  }
  std::sort(codes.begin(), codes.end());

  // Generators of prod GL(V_i): a primitive diagonal scaling and the
  // elementary transvections.
  struct Generator {
    std::size_t vertex;
    FpMatrix m, m_inv;
  };
  std::vector<Generator> gens;
  for (std::size_t v = 0; v < dims.size(); ++v) {
    const std::size_t d = dims[v];
    if (d == 0) continue;
    if (q > 2) {
      auto m = FpMatrix::identity(d), mi = FpMatrix::identity(d);
      m(0, 0) = f.primitive_root();
      mi(0, 0) = f.inv(f.primitive_root());
      gens.push_back({v, m, mi});
    }
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = 0; l < d; ++l) {
        if (k == l) continue;
        auto m = FpMatrix::identity(d), mi = FpMatrix::identity(d);
        m(k, l) = 1;
        mi(k, l) = f.neg(1);
        gens.push_back({v, m, mi});
      }
  }

  ClassCatalogue cat;
  cat.dims = dims;
  cat.q = q;
  cat.variety_points = codes.size();
  std::vector<std::int64_t> owner(codes.size(), -1);
  auto index_of = [&](std::uint64_t code) {
    const auto it = std::lower_bound(codes.begin(), codes.end(), code);
    if (it == codes.end() || *it != code)
      throw CheckFailure("enumerate_iso_classes", "base change left the relation variety");
    return static_cast<std::size_t>(it - codes.begin());
  };
  for (std::size_t start = 0; start < codes.size(); ++start) {
    if (owner[start] >= 0) continue;
    const auto id = static_cast<std::int64_t>(cat.classes.size());
    std::deque<std::size_t> queue{start};
    owner[start] = id;
    std::uint64_t size = 0;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      ++size;
      const DoubleRep rep = decode(g, dims, codes[cur], q);
      for (const auto& gen : gens) {
        DoubleRep moved = rep;
        act_at_vertex(g, moved, gen.vertex, gen.m, gen.m_inv, f);
        const std::size_t idx = index_of(encode(moved, q));
        if (owner[idx] < 0) {
          owner[idx] = id;
          queue.push_back(idx);
        }
      }
    }
    IsoClass cls;
    cls.id = static_cast<std::size_t>(id);
    cls.code = codes[start];
    cls.representative = decode(g, dims, codes[start], q);
    cls.orbit_size = size;
    cls.key = class_key(g, cls.representative, f);
    cls.label = describe_key(g, cls.representative, f);
    cat.classes.push_back(std::move(cls));
  }
  cat.lookup.reserve(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i)
    cat.lookup.emplace_back(codes[i], static_cast<std::uint32_t>(owner[i]));
  return cat;
}

std::uint64_t relation_variety_count_bruteforce(const SimplyLacedGraph& g, const DimVector& dims, const PrimeField& f,
                                                const Budget& budget) {
  const std::uint32_t q = f.modulus();
  const std::uint64_t total = checked_power(q, entry_count(g, dims), budget.variety_cap, "brute-force tuples");
  std::uint64_t count = 0;
  for (std::uint64_t code = 0; code < total; ++code)
    if (satisfies_relation(g, decode(g, dims, code, q), f)) ++count;
  return count;
}

std::uint64_t base_change_group_order_mod(const DimVector& dims, std::uint64_t q, std::uint64_t m) {
  using u128 = unsigned __int128;
  std::uint64_t acc = 1 % m;
  for (auto d : dims) {
    std::uint64_t qd = 1;
    for (unsigned k = 0; k < d; ++k) qd *= q;
    std::uint64_t qk = 1;
    for (unsigned k = 0; k < d; ++k) {
      acc = static_cast<std::uint64_t>(static_cast<u128>(acc) * ((qd - qk) % m) % m);
      qk *= q;
    }
  }
  return acc;
}

IsoWitness are_isomorphic(const SimplyLacedGraph& g, const DoubleRep& a, const DoubleRep& b, const PrimeField& f,
                          const Budget& budget) {
  if (a.dims != b.dims) return {};
  if (class_key(g, a, f) != class_key(g, b, f)) return {};
  std::vector<std::vector<FpMatrix>> groups;
  std::uint64_t size = 1;
  for (auto d : a.dims) {
    groups.push_back(general_linear(d, f, budget.group_cap));
    size *= std::max<std::uint64_t>(groups.back().size(), 1);
    if (size > budget.group_cap)
      throw BudgetExceeded("base-change group exceeds " + std::to_string(budget.group_cap) + " elements");
  }
  std::vector<std::size_t> pick(groups.size(), 0);
  const auto& edges = g.edges();
  while (true) {
    bool ok = true;
    for (std::size_t e = 0; e < edges.size() && ok; ++e) {
      auto [u, v] = edges[e];
      // x_uv : V_v -> V_u and x_vu : V_u -> V_v; require g_u a_uv = b_uv g_v and g_v a_vu = b_vu g_u.
      if (a.dims[u] == 0 || a.dims[v] == 0) continue;
      const auto& gu = groups[u][pick[u]];
      const auto& gv = groups[v][pick[v]];
      ok = ffla::multiply(gu, a.maps[2 * e], f) == ffla::multiply(b.maps[2 * e], gv, f) &&
           ffla::multiply(gv, a.maps[2 * e + 1], f) == ffla::multiply(b.maps[2 * e + 1], gu, f);
    }
    if (ok) {
      std::vector<FpMatrix> witness;
      for (std::size_t i = 0; i < groups.size(); ++i)
        witness.push_back(groups[i].empty() ? FpMatrix(0, 0) : groups[i][pick[i]]);
      return {true, std::move(witness)};
    }
    std::size_t k = 0;
    while (k < pick.size()) {
      if (!groups[k].empty() && ++pick[k] < groups[k].size()) break;
      pick[k] = 0;
      ++k;
    }
    if (k == pick.size()) return {};
  }
}

const ClassCatalogue& RepContext::classes(const DimVector& dims) {
  auto it = cache_.find(dims);
  if (it == cache_.end())
    it = cache_.emplace(dims, std::make_unique<ClassCatalogue>(enumerate_iso_classes(graph_, dims, field_, budget_)))
             .first;
  return *it->second;
}

const IsoClass& RepContext::simple(std::size_t vertex) {
  DimVector d(graph_.vertex_count(), 0);
  d[vertex] = 1;
  return classes(d).classes.front();
}

std::size_t RepContext::class_of(const DoubleRep& r) { return classes(r.dims).class_of_code(encode(r, field_.modulus())); }

namespace {

struct SubRestriction {
  DoubleRep sub, quotient;
};

// Restriction to the invariant tuple W and the quotient on the standard
// complement of each RREF basis; nullopt if W is not invariant.
std::optional<SubRestriction> restrict_to(const SimplyLacedGraph& g, const DoubleRep& c,
                                          const std::vector<const FpMatrix*>& w, const PrimeField& f) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::size_t>> piv(n), free(n);
  DimVector da(n), db(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = *w[i];
    for (std::size_t r = 0; r < b.rows(); ++r) {
      std::size_t j = 0;
      while (b(r, j) == 0) ++j;
      piv[i].push_back(j);
    }
    for (std::size_t j = 0; j < c.dims[i]; ++j)
      if (std::find(piv[i].begin(), piv[i].end(), j) == piv[i].end()) free[i].push_back(j);
    da[i] = static_cast<unsigned>(piv[i].size());
    db[i] = static_cast<unsigned>(free[i].size());
  }
  auto reduce = [&](Vec& v, std::size_t i) {
    const auto& b = *w[i];
    for (std::size_t r = 0; r < b.rows(); ++r) {
      const Residue k = v[piv[i][r]];
      if (k == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = f.sub(v[j], f.mul(k, b(r, j)));
    }
  };
  SubRestriction out{DoubleRep::zero(g, da), DoubleRep::zero(g, db)};
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    auto [u, v] = g.edges()[e];
    for (int dir = 0; dir < 2; ++dir) {
      const std::size_t tgt = dir == 0 ? u : v, src = dir == 0 ? v : u;
      const auto& m = c.maps[2 * e + static_cast<std::size_t>(dir)];
      auto& sm = out.sub.maps[2 * e + static_cast<std::size_t>(dir)];
      auto& qm = out.quotient.maps[2 * e + static_cast<std::size_t>(dir)];
      if (c.dims[tgt] == 0 || c.dims[src] == 0) continue;
      for (std::size_t k = 0; k < da[src]; ++k) {
        Vec img = ffla::apply(m, w[src]->row(k), f);
        Vec red = img;
        reduce(red, tgt);
        if (std::any_of(red.begin(), red.end(), [](Residue x) { return x != 0; })) return std::nullopt;
        for (std::size_t r = 0; r < da[tgt]; ++r) sm(r, k) = img[piv[tgt][r]];
      }
      for (std::size_t k = 0; k < db[src]; ++k) {
        Vec img(c.dims[tgt]);
        for (std::size_t r = 0; r < c.dims[tgt]; ++r) img[r] = m(r, free[src][k]);
        reduce(img, tgt);
        for (std::size_t r = 0; r < db[tgt]; ++r) qm(r, k) = img[free[tgt][r]];
      }
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::uint64_t>> hall_counts_into(RepContext& ctx, const DimVector& dim_a,
                                                         const DimVector& dim_b, std::size_t c,
                                                         const DimVector& dim_c) {
  const auto& g = ctx.graph();
  const auto& f = ctx.field();
  const std::size_t n = g.vertex_count();
  if (dim_a.size() != n || dim_b.size() != n || dim_c.size() != n)
    throw std::invalid_argument("hall_count: dimension vector length mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (dim_a[i] + dim_b[i] != dim_c[i]) throw std::invalid_argument("hall_count: dim A + dim B != dim C");
  const auto& cat_a = ctx.classes(dim_a);
  const auto& cat_b = ctx.classes(dim_b);
  const auto& rep = ctx.classes(dim_c).classes.at(c).representative;

  std::vector<std::vector<FpMatrix>> subspaces(n);
  std::uint64_t tuples = 1;
  for (std::size_t i = 0; i < n; ++i) {
    ffla::for_each_subspace(dim_c[i], dim_a[i], f, [&](const FpMatrix& b) { subspaces[i].push_back(b); });
    tuples *= subspaces[i].size();
    if (tuples > ctx.budget().variety_cap)
      throw BudgetExceeded("subspace tuples exceed " + std::to_string(ctx.budget().variety_cap));
  }
  std::vector<std::vector<std::uint64_t>> counts(cat_a.classes.size(),
                                                 std::vector<std::uint64_t>(cat_b.classes.size(), 0));
  std::vector<std::size_t> pick(n, 0);
  std::vector<const FpMatrix*> w(n);
  const std::uint32_t q = f.modulus();
  for (std::uint64_t t = 0; t < tuples; ++t) {
    for (std::size_t i = 0; i < n; ++i) w[i] = &subspaces[i][pick[i]];
    if (auto parts = restrict_to(g, rep, w, f)) {
      const auto ia = cat_a.class_of_code(encode(parts->sub, q));
      const auto ib = cat_b.class_of_code(encode(parts->quotient, q));
      ++counts[ia][ib];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (++pick[i] < subspaces[i].size()) break;
      pick[i] = 0;
    }
  }
  return counts;
}

std::uint64_t hall_count(RepContext& ctx, std::size_t a, const DimVector& dim_a, std::size_t b,
                         const DimVector& dim_b, std::size_t c, const DimVector& dim_c) {
  return hall_counts_into(ctx, dim_a, dim_b, c, dim_c).at(a).at(b);
}

}  // namespace mckay::dquiver
