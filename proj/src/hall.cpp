#include "mckay/hall.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "mckay/errors.hpp"

namespace mckay::hall {

using nlohmann::ordered_json;

namespace {

DimVector add_dims(const DimVector& a, const DimVector& b) {
  DimVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

bool is_zero_dims(const DimVector& d) {
  return std::all_of(d.begin(), d.end(), [](unsigned x) { return x == 0; });
}

std::string key_string(const ClassKey& k) {
  std::ostringstream os;
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "." : "") << k[i];
  return os.str();
}

// Adds v to an echelon list of rational rows; returns true if independent.
bool insert_row(std::vector<std::vector<Rational>>& basis, std::vector<std::size_t>& pivots, std::vector<Rational> v) {
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const Rational c = v[pivots[r]];
    if (c == 0) continue;
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * basis[r][k];
  }
  const auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
  if (it == v.end()) return false;
  const Rational lead = *it;
  for (auto& x : v) x /= lead;
  pivots.push_back(static_cast<std::size_t>(it - v.begin()));
  basis.push_back(std::move(v));
  return true;
}

}  // namespace

std::string dims_string(const DimVector& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

SimplyLacedGraph quiver_graph(const chartab::McKayGraphData& g) {
  dquiver::IntMatrix adj(g.vertex_count, std::vector<std::int64_t>(g.vertex_count, 0));
  for (const auto& e : g.edges) adj[e.a][e.b] = adj[e.b][e.a] = e.multiplicity;
  return SimplyLacedGraph::from_adjacency(adj, g.expected_diagram);
}

SimplyLacedGraph finite_quiver_graph(const chartab::McKayGraphData& g) {
  const auto& fv = g.finite_vertices;
  dquiver::IntMatrix adj(fv.size(), std::vector<std::int64_t>(fv.size(), 0));
  for (const auto& e : g.edges) {
    const auto ia = std::find(fv.begin(), fv.end(), e.a), ib = std::find(fv.begin(), fv.end(), e.b);
    if (ia == fv.end() || ib == fv.end()) continue;
    const auto a = static_cast<std::size_t>(ia - fv.begin()), b = static_cast<std::size_t>(ib - fv.begin());
    adj[a][b] = adj[b][a] = e.multiplicity;
  }
  std::string name = g.expected_diagram;
  if (name.rfind("affine ", 0) == 0) name = name.substr(7);
  return SimplyLacedGraph::from_adjacency(adj, name);
}

Rational HallElement::coefficient(const HallTerm& t) const {
  const auto it = terms.find(t);
  return it == terms.end() ? Rational(0) : it->second;
}

void HallElement::add(const HallTerm& t, const Rational& c) {
  if (c == 0) return;
  auto& v = terms[t];
  v += c;
  if (v == 0) terms.erase(t);
}

HallElement& HallElement::operator+=(const HallElement& o) {
  for (const auto& [t, c] : o.terms) add(t, c);
  return *this;
}

HallElement& HallElement::operator-=(const HallElement& o) {
  for (const auto& [t, c] : o.terms) add(t, -c);
  return *this;
}

HallElement HallElement::operator*(const Rational& c) const {
  HallElement out;
  if (c == 0) return out;
  for (const auto& [t, v] : terms) out.terms.emplace(t, v * c);
  return out;
}

void validate_primes(const std::vector<std::uint32_t>& primes, std::uint32_t held_out) {
  if (primes.size() < 3) throw ConfigError("at least 3 Hall sample primes are required");
  std::set<std::uint32_t> seen;
  for (auto p : primes) {
    if (!ffla::is_prime(p) || p > ffla::PrimeField::kMaxModulus)
      throw ConfigError("Hall sample " + std::to_string(p) + " is not a prime below 2^16");
    if (!seen.insert(p).second) throw ConfigError("Hall sample prime " + std::to_string(p) + " repeated");
  }
  if (!ffla::is_prime(held_out) || held_out > ffla::PrimeField::kMaxModulus)
    throw ConfigError("held-out " + std::to_string(held_out) + " is not a prime below 2^16");
  if (seen.count(held_out)) throw ConfigError("held-out prime " + std::to_string(held_out) + " is also a sample prime");
}

HallAlgebra::HallAlgebra(SimplyLacedGraph graph, HallOptions options)
    : graph_(std::move(graph)), options_(std::move(options)) {
  validate_primes(options_.primes, options_.held_out);
}

dquiver::RepContext& HallAlgebra::context(std::uint32_t q) {
  auto it = contexts_.find(q);
  if (it == contexts_.end())
    it = contexts_.emplace(q, std::make_unique<dquiver::RepContext>(graph_, ffla::PrimeField(q), options_.budget))
             .first;
  return *it->second;
}

HallAlgebra::Piece& HallAlgebra::piece(const DimVector& dims) {
  auto it = pieces_.find(dims);
  if (it != pieces_.end()) return it->second;
  const std::uint32_t q = options_.primes.front();
  const auto& cat = context(q).classes(dims);
  Piece p;
  std::vector<std::pair<ClassKey, std::size_t>> sorted;
  for (const auto& c : cat.classes) sorted.emplace_back(c.key, c.id);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (k > 0 && sorted[k].first == sorted[k - 1].first)
      throw CheckFailure("hall", "two classes of " + dims_string(dims) + " share the rank profile " +
                                     key_string(sorted[k].first) + " at q=" + std::to_string(q));
    p.keys.push_back(sorted[k].first);
  }
  return pieces_.emplace(dims, std::move(p)).first->second;
}

const std::vector<std::size_t>& HallAlgebra::ids_at(const DimVector& dims, std::uint32_t q) {
  auto& p = piece(dims);
  auto it = p.ids.find(q);
  if (it != p.ids.end()) return it->second;
  const auto& cat = context(q).classes(dims);
  std::map<ClassKey, std::size_t> by_key;
  for (const auto& c : cat.classes)
    if (!by_key.emplace(c.key, c.id).second)
      throw CheckFailure("hall", "two classes of " + dims_string(dims) + " share the rank profile " +
                                     key_string(c.key) + " at q=" + std::to_string(q));
  if (by_key.size() != p.keys.size())
    throw CheckFailure("hall", dims_string(dims) + " has " + std::to_string(by_key.size()) + " classes at q=" +
                                   std::to_string(q) + " but " + std::to_string(p.keys.size()) + " at q=" +
                                   std::to_string(options_.primes.front()));
  std::vector<std::size_t> ids, lookup(cat.classes.size());
  for (std::size_t k = 0; k < p.keys.size(); ++k) {
    const auto f = by_key.find(p.keys[k]);
    if (f == by_key.end())
      throw CheckFailure("hall", "class " + key_string(p.keys[k]) + " of " + dims_string(dims) +
                                     " has no match at q=" + std::to_string(q));
    ids.push_back(f->second);
    lookup[f->second] = k;
  }
  p.lookup.emplace(q, std::move(lookup));
  return p.ids.emplace(q, std::move(ids)).first->second;
}

const std::vector<std::size_t>& HallAlgebra::canonical_at(const DimVector& dims, std::uint32_t q) {
  ids_at(dims, q);
  return piece(dims).lookup.at(q);
}

std::size_t HallAlgebra::class_count(const DimVector& dims) { return piece(dims).keys.size(); }

const ClassKey& HallAlgebra::key(const HallTerm& t) { return piece(t.dims).keys.at(t.index); }

std::size_t HallAlgebra::index_of_key(const DimVector& dims, const ClassKey& k) {
  const auto& keys = piece(dims).keys;
  const auto it = std::lower_bound(keys.begin(), keys.end(), k);
  if (it == keys.end() || *it != k) throw std::invalid_argument("no class of " + dims_string(dims) + " with that key");
  return static_cast<std::size_t>(it - keys.begin());
}

const dquiver::DoubleRep& HallAlgebra::representative(const HallTerm& t) {
  const std::uint32_t q = options_.primes.front();
  return context(q).classes(t.dims).classes.at(ids_at(t.dims, q).at(t.index)).representative;
}

std::string HallAlgebra::label(const HallTerm& t) {
  const std::uint32_t q = options_.primes.front();
  return dquiver::describe_key(graph_, representative(t), context(q).field()) + " #" + std::to_string(t.index);
}

HallElement HallAlgebra::unit() {
  HallElement e;
  e.add({DimVector(graph_.vertex_count(), 0), 0}, 1);
  return e;
}

HallElement HallAlgebra::theta(std::size_t vertex) {
  if (vertex >= graph_.vertex_count()) throw std::invalid_argument("theta: no such vertex");
  DimVector d(graph_.vertex_count(), 0);
  d[vertex] = 1;
  if (class_count(d) != 1) throw CheckFailure("hall", "simple dimension vector with several classes");
  HallElement e;
  e.add({d, 0}, 1);
  return e;
}

HallElement HallAlgebra::divided_power(std::size_t vertex, unsigned k) {
  HallElement e = unit();
  Rational fact = 1;
  for (unsigned m = 1; m <= k; ++m) {
    e = product(theta(vertex), e);
    fact *= m;
  }
  return e * (Rational(1) / fact);
}

const EulerConstantRecord& HallAlgebra::euler_hall_constant(const HallTerm& a, const HallTerm& b,
                                                            const HallTerm& c) {
  const auto key = std::make_tuple(a, b, c);
  if (auto it = records_.find(key); it != records_.end()) return it->second;
  if (add_dims(a.dims, b.dims) != c.dims)
    throw std::invalid_argument("euler_hall_constant: dim A + dim B != dim C");

  // Subobject tuples form a closed subset of a product of Grassmannians; a
  // polynomial count has degree at most its dimension.
  unsigned bound = 0;
  for (std::size_t i = 0; i < a.dims.size(); ++i) bound += a.dims[i] * b.dims[i];
  auto primes = options_.primes;
  std::uint32_t held = options_.held_out;
  while (primes.size() <= bound) {
    primes.push_back(held);
    held = static_cast<std::uint32_t>(ffla::next_prime(held));
    primes.push_back(held);
    held = static_cast<std::uint32_t>(ffla::next_prime(held));
  }

  auto count_at = [&](std::uint32_t q) -> std::uint64_t {
    const auto ck = std::make_tuple(q, a.dims, b.dims, c.dims, c.index);
    auto it = counts_.find(ck);
    if (it == counts_.end()) {
      const auto raw = dquiver::hall_counts_into(context(q), a.dims, b.dims, ids_at(c.dims, q).at(c.index), c.dims);
      const auto& ca = canonical_at(a.dims, q);
      const auto& cb = canonical_at(b.dims, q);
      std::vector<std::vector<std::uint64_t>> m(raw.size(), std::vector<std::uint64_t>(raw.empty() ? 0 : raw[0].size()));
      for (std::size_t x = 0; x < raw.size(); ++x)
        for (std::size_t y = 0; y < raw[x].size(); ++y) m[ca[x]][cb[y]] = raw[x][y];
      it = counts_.emplace(ck, std::move(m)).first;
    }
    return it->second.at(a.index).at(b.index);
  };

  EulerConstantRecord r;
  r.a = a;
  r.b = b;
  r.c = c;
  for (auto q : primes) r.samples.push_back({q, count_at(q)});
  r.polynomial = ffla::interpolate_counts(r.samples);
  r.held_out = held;
  r.held_out_count = count_at(held);
  r.predicted = r.polynomial.evaluate(Rational(held));
  r.held_out_ok = r.predicted == Rational(r.held_out_count);
  r.value = r.polynomial.evaluate(Rational(1));
  r.integral = boost::multiprecision::denominator(r.value) == 1;
  const auto& stored = records_.emplace(key, std::move(r)).first->second;
  if (!stored.held_out_ok)
    throw CheckFailure("hall", "Euler constant " + label(a) + " * " + label(b) + " -> " + label(c) +
                                   ": polynomial " + stored.polynomial.to_string() + " predicts " +
                                   ffla::to_string(stored.predicted) + " at q=" + std::to_string(held) +
                                   ", counted " + std::to_string(stored.held_out_count));
  if (!stored.integral)
    throw CheckFailure("hall", "Euler constant " + label(a) + " * " + label(b) + " -> " + label(c) +
                                   " is not an integer: " + ffla::to_string(stored.value));
  return stored;
}

HallElement HallAlgebra::product(const HallElement& f, const HallElement& g) {
  HallElement out;
  for (const auto& [ta, x] : f.terms)
    for (const auto& [tb, y] : g.terms) {
      if (is_zero_dims(ta.dims)) {
        out.add(tb, x * y);
        continue;
      }
      if (is_zero_dims(tb.dims)) {
        out.add(ta, x * y);
        continue;
      }
      const DimVector dc = add_dims(ta.dims, tb.dims);
      const std::size_t n = class_count(dc);
      for (std::size_t c = 0; c < n; ++c) {
        const HallTerm tc{dc, c};
        const auto& rec = euler_hall_constant(ta, tb, tc);
        if (rec.value != 0) out.add(tc, x * y * rec.value);
      }
    }
  return out;
}

HallElement HallAlgebra::product(const std::vector<HallElement>& factors) {
  HallElement acc = unit();
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) acc = product(*it, acc);
  return acc;
}

SerreResult HallAlgebra::serre_check(std::size_t i, std::size_t j) {
  if (i == j || i >= graph_.vertex_count() || j >= graph_.vertex_count())
    throw std::invalid_argument("serre_check needs two distinct vertices");
  SerreResult s;
  s.i = i;
  s.j = j;
  s.a_ij = graph_.cartan()[i][j];
  const auto n = static_cast<unsigned>(1 - s.a_ij);
  s.degree.assign(graph_.vertex_count(), 0);
  s.degree[i] = n;
  s.degree[j] = 1;
  for (unsigned k = 0; k <= n; ++k) {
    HallElement term = product({divided_power(i, k), theta(j), divided_power(i, n - k)});
    if (k % 2 == 1) term = term * Rational(-1);
    s.value += term;
    s.terms.push_back(std::move(term));
  }
  s.zero = s.value.is_zero();
  return s;
}

std::size_t HallAlgebra::composition_dim(const DimVector& degree, const std::vector<std::size_t>& generators) {
  std::vector<std::size_t> gens = generators;
  if (gens.empty()) {
    gens.resize(graph_.vertex_count());
    std::iota(gens.begin(), gens.end(), std::size_t{0});
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

  // span(alpha) = sum_i theta_i * span(alpha - e_i)
  std::function<const std::vector<std::vector<Rational>>&(const DimVector&)> span =
      [&](const DimVector& d) -> const std::vector<std::vector<Rational>>& {
    const auto key = std::make_pair(gens, d);
    if (auto it = spans_.find(key); it != spans_.end()) return it->second;
    std::vector<std::vector<Rational>> basis;
    std::vector<std::size_t> pivots;
    const unsigned total = std::accumulate(d.begin(), d.end(), 0u);
    if (total == 1) {
      const auto v = static_cast<std::size_t>(std::find(d.begin(), d.end(), 1u) - d.begin());
      if (std::binary_search(gens.begin(), gens.end(), v)) basis.push_back({Rational(1)});
    } else if (total > 1) {
      const std::size_t n = class_count(d);
      for (auto i : gens) {
        if (d[i] == 0) continue;
        DimVector rest = d;
        --rest[i];
        const auto sub = span(rest);  // copy: the cache may rehash
        for (const auto& v : sub) {
          HallElement e;
          for (std::size_t k = 0; k < v.size(); ++k) e.add({rest, k}, v[k]);
          const auto prod = product(theta(i), e);
          std::vector<Rational> row(n, Rational(0));
          for (const auto& [t, c] : prod.terms) row.at(t.index) = c;
          insert_row(basis, pivots, std::move(row));
        }
      }
    }
    return spans_.emplace(key, std::move(basis)).first->second;
  };
  return span(degree).size();
}

ordered_json to_json(HallAlgebra& h, const HallElement& e) {
  ordered_json arr = ordered_json::array();
  for (const auto& [t, c] : e.terms)
    arr.push_back({{"dims", t.dims}, {"class", h.label(t)}, {"coefficient", ffla::to_string(c)}});
  return arr;
}

ordered_json to_json(HallAlgebra& h, const EulerConstantRecord& r) {
  ordered_json samples = ordered_json::array();
  for (const auto& s : r.samples) samples.push_back({{"q", s.prime}, {"count", s.count}});
  ordered_json coeffs = ordered_json::array();
  for (const auto& c : r.polynomial.coefficients()) coeffs.push_back(ffla::to_string(c));
  return {{"A", h.label(r.a)},
          {"B", h.label(r.b)},
          {"C", h.label(r.c)},
          {"samples", samples},
          {"polynomial", r.polynomial.to_string()},
          {"coefficients", coeffs},
          {"held_out", r.held_out},
          {"held_out_count", r.held_out_count},
          {"predicted", ffla::to_string(r.predicted)},
          {"held_out_ok", r.held_out_ok},
          {"chi", ffla::to_string(r.value)}};
}

ordered_json to_json(HallAlgebra& h, const SerreResult& s) {
  return {{"i", s.i},          {"j", s.j},           {"a_ij", s.a_ij}, {"degree", s.degree},
          {"zero", s.zero},    {"value", to_json(h, s.value)}};
}

std::string euler_csv(HallAlgebra& h) {
  std::ostringstream os;
  os << "# csv v1\n";
  os << "dims_a,a,dims_b,b,dims_c,c,polynomial,chi,held_out,held_out_count,predicted,verified\n";
  for (const auto& [k, r] : h.records()) {
    os << '"' << dims_string(r.a.dims) << "\"," << r.a.index << ",\"" << dims_string(r.b.dims) << "\"," << r.b.index
       << ",\"" << dims_string(r.c.dims) << "\"," << r.c.index << ",\"" << r.polynomial.to_string() << "\","
       << ffla::to_string(r.value) << ',' << r.held_out << ',' << r.held_out_count << ','
       << ffla::to_string(r.predicted) << ',' << (r.held_out_ok ? "pass" : "fail") << '\n';
  }
  return os.str();
}

std::string serre_csv(const std::vector<SerreResult>& results, const std::string& family) {
  std::ostringstream os;
  os << "# csv v1\n";
  os << "family,i,j,a_ij,degree,terms,verdict\n";
  for (const auto& s : results)
    os << family << ',' << s.i << ',' << s.j << ',' << s.a_ij << ",\"" << dims_string(s.degree) << "\","
       << s.value.terms.size() << ',' << (s.zero ? "zero" : "nonzero") << '\n';
  return os.str();
}

}  // namespace mckay::hall
