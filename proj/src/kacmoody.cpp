#include "mckay/kacmoody.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "mckay/errors.hpp"

namespace mckay::kacmoody {

namespace {

unsigned total(const DimVector& a) { return std::accumulate(a.begin(), a.end(), 0u); }

DimVector content(const Word& w, std::size_t rank) {
  DimVector d(rank, 0);
  for (auto v : w) ++d[v];
  return d;
}

Word concat(const Word& a, const Word& b, const Word& c) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  w.insert(w.end(), c.begin(), c.end());
  return w;
}

// All beta <= alpha componentwise.
void sub_vectors(const DimVector& alpha, std::size_t pos, DimVector& cur, std::vector<DimVector>& out) {
  if (pos == alpha.size()) {
    out.push_back(cur);
    return;
  }
  for (unsigned k = 0; k <= alpha[pos]; ++k) {
    cur[pos] = k;
    sub_vectors(alpha, pos + 1, cur, out);
  }
}

IntMatrix restrict_cartan(const IntMatrix& c, const std::vector<std::size_t>& idx) {
  IntMatrix r(idx.size(), std::vector<std::int64_t>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) r[a][b] = c[idx[a]][idx[b]];
  return r;
}

}  // namespace

void FreeElement::add(const Word& w, const Rational& c) {
  if (c == 0) return;
  auto& v = terms[w];
  v += c;
  if (v == 0) terms.erase(w);
}

DimVector FreeElement::degree(std::size_t rank) const {
  return terms.empty() ? DimVector(rank, 0) : content(terms.begin()->first, rank);
}

std::vector<Word> words_of_content(const DimVector& alpha) {
  Word w;
  for (std::size_t i = 0; i < alpha.size(); ++i) w.insert(w.end(), alpha[i], static_cast<std::uint8_t>(i));
  std::vector<Word> out;
  do out.push_back(w);
  while (std::next_permutation(w.begin(), w.end()));
  return out;
}

FreeElement serre_element(std::size_t i, std::size_t j, const IntMatrix& cartan) {
  if (i == j) throw std::invalid_argument("serre_element needs i != j");
  const auto n = static_cast<unsigned>(1 - cartan[i][j]);
  FreeElement s;
  Rational fk = 1;
  for (unsigned k = 0; k <= n; ++k) {
    if (k > 0) fk *= k;
    Rational fnk = 1;
    for (unsigned m = 2; m <= n - k; ++m) fnk *= m;
    Word w(k, static_cast<std::uint8_t>(i));
    w.push_back(static_cast<std::uint8_t>(j));
    w.insert(w.end(), n - k, static_cast<std::uint8_t>(i));
    s.add(w, Rational(k % 2 ? -1 : 1) / (fk * fnk));
  }
  return s;
}

SerreIdealSlice serre_ideal_slice(const IntMatrix& cartan, const DimVector& alpha) {
  const std::size_t rank = cartan.size();
  SerreIdealSlice slice;
  slice.alpha = alpha;
  const auto words = words_of_content(alpha);
  slice.words = words.size();
  std::map<Word, std::size_t> index;
  for (std::size_t k = 0; k < words.size(); ++k) index.emplace(words[k], k);
  std::map<DimVector, std::vector<Word>> word_cache;
  auto words_of = [&](const DimVector& d) -> const std::vector<Word>& {
    auto it = word_cache.find(d);
    if (it == word_cache.end()) it = word_cache.emplace(d, words_of_content(d)).first;
    return it->second;
  };
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j) {
      if (i == j) continue;
      const auto s = serre_element(i, j, cartan);
      const auto ds = s.degree(rank);
      DimVector rest(rank);
      bool fits = true;
      for (std::size_t k = 0; k < rank; ++k) {
        if (ds[k] > alpha[k]) fits = false;
        else rest[k] = alpha[k] - ds[k];
      }
      if (!fits) continue;
      std::vector<DimVector> lefts;
      DimVector cur(rank, 0);
      sub_vectors(rest, 0, cur, lefts);
      for (const auto& beta : lefts) {
        DimVector gamma(rank);
        for (std::size_t k = 0; k < rank; ++k) gamma[k] = rest[k] - beta[k];
        for (const auto& u : words_of(beta))
          for (const auto& v : words_of(gamma)) {
            std::vector<Rational> row(words.size(), Rational(0));
            for (const auto& [w, c] : s.terms) row[index.at(concat(u, w, v))] += c;
            slice.spanning.push_back(std::move(row));
          }
      }
    }
  slice.rank = slice.spanning.empty() ? 0 : ffla::rank_over_q(slice.spanning);
  return slice;
}

std::size_t positive_part_dim(const IntMatrix& cartan, const DimVector& alpha, unsigned cap) {
  if (total(alpha) > cap)
    throw BudgetExceeded("positive_part_dim: degree " + std::to_string(total(alpha)) + " exceeds cap " +
                         std::to_string(cap));
  const auto slice = serre_ideal_slice(cartan, alpha);
  return slice.words - slice.rank;
}

bool is_finite_type(const IntMatrix& cartan) {
  for (std::size_t k = 1; k <= cartan.size(); ++k) {
    IntMatrix m(k, std::vector<std::int64_t>(k));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) m[a][b] = cartan[a][b];
    if (ffla::integer_determinant(m) <= 0) return false;
  }
  return true;
}

RootSystemData root_system(const IntMatrix& cartan) {
  if (!is_finite_type(cartan)) throw ConfigError("root_system: Cartan matrix is not of finite type");
  const std::size_t n = cartan.size();
  std::set<DimVector> roots;
  std::vector<DimVector> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    DimVector e(n, 0);
    e[i] = 1;
    roots.insert(e);
    frontier.push_back(e);
  }
  while (!frontier.empty()) {
    std::vector<DimVector> next;
    for (const auto& b : frontier)
      for (std::size_t i = 0; i < n; ++i) {
        std::int64_t pairing = 0;
        for (std::size_t k = 0; k < n; ++k) pairing += cartan[i][k] * static_cast<std::int64_t>(b[k]);
        const std::int64_t coord = static_cast<std::int64_t>(b[i]) - pairing;
        if (coord < 0) continue;
        DimVector r = b;
        r[i] = static_cast<unsigned>(coord);
        if (total(r) == 0) continue;
        if (roots.insert(r).second) next.push_back(r);
      }
    frontier = std::move(next);
  }
  RootSystemData d;
  d.cartan = cartan;
  d.positive_roots.assign(roots.begin(), roots.end());
  std::stable_sort(d.positive_roots.begin(), d.positive_roots.end(),
                   [](const DimVector& a, const DimVector& b) { return total(a) < total(b); });
  return d;
}

std::uint64_t pbw_dim(const RootSystemData& roots, const DimVector& alpha) {
  const std::size_t n = alpha.size();
  // Mixed-radix index over all beta <= alpha.
  std::vector<std::size_t> stride(n, 1);
  std::size_t size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    stride[i] = size;
    size *= alpha[i] + 1;
  }
  std::vector<std::uint64_t> ways(size, 0);
  ways[0] = 1;
  for (const auto& r : roots.positive_roots) {
    bool fits = true;
    for (std::size_t i = 0; i < n; ++i) fits = fits && r[i] <= alpha[i];
    if (!fits) continue;
    // Unbounded knapsack: ascending index order lets r repeat.
    for (std::size_t idx = 0; idx < size; ++idx) {
      std::size_t rem = idx, prev = 0;
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = rem % (alpha[i] + 1);
        rem /= alpha[i] + 1;
        if (c < r[i]) {
          ok = false;
          break;
        }
        prev += (c - r[i]) * stride[i];
      }
      if (ok) ways[idx] += ways[prev];
    }
  }
  return ways[size - 1];
}

std::vector<DimVector> degrees_up_to(std::size_t rank, unsigned cap, bool proper_support) {
  std::vector<DimVector> out;
  for (unsigned t = 1; t <= cap; ++t) {
    std::vector<DimVector> level;
    DimVector cur(rank, 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned left) {
      if (pos + 1 == rank) {
        cur[pos] = left;
        level.push_back(cur);
        return;
      }
      for (unsigned k = left + 1; k-- > 0;) {
        cur[pos] = k;
        rec(pos + 1, left - k);
      }
    };
    if (rank > 0) rec(0, t);
    for (auto& a : level) {
      const bool full = std::all_of(a.begin(), a.end(), [](unsigned x) { return x > 0; });
      if (proper_support && full) continue;
      out.push_back(a);
    }
  }
  return out;
}

DimsReport dims_compare(hall::HallAlgebra& h, unsigned cap, bool proper_support) {
  const auto cartan = h.graph().cartan();
  const std::size_t n = cartan.size();
  DimsReport rep;
  rep.graph = h.graph().name();
  std::map<std::vector<std::size_t>, std::optional<RootSystemData>> root_cache;
  std::size_t le_fail = 0, pbw_fail = 0, equal = 0, pbw_rows = 0;
  for (const auto& alpha : degrees_up_to(n, cap, proper_support)) {
    DimsRow row;
    row.alpha = alpha;
    const auto slice = serre_ideal_slice(cartan, alpha);
    row.free_dim = slice.words;
    row.ideal_rank = slice.rank;
    row.ug_dim = slice.words - slice.rank;
    row.hall_dim = h.composition_dim(alpha);
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i)
      if (alpha[i] > 0) support.push_back(i);
    auto it = root_cache.find(support);
    if (it == root_cache.end()) {
      const auto sub = restrict_cartan(cartan, support);
      it = root_cache.emplace(support, is_finite_type(sub) ? std::optional(root_system(sub)) : std::nullopt).first;
    }
    if (it->second) {
      DimVector a;
      for (auto i : support) a.push_back(alpha[i]);
      row.pbw_dim = pbw_dim(*it->second, a);
      ++pbw_rows;
    }
    row.hall_le_ug = row.hall_dim <= row.ug_dim;
    row.hall_equals_ug = row.hall_dim == row.ug_dim;
    const bool pbw_ok = !row.pbw_dim || *row.pbw_dim == row.ug_dim;
    row.pass = row.hall_le_ug && pbw_ok;
    le_fail += !row.hall_le_ug;
    pbw_fail += !pbw_ok;
    equal += row.hall_equals_ug;
    rep.rows.push_back(std::move(row));
  }
  const auto count = std::to_string(rep.rows.size());
  rep.checks.push_back({"composition_dim <= positive_part_dim", le_fail == 0,
                        std::to_string(rep.rows.size() - le_fail) + "/" + count + " degrees"});
  rep.checks.push_back({"positive_part_dim = pbw_dim on finite-type support", pbw_fail == 0,
                        std::to_string(pbw_rows - pbw_fail) + "/" + std::to_string(pbw_rows) + " degrees"});
  rep.checks.push_back({"composition_dim = positive_part_dim (recorded)", true,
                        std::to_string(equal) + "/" + count + " degrees"});
  return rep;
}

std::string dims_csv(const DimsReport& r) {
  std::ostringstream os;
  os << "# csv v1\n";
  os << "graph,alpha,free_dim,ideal_rank,ug_dim,pbw_dim,hall_dim,hall_equals_ug,verdict\n";
  for (const auto& row : r.rows)
    os << '"' << r.graph << "\",\"" << hall::dims_string(row.alpha) << "\"," << row.free_dim << ',' << row.ideal_rank
       << ',' << row.ug_dim << ',' << (row.pbw_dim ? std::to_string(*row.pbw_dim) : "") << ',' << row.hall_dim << ','
       << (row.hall_equals_ug ? "yes" : "no") << ',' << (row.pass ? "pass" : "fail") << '\n';
  return os.str();
}

nlohmann::ordered_json to_json(const DimsReport& r) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json j{{"alpha", row.alpha},       {"free_dim", row.free_dim}, {"ideal_rank", row.ideal_rank},
                             {"ug_dim", row.ug_dim},     {"pbw_dim", nullptr},       {"hall_dim", row.hall_dim},
                             {"hall_equals_ug", row.hall_equals_ug}, {"pass", row.pass}};
    if (row.pbw_dim) j["pbw_dim"] = *row.pbw_dim;
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"graph", r.graph}, {"rows", rows}, {"checks", checks}};
}

}  // namespace mckay::kacmoody
