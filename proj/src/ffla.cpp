#include "mckay/ffla.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mckay::ffla {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

namespace {

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

PrimeField::PrimeField(std::uint32_t p) : p_(p), generator_(0) {
  if (p > kMaxModulus || !is_prime(p))
    throw std::invalid_argument("PrimeField: modulus " + std::to_string(p) + " is not a prime below 2^16");
  if (p == 2) {
    generator_ = 1;
  } else {
    const auto factors = prime_factors(p - 1);
    for (Residue g = 2; g < p; ++g) {
      bool ok = true;
      for (auto q : factors) {
        if (pow(g, (p - 1) / q) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        generator_ = g;
        break;
      }
    }
  }
  for (std::uint32_t n = 1; n <= p - 1; ++n)
    if ((p - 1) % n == 0) root_cache_.emplace(n, pow(generator_, (p - 1) / n));
}

Residue PrimeField::root_of_order(std::uint32_t n) const {
  auto it = root_cache_.find(n);
  if (it == root_cache_.end())
    throw std::invalid_argument("PrimeField: no element of order " + std::to_string(n) + " mod " +
                                std::to_string(p_));
  return it->second;
}

Residue PrimeField::pow(Residue a, std::uint64_t e) const noexcept {
  Residue result = 1 % p_;
  Residue base = a % p_;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Residue PrimeField::inv(Residue a) const {
  if (a % p_ == 0) throw std::domain_error("PrimeField: inverse of zero");
  return pow(a, p_ - 2);
}

std::uint32_t PrimeField::multiplicative_order(Residue a) const {
  if (a % p_ == 0) throw std::domain_error("PrimeField: order of zero");
  std::uint32_t k = 1;
  Residue x = a;
  while (x != 1) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

std::optional<Residue> PrimeField::sqrt(Residue a) const {
  a %= p_;
  for (Residue r = 0; r < p_; ++r)
    if (mul(r, r) == a) return r;
  return std::nullopt;
}

FpMatrix::FpMatrix(std::size_t rows, std::size_t cols, std::vector<Residue> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) throw std::invalid_argument("FpMatrix: entry count mismatch");
}

FpMatrix FpMatrix::identity(std::size_t n) {
  FpMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

void FpMatrix::append_row(std::span<const Residue> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw std::invalid_argument("FpMatrix: row length mismatch");
  entries_.insert(entries_.end(), values.begin(), values.end());
  ++rows_;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool FpMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](Residue x) { return x == 0; });
}

FpMatrix multiply(const FpMatrix& a, const FpMatrix& b, const PrimeField& f) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  FpMatrix out(a.rows(), b.cols());
  const std::uint64_t p = f.modulus();
  // p < 2^16, so products are < 2^32 and sums of up to 2^32 of them fit.
  std::vector<std::uint64_t> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const std::uint64_t c = a(i, k);
      if (c == 0) continue;
      const auto row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) acc[j] += c * row[j];
    }
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = static_cast<Residue>(acc[j] % p);
  }
  return out;
}

std::vector<Residue> apply(const FpMatrix& m, std::span<const Residue> v, const PrimeField& f) {
  if (m.cols() != v.size()) throw std::invalid_argument("apply: shape mismatch");
  std::vector<Residue> out(m.rows(), 0);
  const std::uint64_t p = f.modulus();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::uint64_t acc = 0;
    const auto row = m.row(i);
    for (std::size_t k = 0; k < m.cols(); ++k) acc += static_cast<std::uint64_t>(row[k]) * v[k];
    out[i] = static_cast<Residue>(acc % p);
  }
  return out;
}

RrefResult rref(const FpMatrix& m, const PrimeField& f) {
  FpMatrix a = m;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pr = r;
    while (pr < rows && a(pr, c) == 0) ++pr;
    if (pr == rows) continue;
    if (pr != r)
      for (std::size_t k = 0; k < cols; ++k) std::swap(a(pr, k), a(r, k));
    const Residue iv = f.inv(a(r, c));
    for (std::size_t k = c; k < cols; ++k) a(r, k) = f.mul(a(r, k), iv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Residue factor = a(i, c);
      for (std::size_t k = c; k < cols; ++k) a(i, k) = f.sub(a(i, k), f.mul(factor, a(r, k)));
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<Residue> kept(a.entries().begin(), a.entries().begin() + static_cast<std::ptrdiff_t>(r * cols));
  return {FpMatrix(r, cols, std::move(kept)), r, std::move(pivots)};
}

std::size_t rank(const FpMatrix& m, const PrimeField& f) { return rref(m, f).rank; }

FpMatrix nullspace(const FpMatrix& m, const PrimeField& f) {
  const auto red = rref(m, f);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : red.pivots) is_pivot[c] = true;
  FpMatrix out(0, n);
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Residue> v(n, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < red.rank; ++i) v[red.pivots[i]] = f.neg(red.form(i, free));
    out.append_row(v);
  }
  return out;
}

std::optional<FpMatrix> inverse(const FpMatrix& m, const PrimeField& f) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse: matrix not square");
  FpMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  const auto red = rref(aug, f);
  if (red.rank < n || red.pivots[n - 1] != n - 1) return std::nullopt;
  FpMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = red.form(i, n + j);
  return out;
}

Residue determinant(const FpMatrix& m, const PrimeField& f) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  FpMatrix a = m;
  Residue det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pr = c;
    while (pr < n && a(pr, c) == 0) ++pr;
    if (pr == n) return 0;
    if (pr != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(pr, k), a(c, k));
      det = f.neg(det);
    }
    det = f.mul(det, a(c, c));
    const Residue iv = f.inv(a(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      const Residue factor = f.mul(a(i, c), iv);
      for (std::size_t k = c; k < n; ++k) a(i, k) = f.sub(a(i, k), f.mul(factor, a(c, k)));
    }
  }
  return det;
}

bool EchelonBasis::reduce(std::vector<Residue>& v) const {
  const auto& f = *field_;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Residue factor = v[pivots_[i]];
    if (factor == 0) continue;
    const auto& row = rows_[i];
    for (std::size_t k = pivots_[i]; k < dim_; ++k)
      if (row[k] != 0) v[k] = f.sub(v[k], f.mul(factor, row[k]));
  }
  return std::all_of(v.begin(), v.end(), [](Residue x) { return x == 0; });
}

bool EchelonBasis::insert(std::vector<Residue> v) {
  if (v.size() != dim_) throw std::invalid_argument("EchelonBasis: vector length mismatch");
  if (reduce(v)) return false;
  const auto& f = *field_;
  std::size_t pivot = 0;
  while (v[pivot] == 0) ++pivot;
  const Residue iv = f.inv(v[pivot]);
  for (auto& x : v) x = f.mul(x, iv);
  // Keep the basis fully reduced: clear the new pivot column from older rows.
  for (auto& row : rows_) {
    const Residue factor = row[pivot];
    if (factor == 0) continue;
    for (std::size_t k = pivot; k < dim_; ++k)
      if (v[k] != 0) row[k] = f.sub(row[k], f.mul(factor, v[k]));
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pivot);
  const auto idx = pos - pivots_.begin();
  pivots_.insert(pos, pivot);
  rows_.insert(rows_.begin() + idx, std::move(v));
  return true;
}

std::vector<Residue> EchelonBasis::coordinates(std::span<const Residue> v) const {
  std::vector<Residue> out(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) out[i] = v[pivots_[i]];
  return out;
}

std::vector<std::size_t> EchelonBasis::non_pivots() const {
  std::vector<std::size_t> out;
  std::size_t j = 0;
  for (std::size_t c = 0; c < dim_; ++c) {
    if (j < pivots_.size() && pivots_[j] == c) {
      ++j;
      continue;
    }
    out.push_back(c);
  }
  return out;
}

FpMatrix EchelonBasis::as_matrix() const {
  FpMatrix m(0, dim_);
  for (const auto& r : rows_) m.append_row(r);
  return m;
}

std::uint64_t gaussian_binomial(unsigned n, unsigned k, std::uint64_t q) {
  if (k > n) return 0;
  BigInt num = 1, den = 1;
  for (unsigned i = 0; i < k; ++i) {
    num *= BigInt(boost::multiprecision::pow(BigInt(q), n - i)) - 1;
    den *= BigInt(boost::multiprecision::pow(BigInt(q), k - i)) - 1;
  }
  return static_cast<std::uint64_t>(num / den);
}

SubspaceEnumerator::SubspaceEnumerator(std::size_t ambient_dim, std::size_t sub_dim, const PrimeField& f)
    : n_(ambient_dim), k_(sub_dim), field_(&f), total_(0) {
  if (sub_dim > ambient_dim)
    throw std::invalid_argument("enumerate_subspaces: sub_dim " + std::to_string(sub_dim) + " exceeds ambient " +
                                std::to_string(ambient_dim));
  total_ = gaussian_binomial(static_cast<unsigned>(n_), static_cast<unsigned>(k_), f.modulus());
  pivots_.resize(k_);
  std::iota(pivots_.begin(), pivots_.end(), std::size_t{0});
  reset_free();
}

void SubspaceEnumerator::reset_free() {
  free_slots_.clear();
  for (std::size_t r = 0; r < k_; ++r) {
    for (std::size_t c = pivots_[r] + 1; c < n_; ++c)
      if (std::find(pivots_.begin(), pivots_.end(), c) == pivots_.end()) free_slots_.emplace_back(r, c);
  }
  free_values_.assign(free_slots_.size(), 0);
  fresh_pivots_ = true;
}

bool SubspaceEnumerator::advance_pivots() {
  if (k_ == 0) return false;
  std::size_t i = k_;
  while (i > 0) {
    --i;
    if (pivots_[i] < n_ - k_ + i) {
      ++pivots_[i];
      for (std::size_t j = i + 1; j < k_; ++j) pivots_[j] = pivots_[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::optional<FpMatrix> SubspaceEnumerator::next() {
  if (exhausted_) return std::nullopt;
  if (!fresh_pivots_) {
    // Odometer over the free entries, then move to the next pivot set.
    std::size_t i = 0;
    const Residue p = field_->modulus();
    while (i < free_values_.size()) {
      if (++free_values_[i] < p) break;
      free_values_[i] = 0;
      ++i;
    }
    if (i == free_values_.size()) {
      if (!advance_pivots()) {
        exhausted_ = true;
        return std::nullopt;
      }
      reset_free();
    }
  }
  fresh_pivots_ = false;
  FpMatrix m(k_, n_);
  for (std::size_t r = 0; r < k_; ++r) m(r, pivots_[r]) = 1;
  for (std::size_t s = 0; s < free_slots_.size(); ++s) m(free_slots_[s].first, free_slots_[s].second) = free_values_[s];
  return m;
}

void for_each_subspace(std::size_t ambient_dim, std::size_t sub_dim, const PrimeField& f,
                       const std::function<void(const FpMatrix&)>& visit) {
  SubspaceEnumerator e(ambient_dim, sub_dim, f);
  while (auto m = e.next()) visit(*m);
}

RationalPolynomial::RationalPolynomial(std::vector<Rational> coefficients, std::vector<CountPoint> provenance)
    : coefficients_(std::move(coefficients)), provenance_(std::move(provenance)) {
  while (!coefficients_.empty() && coefficients_.back() == 0) coefficients_.pop_back();
}

Rational RationalPolynomial::evaluate(const Rational& q) const {
  Rational acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * q + *it;
  return acc;
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string RationalPolynomial::to_string() const {
  if (coefficients_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t d = coefficients_.size(); d-- > 0;) {
    const Rational& c = coefficients_[d];
    if (c == 0) continue;
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (d == 0) {
      os << mckay::ffla::to_string(mag);
      continue;
    }
    if (mag != 1) os << mckay::ffla::to_string(mag) << "*";
    os << "q";
    if (d >= 2) os << "^" << d;
  }
  return os.str();
}

RationalPolynomial interpolate_counts(std::span<const CountPoint> points) {
  if (points.size() < 2) throw std::invalid_argument("interpolate_counts: need at least two points");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i].prime == points[j].prime)
        throw std::invalid_argument("interpolate_counts: duplicate prime " + std::to_string(points[i].prime));

  // Newton divided differences, then expansion into the monomial basis.
  const std::size_t n = points.size();
  std::vector<Rational> xs(n), dd(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = points[i].prime;
    dd[i] = Rational(BigInt(points[i].count));
  }
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);

  std::vector<Rational> coeffs(n, Rational(0));
  std::vector<Rational> basis{Rational(1)};  // prod_{m<i} (q - x_m)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < basis.size(); ++d) coeffs[d] += dd[i] * basis[d];
    std::vector<Rational> next(basis.size() + 1, Rational(0));
    for (std::size_t d = 0; d < basis.size(); ++d) {
      next[d + 1] += basis[d];
      next[d] -= xs[i] * basis[d];
    }
    basis = std::move(next);
  }
  return RationalPolynomial(std::move(coeffs), std::vector<CountPoint>(points.begin(), points.end()));
}

std::size_t rank_over_q(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pr = r;
    while (pr < rows.size() && rows[pr][c] == 0) ++pr;
    if (pr == rows.size()) continue;
    std::swap(rows[pr], rows[r]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      const Rational factor = rows[i][c] / rows[r][c];
      for (std::size_t k = c; k < cols; ++k) rows[i][k] -= factor * rows[r][k];
    }
    ++r;
  }
  return r;
}

BigInt integer_determinant(const std::vector<std::vector<std::int64_t>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw std::invalid_argument("integer_determinant: matrix not square");
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  }
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t pr = k + 1;
      while (pr < n && a[pr][k] == 0) ++pr;
      if (pr == n) return 0;
      std::swap(a[pr], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace mckay::ffla
