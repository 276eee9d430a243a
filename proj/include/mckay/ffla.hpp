#pragma once

// Exact prime-field arithmetic and the small amount of linear algebra every
// other module is built on: row reduction, kernels, subspace enumeration and
// rational interpolation of point counts.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mckay::ffla {

using Residue = std::uint32_t;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

bool is_prime(std::uint64_t n);
// Smallest prime strictly greater than n.
std::uint64_t next_prime(std::uint64_t n);

// Arithmetic in F_p for a prime p < 2^16. Immutable after construction.
class PrimeField {
 public:
  static constexpr std::uint32_t kMaxModulus = 65535;

  explicit PrimeField(std::uint32_t p);

  std::uint32_t modulus() const noexcept { return p_; }
  Residue primitive_root() const noexcept { return generator_; }

  // The fixed element g^((p-1)/n) of exact multiplicative order n.
  // Throws std::invalid_argument unless n divides p - 1.
  Residue root_of_order(std::uint32_t n) const;

  Residue reduce(std::int64_t x) const noexcept {
    std::int64_t r = x % static_cast<std::int64_t>(p_);
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }
  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Residue pow(Residue a, std::uint64_t e) const noexcept;
  // Throws std::domain_error on zero.
  Residue inv(Residue a) const;
  std::uint32_t multiplicative_order(Residue a) const;

  // Smallest r in [0, p) with r^2 = a, if any.
  std::optional<Residue> sqrt(Residue a) const;

  // Representative in (-p/2, p/2].
  std::int64_t lift_symmetric(Residue a) const noexcept {
    return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : static_cast<std::int64_t>(a);
  }

  bool operator==(const PrimeField& other) const noexcept { return p_ == other.p_; }

 private:
  std::uint32_t p_;
  Residue generator_;
  std::map<std::uint32_t, Residue> root_cache_;
};

// Dense row-major matrix of residues.
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}
  FpMatrix(std::size_t rows, std::size_t cols, std::vector<Residue> entries);

  static FpMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Residue& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  Residue operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<Residue> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
  std::span<const Residue> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }

  const std::vector<Residue>& entries() const noexcept { return entries_; }

  void append_row(std::span<const Residue> values);
  FpMatrix transpose() const;
  bool is_zero() const;

  auto operator<=>(const FpMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Residue> entries_;
};

FpMatrix multiply(const FpMatrix& a, const FpMatrix& b, const PrimeField& f);
std::vector<Residue> apply(const FpMatrix& m, std::span<const Residue> v, const PrimeField& f);

struct RrefResult {
  FpMatrix form;  // reduced row echelon form, zero rows dropped
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

RrefResult rref(const FpMatrix& m, const PrimeField& f);
std::size_t rank(const FpMatrix& m, const PrimeField& f);
// Rows form a basis of {v : m v = 0}.
FpMatrix nullspace(const FpMatrix& m, const PrimeField& f);
std::optional<FpMatrix> inverse(const FpMatrix& m, const PrimeField& f);
Residue determinant(const FpMatrix& m, const PrimeField& f);

// Incrementally grown row space kept in reduced echelon form. Used wherever a
// span is built vector by vector and membership is queried along the way.
class EchelonBasis {
 public:
  EchelonBasis(std::size_t dim, const PrimeField& f) : dim_(dim), field_(&f) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return rows_.size(); }
  const std::vector<std::vector<Residue>>& rows() const noexcept { return rows_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  // Reduces v against the basis in place; returns true if the remainder is zero.
  bool reduce(std::vector<Residue>& v) const;
  bool contains(std::vector<Residue> v) const { return reduce(v); }
  // Adds v to the span; returns true if the rank grew.
  bool insert(std::vector<Residue> v);

  // Coordinates of v (assumed in the span) with respect to rows().
  std::vector<Residue> coordinates(std::span<const Residue> v) const;
  // Indices not used as pivots; they index a standard complement.
  std::vector<std::size_t> non_pivots() const;

  FpMatrix as_matrix() const;

 private:
  std::size_t dim_;
  const PrimeField* field_;
  std::vector<std::vector<Residue>> rows_;
  std::vector<std::size_t> pivots_;
};

// Number of k-dimensional subspaces of F_q^n.
std::uint64_t gaussian_binomial(unsigned n, unsigned k, std::uint64_t q);

// Streams every k-dimensional subspace of F_p^n exactly once as its RREF basis
// (k x n). Enumeration runs over pivot sets, then over the free entries.
class SubspaceEnumerator {
 public:
  SubspaceEnumerator(std::size_t ambient_dim, std::size_t sub_dim, const PrimeField& f);

  std::optional<FpMatrix> next();
  std::uint64_t total() const noexcept { return total_; }

 private:
  bool advance_pivots();
  void reset_free();

  std::size_t n_;
  std::size_t k_;
  const PrimeField* field_;
  std::uint64_t total_;
  std::vector<std::size_t> pivots_;
  std::vector<std::pair<std::size_t, std::size_t>> free_slots_;
  std::vector<Residue> free_values_;
  bool exhausted_ = false;
  bool fresh_pivots_ = true;
};

void for_each_subspace(std::size_t ambient_dim, std::size_t sub_dim, const PrimeField& f,
                       const std::function<void(const FpMatrix&)>& visit);

struct CountPoint {
  std::uint32_t prime = 0;
  std::uint64_t count = 0;
  auto operator<=>(const CountPoint&) const = default;
};

// Exact polynomial in q with rational coefficients, lowest degree first,
// remembering the point counts it was fitted to.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coefficients, std::vector<CountPoint> provenance = {});

  const std::vector<Rational>& coefficients() const noexcept { return coefficients_; }
  const std::vector<CountPoint>& provenance() const noexcept { return provenance_; }
  bool is_zero() const noexcept { return coefficients_.empty(); }
  // -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }

  Rational evaluate(const Rational& q) const;
  std::string to_string() const;

  bool operator==(const RationalPolynomial& other) const { return coefficients_ == other.coefficients_; }

 private:
  std::vector<Rational> coefficients_;
  std::vector<CountPoint> provenance_;
};

// Unique polynomial of degree < points.size() through the given (q, count)
// pairs. Throws std::invalid_argument for fewer than two points or repeated
// primes.
RationalPolynomial interpolate_counts(std::span<const CountPoint> points);

std::string to_string(const Rational& r);

// Exact rank over Q.
std::size_t rank_over_q(std::vector<std::vector<Rational>> rows);
// Exact integer determinant (fraction-free elimination).
BigInt integer_determinant(const std::vector<std::vector<std::int64_t>>& m);

}  // namespace mckay::ffla
