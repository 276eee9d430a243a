#pragma once

// The polynomial algebra A = F_p[x, y] with its G-action, the ideal n
// generated by positive-degree invariants, the two distinguished copies of
// each nontrivial irreducible inside m/n, the point ideals I(W) = A.W + n,
// and Tor_i(O, O_0) through the Koszul complex.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mckay/binpoly.hpp"
#include "mckay/chartab.hpp"
#include "mckay/check.hpp"
#include "mckay/ffla.hpp"

namespace mckay::kleinian {

using binpoly::FiniteMatrixGroup;
using chartab::CharacterTable;
using ffla::EchelonBasis;
using ffla::FpMatrix;
using ffla::PrimeField;
using ffla::Residue;

// coeffs[i] is the coefficient of x^(degree-i) y^i.
struct HomogeneousPoly {
  unsigned degree = 0;
  std::vector<Residue> coeffs;

  std::string to_string(const PrimeField& f) const;
};

// A up to a degree cap. Action matrices are built on demand; column j of
// action(g, d) is the image of the j-th monomial of degree d, where
// (g.f)(v) = f(g^-1 v), so g.x = a x + b y and g.y = c x + d y for
// g^-1 = [[a, b], [c, d]].
class EquivariantPolyAlgebra {
 public:
  EquivariantPolyAlgebra(const FiniteMatrixGroup& group, unsigned degree_cap);

  const FiniteMatrixGroup& group() const noexcept { return *group_; }
  const PrimeField& field() const noexcept { return group_->field(); }
  unsigned degree_cap() const noexcept { return cap_; }
  const FpMatrix& action(std::size_t element, unsigned degree) const;

 private:
  const FiniteMatrixGroup* group_;
  unsigned cap_;
  mutable std::vector<std::vector<FpMatrix>> cache_;  // [degree][element]
};

struct InvariantIdealN {
  std::vector<HomogeneousPoly> generators;
  std::vector<FpMatrix> spans;  // spans[d]: RREF basis of n in degree d (rows)
  unsigned saturation_degree = 0;  // least d with n_d = A_d
};

// Throws ConfigError if the cap is below 2|G| and CheckFailure if the ideal
// does not fill a whole degree below the cap.
InvariantIdealN invariant_ideal(const EquivariantPolyAlgebra& alg);

// The finite-dimensional quotient A/n in the basis of standard monomials
// (those not leading any row of n_d), with x, y and G acting on it.
class CoinvariantQuotient {
 public:
  CoinvariantQuotient(const EquivariantPolyAlgebra& alg, const InvariantIdealN& n);

  std::size_t dim() const noexcept { return dim_; }
  unsigned top_degree() const noexcept { return static_cast<unsigned>(offsets_.size()) - 1; }
  std::size_t offset(unsigned d) const { return offsets_[d]; }
  std::size_t block_dim(unsigned d) const { return monomials_[d].size(); }
  const std::vector<std::size_t>& monomials(unsigned d) const { return monomials_[d]; }
  unsigned degree_of(std::size_t index) const;

  const FpMatrix& x() const noexcept { return x_; }
  const FpMatrix& y() const noexcept { return y_; }
  // Action of a group element on the degree-d block.
  const FpMatrix& group_block(std::size_t element, unsigned d) const { return blocks_[element][d]; }
  std::vector<Residue> act(std::size_t element, std::span<const Residue> v) const;
  std::vector<Residue> character() const;  // per class of the group's classes
  std::vector<HomogeneousPoly> as_polynomials(std::span<const Residue> v) const;

  const FiniteMatrixGroup& group() const noexcept { return *group_; }
  const PrimeField& field() const noexcept { return group_->field(); }

 private:
  const FiniteMatrixGroup* group_;
  std::size_t dim_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::size_t>> monomials_;
  FpMatrix x_, y_;
  std::vector<std::vector<FpMatrix>> blocks_;  // [element][degree]
};

struct IsotypicPair {
  std::size_t pi = 0;
  unsigned dim = 0;
  std::vector<unsigned> copy_degrees;  // degrees of all copies of pi in m/n, sorted
  unsigned degree_prime = 0;
  unsigned degree_second = 0;
  FpMatrix basis_prime;   // rows: vectors of A/n spanning pi'
  FpMatrix basis_second;  // rows: vectors of A/n spanning pi''
  FpMatrix iso;           // G-isomorphism pi' -> pi'' in these bases (column i = image of row i)
  std::vector<std::vector<HomogeneousPoly>> representatives_prime;
  std::vector<std::vector<HomogeneousPoly>> representatives_second;
};

struct IsotypicDecomposition {
  std::shared_ptr<const CoinvariantQuotient> quotient;
  const CharacterTable* table = nullptr;
  std::vector<IsotypicPair> pairs;  // one per nontrivial irreducible, in table order
  CheckList checks;

  const IsotypicPair& pair(std::size_t pi) const;
};

// Throws ConfigError for CyclicA(2) and CheckFailure if some nontrivial
// irreducible does not occur 2 dim(pi) times, with the middle two copies
// either alone in their degrees or sharing one degree.
IsotypicDecomposition isotypic_pairs(const EquivariantPolyAlgebra& alg, const InvariantIdealN& n,
                                     const CharacterTable& t, std::uint64_t seed = 1);

struct ChartParameter {
  Residue lambda = 1;
  Residue mu = 0;
  bool boundary() const noexcept { return lambda == 0 || mu == 0; }
  bool operator==(const ChartParameter&) const = default;
};

struct PointIdeal {
  std::size_t pi = 0;
  std::optional<std::size_t> rho;  // second irreducible for intersection ideals
  ChartParameter parameter;
  std::optional<ChartParameter> rho_parameter;
  FpMatrix generators;  // rows: the vectors of W in A/n
  std::shared_ptr<EchelonBasis> span;  // I(W)/n inside A/n
  unsigned working_degree = 0;  // multiplication rounds until two stable increments
  std::size_t colength = 0;
  std::vector<Residue> quotient_character;
  bool regular = false;

  bool valid(std::size_t group_order) const { return colength == group_order && regular; }
};

// W = {lambda v' + mu T v'} inside pi' + pi''.
PointIdeal point_ideal(const IsotypicDecomposition& d, std::size_t pi, ChartParameter param);
// W = W_pi(s) + W_rho(t), used for points on two curves.
PointIdeal intersection_ideal(const IsotypicDecomposition& d, std::size_t pi, ChartParameter s, std::size_t rho,
                              ChartParameter t);

struct TorTriple {
  std::array<std::size_t, 3> dims{};
  std::array<std::vector<Residue>, 3> characters;
  std::array<std::vector<unsigned>, 3> multiplicities;
  bool differential_square_zero = false;
  bool euler_characteristic_zero = false;
};

// Throws CheckFailure if the ideal's colength is not |G|.
TorTriple koszul_tor(const IsotypicDecomposition& d, const PointIdeal& ideal);

struct TorSample {
  std::string kind;  // "generic", "boundary", "degenerate", "intersection"
  PointIdeal ideal;
  std::optional<TorTriple> tor;
  CheckList checks;
  bool asserted = false;  // boundary and degenerate samples are reported only
};

struct TorSuiteOptions {
  unsigned generic_samples = 3;
  bool boundary = true;
  bool intersections = true;
};

struct TorSuite {
  std::vector<TorSample> samples;
  CheckList checks;  // asserted verdicts only
};

// Least admissible modulus >= base whose chart P^1 has room for `samples`
// interior points beside the (at most `neighbours`) points where a curve
// meets its neighbours.
std::uint32_t tor_modulus(const binpoly::GroupSpec& spec, std::uint32_t base, unsigned samples, unsigned neighbours);

TorSuite tor_suite(const IsotypicDecomposition& d, const chartab::McKayGraphData& graph, const TorSuiteOptions& opts);

nlohmann::ordered_json tor_row(const TorSample& s, const std::string& family);
std::string tor_csv(const TorSuite& suite, const std::string& family);

}  // namespace mckay::kleinian
