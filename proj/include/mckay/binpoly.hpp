#pragma once

// Finite subgroups of SL_2 (types A, D, E) realised as explicit 2x2 matrix
// groups over a prime field, with their conjugacy classes.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mckay/ffla.hpp"

namespace mckay::binpoly {

using ffla::PrimeField;
using ffla::Residue;

enum class Family { CyclicA, BinaryDihedralD, BinaryTetrahedralE6, BinaryOctahedralE7, BinaryIcosahedralE8 };

struct GroupSpec {
  Family family = Family::CyclicA;
  unsigned n = 0;  // only meaningful for CyclicA (n >= 2) and BinaryDihedralD (n >= 2)

  static GroupSpec cyclic(unsigned n);
  static GroupSpec binary_dihedral(unsigned n);
  static GroupSpec e6() { return {Family::BinaryTetrahedralE6, 0}; }
  static GroupSpec e7() { return {Family::BinaryOctahedralE7, 0}; }
  static GroupSpec e8() { return {Family::BinaryIcosahedralE8, 0}; }

  // Parses "A3", "A 3", "D2", "E6", ... Throws ConfigError.
  static GroupSpec parse(const std::string& text);

  std::uint32_t expected_order() const;
  // Least common multiple of element orders.
  std::uint32_t exponent() const;
  // "A3", "D2", "E6", ...
  std::string label() const;

  bool operator==(const GroupSpec&) const = default;
};

// Row-major 2x2 matrix [[a, b], [c, d]] of determinant one.
struct GroupElement {
  std::array<Residue, 4> m{};

  Residue trace(const PrimeField& f) const { return f.add(m[0], m[3]); }
  Residue det(const PrimeField& f) const { return f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2])); }
  auto operator<=>(const GroupElement&) const = default;
};

GroupElement mul(const GroupElement& a, const GroupElement& b, const PrimeField& f);

// Smallest prime p with p = 1 mod exponent, p not dividing |G|, and the square
// roots each family needs (of -1 for D/E, of 2 for E7, of 5 for E8).
// `after` skips primes <= after, giving the next admissible modulus.
PrimeField choose_modulus(const GroupSpec& spec, std::uint32_t after = 0);
bool is_admissible_modulus(const GroupSpec& spec, std::uint32_t p);

class FiniteMatrixGroup {
 public:
  // Builds the element list for the family, verifies closure and the order.
  // Throws CheckFailure on any mismatch.
  FiniteMatrixGroup(const GroupSpec& spec, const PrimeField& field);

  const GroupSpec& spec() const noexcept { return spec_; }
  const PrimeField& field() const noexcept { return field_; }
  std::size_t order() const noexcept { return elements_.size(); }
  const std::vector<GroupElement>& elements() const noexcept { return elements_; }
  const GroupElement& element(std::size_t i) const { return elements_[i]; }
  std::size_t identity() const noexcept { return identity_; }
  std::size_t inverse(std::size_t i) const { return inverse_[i]; }
  std::size_t product(std::size_t i, std::size_t j) const { return table_[i * elements_.size() + j]; }
  std::size_t index_of(const GroupElement& g) const;
  // Number of products that fell outside the element list during the
  // closure check (always zero for a constructed group).
  std::size_t closure_additions() const noexcept { return closure_additions_; }
  std::uint32_t element_order(std::size_t i) const;

 private:
  GroupSpec spec_;
  PrimeField field_;
  std::vector<GroupElement> elements_;
  std::size_t identity_ = 0;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> table_;
  std::size_t closure_additions_ = 0;
};

struct ConjugacyClasses {
  std::vector<std::size_t> class_of;        // per element
  std::vector<std::size_t> sizes;           // per class
  std::vector<std::size_t> representatives; // element index per class
  std::vector<std::size_t> inverse_class;   // class of g^-1 for g in class j
  std::size_t identity_class = 0;

  std::size_t count() const noexcept { return sizes.size(); }
};

ConjugacyClasses conjugacy_classes(const FiniteMatrixGroup& g);

}  // namespace mckay::binpoly
