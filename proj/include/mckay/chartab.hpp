#pragma once

// Irreducible characters mod p (Burnside-Dixon), tensor multiplicities with
// the defining representation, and the McKay graph with its Cartan matrices.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mckay/binpoly.hpp"
#include "mckay/check.hpp"
#include "mckay/ffla.hpp"

namespace mckay::chartab {

using binpoly::ConjugacyClasses;
using binpoly::FiniteMatrixGroup;
using ffla::PrimeField;
using ffla::Residue;

using IntMatrix = std::vector<std::vector<std::int64_t>>;

// Characters are ordered canonically: trivial first, then by degree, and
// within one degree by the lexicographically least tensor-multiplicity
// matrix. The ordering therefore does not depend on the prime or the seed.
struct CharacterTable {
  PrimeField field{2};
  ConjugacyClasses classes;
  std::uint32_t group_order = 0;
  std::vector<unsigned> degrees;
  std::vector<std::vector<Residue>> values;  // values[character][class]
  std::size_t trivial = 0;
  std::optional<std::size_t> defining;  // set when the natural 2-dim representation is irreducible
  std::vector<Residue> tau;              // trace of the natural representation per class
  std::uint64_t seed = 0;
  unsigned splitting_rounds = 0;

  std::size_t size() const noexcept { return degrees.size(); }
};

// Throws CheckFailure when splitting does not finish within the retry budget
// or a degree cannot be lifted.
CharacterTable character_table(const FiniteMatrixGroup& g, const ConjugacyClasses& classes, std::uint64_t seed = 1);

// <f, chi> = (1/|G|) sum_j |C_j| f(g_j) chi(g_j^-1), lifted to [0, p).
std::uint32_t inner_product(const CharacterTable& t, std::span<const Residue> class_function, std::size_t chi);
// Multiplicities of every irreducible in a class function, each validated to
// lie in [0, bound].
std::vector<unsigned> decompose(const CharacterTable& t, std::span<const Residue> class_function, unsigned bound,
                                const std::string& stage);

CheckList verify_table(const CharacterTable& t, const FiniteMatrixGroup& g);

struct TensorMultiplicities {
  IntMatrix m;  // m[pi][rho] = multiplicity of pi in rho (x) tau
};

TensorMultiplicities tensor_multiplicities(const CharacterTable& t);

struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  unsigned multiplicity = 1;
};

struct McKayGraphData {
  std::size_t vertex_count = 0;
  std::size_t trivial = 0;
  std::vector<unsigned> dims;
  std::vector<Edge> edges;
  IntMatrix affine_cartan;
  IntMatrix finite_cartan;
  std::vector<std::size_t> finite_vertices;  // original index of each finite-Cartan row
  std::string shape;                         // "cycle", "D-shape", "E-shape"
  std::string expected_diagram;              // e.g. "affine E6"
  ffla::BigInt affine_determinant;
  std::size_t affine_kernel_dim = 0;
  std::vector<ffla::BigInt> leading_minors;
  CheckList checks;
};

// Expected affine diagram of a family as an adjacency matrix.
IntMatrix affine_diagram(const binpoly::GroupSpec& spec);
std::string affine_diagram_name(const binpoly::GroupSpec& spec);
// Backtracking isomorphism test for small weighted graphs.
bool graphs_isomorphic(const IntMatrix& a, const IntMatrix& b);

// Builds the graph and Cartan data; throws CheckFailure if any invariant
// fails or the graph is not the expected affine diagram.
McKayGraphData mckay_graph(const TensorMultiplicities& m, const CharacterTable& t, const binpoly::GroupSpec& spec);

std::string chartable_csv(const CharacterTable& t, const FiniteMatrixGroup& g);
std::string mckay_csv(const TensorMultiplicities& m, const CharacterTable& t);

}  // namespace mckay::chartab
