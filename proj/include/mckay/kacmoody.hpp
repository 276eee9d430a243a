#pragma once

// U(g+) of a symmetric Cartan matrix as the free algebra on e_i modulo the
// Serre relations, graded piece by graded piece; positive roots of finite
// type by reflection closure and PBW counts.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mckay/check.hpp"
#include "mckay/ffla.hpp"
#include "mckay/hall.hpp"

namespace mckay::kacmoody {

using ffla::Rational;
using hall::DimVector;
using IntMatrix = std::vector<std::vector<std::int64_t>>;
using Word = std::vector<std::uint8_t>;

struct FreeElement {
  std::map<Word, Rational> terms;  // no zero coefficients

  void add(const Word& w, const Rational& c);
  DimVector degree(std::size_t rank) const;  // of the first term; all terms share it
  bool operator==(const FreeElement&) const = default;
};

// Words of content alpha in lexicographic order; their count is the
// multinomial coefficient of alpha.
std::vector<Word> words_of_content(const DimVector& alpha);

// sum_k (-1)^k e_i^(k) e_j e_i^(1 - a_ij - k).
FreeElement serre_element(std::size_t i, std::size_t j, const IntMatrix& cartan);

struct SerreIdealSlice {
  DimVector alpha;
  std::size_t words = 0;
  std::vector<std::vector<Rational>> spanning;  // u S_ij v over words of alpha
  std::size_t rank = 0;
};

SerreIdealSlice serre_ideal_slice(const IntMatrix& cartan, const DimVector& alpha);

// Throws BudgetExceeded if |alpha| exceeds the cap.
std::size_t positive_part_dim(const IntMatrix& cartan, const DimVector& alpha, unsigned cap = 6);

// All leading principal minors positive.
bool is_finite_type(const IntMatrix& cartan);

struct RootSystemData {
  IntMatrix cartan;
  std::vector<DimVector> positive_roots;  // sorted by height, then lexicographically
};

// Throws ConfigError unless the Cartan matrix is of finite type.
RootSystemData root_system(const IntMatrix& cartan);

std::uint64_t pbw_dim(const RootSystemData& roots, const DimVector& alpha);

// All nonzero alpha with total degree <= cap, ordered by total degree and
// then lexicographically from the largest; with proper_support only those
// whose support is a proper subset of the vertices.
std::vector<DimVector> degrees_up_to(std::size_t rank, unsigned cap, bool proper_support);

struct DimsRow {
  DimVector alpha;
  std::size_t free_dim = 0;
  std::size_t ideal_rank = 0;
  std::size_t ug_dim = 0;
  std::optional<std::uint64_t> pbw_dim;  // finite-type support only
  std::size_t hall_dim = 0;
  bool hall_le_ug = false;
  bool hall_equals_ug = false;  // recorded, not asserted
  bool pass = false;
};

struct DimsReport {
  std::string graph;
  std::vector<DimsRow> rows;
  CheckList checks;
};

// Composition dims against U(g+) dims for every alpha of degrees_up_to;
// failing rows are reported in checks.
DimsReport dims_compare(hall::HallAlgebra& h, unsigned cap, bool proper_support);

std::string dims_csv(const DimsReport& r);
nlohmann::ordered_json to_json(const DimsReport& r);

}  // namespace mckay::kacmoody
