#pragma once

// The Euler-characteristic Hall algebra on finitely supported functions on
// iso-classes of double representations: structure constants by counting
// over several primes and evaluating the interpolated polynomial at q = 1.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "mckay/chartab.hpp"
#include "mckay/dquiver.hpp"
#include "mckay/ffla.hpp"

namespace mckay::hall {

using dquiver::ClassKey;
using dquiver::DimVector;
using dquiver::SimplyLacedGraph;
using ffla::Rational;

// Quiver of a McKay graph (vertices in character order) and of its finite
// part (the trivial vertex removed). Multiple edges are rejected.
SimplyLacedGraph quiver_graph(const chartab::McKayGraphData& g);
SimplyLacedGraph finite_quiver_graph(const chartab::McKayGraphData& g);

// Basis element: class `index` among the classes of `dims`, classes of one
// dim vector being ordered by their rank-profile key.
struct HallTerm {
  DimVector dims;
  std::size_t index = 0;
  auto operator<=>(const HallTerm&) const = default;
};

struct HallElement {
  std::map<HallTerm, Rational> terms;  // no zero coefficients

  bool is_zero() const noexcept { return terms.empty(); }
  Rational coefficient(const HallTerm& t) const;
  void add(const HallTerm& t, const Rational& c);
  HallElement& operator+=(const HallElement& o);
  HallElement& operator-=(const HallElement& o);
  HallElement operator*(const Rational& c) const;
  bool operator==(const HallElement&) const = default;
};

struct EulerConstantRecord {
  HallTerm a, b, c;
  std::vector<ffla::CountPoint> samples;
  ffla::RationalPolynomial polynomial;
  std::uint32_t held_out = 0;
  std::uint64_t held_out_count = 0;
  Rational predicted;
  bool held_out_ok = false;
  Rational value;  // polynomial at q = 1
  bool integral = false;

  bool ok() const noexcept { return held_out_ok && integral; }
};

struct HallOptions {
  std::vector<std::uint32_t> primes{2, 3, 5};
  std::uint32_t held_out = 7;
  dquiver::Budget budget{};
};

// Throws ConfigError unless there are >= 3 distinct primes and the held-out
// prime is a different prime.
void validate_primes(const std::vector<std::uint32_t>& primes, std::uint32_t held_out);

struct SerreResult {
  std::size_t i = 0, j = 0;
  std::int64_t a_ij = 0;
  DimVector degree;
  HallElement value;
  std::vector<HallElement> terms;  // (-1)^k th_i^(k) th_j th_i^(n-k), k = 0..n
  bool zero = false;
};

class HallAlgebra {
 public:
  HallAlgebra(SimplyLacedGraph graph, HallOptions options = {});

  const SimplyLacedGraph& graph() const noexcept { return graph_; }
  const HallOptions& options() const noexcept { return options_; }

  std::size_t class_count(const DimVector& dims);
  const ClassKey& key(const HallTerm& t);
  std::string label(const HallTerm& t);
  // Index of the class with the given key in dims; throws if absent.
  std::size_t index_of_key(const DimVector& dims, const ClassKey& key);
  // Representative of a class at the first sample prime.
  const dquiver::DoubleRep& representative(const HallTerm& t);

  HallElement unit();
  HallElement theta(std::size_t vertex);
  HallElement divided_power(std::size_t vertex, unsigned k);

  // chi(G_AB^C); throws CheckFailure if the held-out prediction fails or the
  // value at 1 is not an integer.
  const EulerConstantRecord& euler_hall_constant(const HallTerm& a, const HallTerm& b, const HallTerm& c);
  HallElement product(const HallElement& f, const HallElement& g);
  HallElement product(const std::vector<HallElement>& factors);

  SerreResult serre_check(std::size_t i, std::size_t j);

  // Dimension of the span of products of theta_i (i in generators) in the
  // given degree; an empty generator list means all vertices.
  std::size_t composition_dim(const DimVector& degree, const std::vector<std::size_t>& generators = {});

  // Every record computed so far, in canonical order.
  const std::map<std::tuple<HallTerm, HallTerm, HallTerm>, EulerConstantRecord>& records() const noexcept {
    return records_;
  }

 private:
  struct Piece {
    std::vector<ClassKey> keys;                                // canonical order
    std::map<std::uint32_t, std::vector<std::size_t>> ids;     // prime -> canonical -> catalogue id
    std::map<std::uint32_t, std::vector<std::size_t>> lookup;  // prime -> catalogue id -> canonical
  };

  dquiver::RepContext& context(std::uint32_t q);
  Piece& piece(const DimVector& dims);
  const std::vector<std::size_t>& ids_at(const DimVector& dims, std::uint32_t q);
  const std::vector<std::size_t>& canonical_at(const DimVector& dims, std::uint32_t q);

  SimplyLacedGraph graph_;
  HallOptions options_;
  std::map<std::uint32_t, std::unique_ptr<dquiver::RepContext>> contexts_;
  std::map<DimVector, Piece> pieces_;
  // (q, dims A, dims B, dims C, canonical C) -> counts[canonical A][canonical B]
  std::map<std::tuple<std::uint32_t, DimVector, DimVector, DimVector, std::size_t>,
           std::vector<std::vector<std::uint64_t>>>
      counts_;
  std::map<std::tuple<HallTerm, HallTerm, HallTerm>, EulerConstantRecord> records_;
  std::map<std::pair<std::vector<std::size_t>, DimVector>, std::vector<std::vector<Rational>>> spans_;
};

nlohmann::ordered_json to_json(HallAlgebra& h, const HallElement& e);
nlohmann::ordered_json to_json(HallAlgebra& h, const EulerConstantRecord& r);
nlohmann::ordered_json to_json(HallAlgebra& h, const SerreResult& s);

std::string dims_string(const DimVector& d);
std::string euler_csv(HallAlgebra& h);
std::string serre_csv(const std::vector<SerreResult>& results, const std::string& family);

}  // namespace mckay::hall
