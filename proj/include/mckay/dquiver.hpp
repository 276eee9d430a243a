#pragma once

// Double representations of a simply laced graph over F_q with the relation
// sum_j x_ij x_ji = 0 at every vertex: iso-class enumeration by orbit search
// and subrepresentation counting.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mckay/ffla.hpp"

namespace mckay::dquiver {

using ffla::FpMatrix;
using ffla::PrimeField;
using ffla::Residue;

using IntMatrix = std::vector<std::vector<std::int64_t>>;
using DimVector = std::vector<unsigned>;

class SimplyLacedGraph {
 public:
  // Throws ConfigError on loops, multiple edges or asymmetry.
  static SimplyLacedGraph from_adjacency(const IntMatrix& adjacency, std::string name = "");
  static SimplyLacedGraph path(std::size_t n);
  static SimplyLacedGraph cycle(std::size_t n);

  std::size_t vertex_count() const noexcept { return adjacent_.size(); }
  // Unordered edges (a, b) with a < b, in lexicographic order.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
  bool adjacent(std::size_t i, std::size_t j) const { return adjacent_[i][j]; }
  std::vector<std::size_t> neighbours(std::size_t i) const;
  // Index of the oriented map x_ij : V_j -> V_i in a DoubleRep (2e for i < j, 2e + 1 for i > j).
  std::size_t map_index(std::size_t i, std::size_t j) const;
  // Cartan matrix 2 Id - adjacency.
  IntMatrix cartan() const;
  const std::string& name() const noexcept { return name_; }

  bool operator==(const SimplyLacedGraph& other) const { return adjacent_ == other.adjacent_; }

 private:
  std::vector<std::vector<bool>> adjacent_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::string name_;
};

// maps[2e] = x_ab : V_b -> V_a and maps[2e+1] = x_ba : V_a -> V_b for edge e = (a, b), a < b.
struct DoubleRep {
  DimVector dims;
  std::vector<FpMatrix> maps;

  static DoubleRep zero(const SimplyLacedGraph& g, const DimVector& dims);
  const FpMatrix& map(const SimplyLacedGraph& g, std::size_t i, std::size_t j) const {
    return maps[g.map_index(i, j)];
  }
  FpMatrix& map(const SimplyLacedGraph& g, std::size_t i, std::size_t j) { return maps[g.map_index(i, j)]; }
  bool operator==(const DoubleRep&) const = default;
};

bool satisfies_relation(const SimplyLacedGraph& g, const DoubleRep& r, const PrimeField& f);

struct Budget {
  std::uint64_t variety_cap = std::uint64_t{1} << 24;  // relation points / brute-force tuples
  std::uint64_t group_cap = std::uint64_t{1} << 20;    // base changes tried by are_isomorphic
};

// Rank profile: ranks of every single map, of every composition along walks
// of length 2..4, and of the stacked incoming and outgoing maps per vertex.
using ClassKey = std::vector<std::int32_t>;
ClassKey class_key(const SimplyLacedGraph& g, const DoubleRep& r, const PrimeField& f);
std::string describe_key(const SimplyLacedGraph& g, const DoubleRep& r, const PrimeField& f);

struct IsoClass {
  std::size_t id = 0;
  DoubleRep representative;  // lexicographically least point of the orbit
  std::uint64_t code = 0;
  std::uint64_t orbit_size = 0;
  ClassKey key;
  std::string label;
};

struct ClassCatalogue {
  DimVector dims;
  std::uint32_t q = 0;
  std::vector<IsoClass> classes;  // sorted by canonical code
  std::uint64_t variety_points = 0;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> lookup;  // (code, class id), sorted

  std::size_t class_of_code(std::uint64_t code) const;
};

// Throws BudgetExceeded when the relation variety or the forward-map search
// exceeds the variety cap.
ClassCatalogue enumerate_iso_classes(const SimplyLacedGraph& g, const DimVector& dims, const PrimeField& f,
                                     const Budget& budget = {});

// Independent count of relation points by testing every tuple.
std::uint64_t relation_variety_count_bruteforce(const SimplyLacedGraph& g, const DimVector& dims, const PrimeField& f,
                                                const Budget& budget = {});

// |GL_d1(q)| ... |GL_dn(q)| mod m.
std::uint64_t base_change_group_order_mod(const DimVector& dims, std::uint64_t q, std::uint64_t m);

std::uint64_t encode(const DoubleRep& r, std::uint32_t q);
DoubleRep decode(const SimplyLacedGraph& g, const DimVector& dims, std::uint64_t code, std::uint32_t q);

struct IsoWitness {
  bool isomorphic = false;
  std::optional<std::vector<FpMatrix>> base_change;  // g_i with g_i a_ij = b_ij g_j
};

// Rank-profile rejection, then exhaustive search over prod GL(V_i).
IsoWitness are_isomorphic(const SimplyLacedGraph& g, const DoubleRep& a, const DoubleRep& b, const PrimeField& f,
                          const Budget& budget = {});

// Shared catalogue cache for one graph and one field.
class RepContext {
 public:
  RepContext(SimplyLacedGraph graph, PrimeField field, Budget budget = {})
      : graph_(std::move(graph)), field_(field), budget_(budget) {}

  const SimplyLacedGraph& graph() const noexcept { return graph_; }
  const PrimeField& field() const noexcept { return field_; }
  const Budget& budget() const noexcept { return budget_; }
  const ClassCatalogue& classes(const DimVector& dims);
  const IsoClass& simple(std::size_t vertex);
  std::size_t class_of(const DoubleRep& r);

 private:
  SimplyLacedGraph graph_;
  PrimeField field_;
  Budget budget_;
  std::map<DimVector, std::unique_ptr<ClassCatalogue>> cache_;
};

// #{A' subset C : A' ~ A, C/A' ~ B} over F_q. Classes are given by their
// ids in the catalogues of their dimension vectors.
std::uint64_t hall_count(RepContext& ctx, std::size_t a, const DimVector& dim_a, std::size_t b,
                         const DimVector& dim_b, std::size_t c, const DimVector& dim_c);

// For every pair of classes (A, B) of the given dimensions, the count of
// G_AB^C; result[a][b]. One pass over the subspaces of C.
std::vector<std::vector<std::uint64_t>> hall_counts_into(RepContext& ctx, const DimVector& dim_a,
                                                         const DimVector& dim_b, std::size_t c,
                                                         const DimVector& dim_c);

}  // namespace mckay::dquiver
