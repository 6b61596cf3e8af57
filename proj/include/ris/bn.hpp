#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ris/common.hpp"

namespace ris {

// Dense non-negative vertex index, stable within one network.
using VertexId = int;

// Sorted, duplicate-free vertex set.
using VertexSet = std::vector<VertexId>;

bool contains(const VertexSet& set, VertexId v);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
void insert_into(VertexSet& set, VertexId v);

struct Variable {
  VertexId id = 0;
  std::string name;
  std::vector<std::string> states;

  int arity() const { return static_cast<int>(states.size()); }
};

// Observed state index per evidence vertex.
using Evidence = std::map<VertexId, int>;

// Assignment of state indices to vertices; kUnassigned marks vertices
// outside the configuration's domain.
struct Configuration {
  static constexpr int kUnassigned = -1;

  std::vector<int> states;

  Configuration() = default;
  explicit Configuration(std::size_t n) : states(n, kUnassigned) {}

  bool assigned(VertexId v) const { return states[static_cast<std::size_t>(v)] != kUnassigned; }
  int operator[](VertexId v) const { return states[static_cast<std::size_t>(v)]; }
  int& operator[](VertexId v) { return states[static_cast<std::size_t>(v)]; }

  void apply(const Evidence& e) {
    for (const auto& [v, s] : e) states[static_cast<std::size_t>(v)] = s;
  }
};

// Row-major square bit matrix; row v holds the ancestor set of v.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n)
      : n_(n), words_per_row_((n + 63) / 64), bits_(n * words_per_row_, 0) {}

  bool get(std::size_t row, std::size_t col) const {
    return (bits_[row * words_per_row_ + col / 64] >> (col % 64)) & 1ULL;
  }
  void set(std::size_t row, std::size_t col) {
    bits_[row * words_per_row_ + col / 64] |= 1ULL << (col % 64);
  }
  void or_row(std::size_t dst, std::size_t src) {
    for (std::size_t w = 0; w < words_per_row_; ++w)
      bits_[dst * words_per_row_ + w] |= bits_[src * words_per_row_ + w];
  }

 private:
  std::size_t n_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Directed acyclic graph over discrete variables. Immutable after
// construction; the canonical topological order (ties broken by ascending
// VertexId) and the ancestor closure are precomputed so that order lookups
// and An(.) membership are O(1).
class Dag {
 public:
  Dag(std::vector<Variable> variables,
      std::vector<std::vector<VertexId>> parents);

  std::size_t size() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(VertexId v) const;
  VertexId vertex_by_name(const std::string& name) const;  // -1 if absent

  const std::vector<VertexId>& parents(VertexId v) const;
  const std::vector<VertexId>& children(VertexId v) const;

  // Canonical topological order and its inverse position map.
  const std::vector<VertexId>& order() const { return order_; }
  int order_position(VertexId v) const;

  bool is_ancestor(VertexId ancestor, VertexId descendant) const;

  void check_vertex(VertexId v) const;

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<VertexId>> parents_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<VertexId> order_;
  std::vector<int> order_pos_;
  BitMatrix ancestors_;
};

// Conditional probability table of one vertex: one probability row per
// parent configuration, rows enumerated with the last parent varying
// fastest.
struct Cpt {
  VertexId owner = 0;
  std::vector<VertexId> parent_order;
  std::vector<std::vector<double>> rows;
};

class BayesianNetwork {
 public:
  BayesianNetwork(Dag dag, std::vector<Cpt> cpts, std::string name = "");

  const Dag& dag() const { return dag_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return dag_.size(); }
  const Cpt& cpt(VertexId v) const { return cpts_[static_cast<std::size_t>(v)]; }

  // Row index of the parent configuration of `v` within its CPT.
  std::uint64_t cpt_row_index(VertexId v, const Configuration& config) const;

 private:
  Dag dag_;
  std::vector<Cpt> cpts_;
  std::string name_;
};

// --- core graph operations ------------------------------------------------

// Canonical topological order; throws StructuralError naming a cycle vertex.
std::vector<VertexId> topological_order(const Dag& dag);

// Transitive closure of parents, excluding the vertex itself.
VertexSet ancestors(const Dag& dag, VertexId v);

// All vertices strictly before `v` in the canonical order.
VertexSet ahead_set(const Dag& dag, VertexId v);

// Union of the members' parent sets minus the members themselves.
VertexSet combined_parents(const Dag& dag, const VertexSet& members);

// Combined ancestor set of `members` (union of closures minus members).
VertexSet combined_ancestors(const Dag& dag, const VertexSet& members);

// True iff every undirected path between x_set and y_set is blocked by
// z_set under d-separation. Members of x_set/y_set inside z_set count as
// separated. Linear-time reachability over (vertex, entry-direction) states.
bool d_separated(const Dag& dag, const VertexSet& x_set,
                 const VertexSet& y_set, const VertexSet& z_set);

// Stored CPT row for the parent configuration in `config`; all parents of
// `v` must be assigned and in range.
std::span<const double> cpt_row(const BayesianNetwork& bn, VertexId v,
                                const Configuration& config);

// --- configuration enumeration ---------------------------------------------

// Product of arities; throws CapacityError above `cap`.
std::uint64_t config_space_size(std::span<const int> arities,
                                std::uint64_t cap = kDefaultEnumCap);

// Streams configurations of the given arities in lexicographic order, last
// position varying fastest.
class ConfigEnumerator {
 public:
  explicit ConfigEnumerator(std::vector<int> arities,
                            std::uint64_t cap = kDefaultEnumCap);

  std::uint64_t count() const { return count_; }

  // Fills `states` with the next configuration; false once exhausted.
  bool next(std::vector<int>& states);

 private:
  std::vector<int> arities_;
  std::uint64_t count_ = 0;
  std::uint64_t emitted_ = 0;
};

std::vector<int> arities_of(const Dag& dag, const std::vector<VertexId>& vars);

// Enumerator over the configurations of an ordered variable list.
ConfigEnumerator enumerate_configs(const std::vector<Variable>& vars,
                                   std::uint64_t cap = kDefaultEnumCap);

// Validates evidence keys and state ranges against the network.
void validate_evidence(const BayesianNetwork& bn, const Evidence& e);

// Non-evidence vertices in ascending VertexId order.
std::vector<VertexId> unobserved_vertices(const Dag& dag, const Evidence& e);

}  // namespace ris
