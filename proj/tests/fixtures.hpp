#pragma once

// Hand-built networks shared across the test suites. All expected values in
// the tests were computed from these tables by hand or by the enumeration
// oracle.

#include <string>
#include <vector>

#include "ris/bn.hpp"
#include "ris/netgen.hpp"
#include "ris/rng.hpp"

namespace fixtures {

inline ris::BayesianNetwork make_bn(
    const std::vector<std::pair<std::string, int>>& vars,
    const std::vector<std::vector<ris::VertexId>>& parents,
    const std::vector<std::vector<std::vector<double>>>& rows,
    const std::string& name) {
  std::vector<ris::Variable> variables;
  for (const auto& [var_name, arity] : vars) {
    ris::Variable var;
    var.name = var_name;
    for (int s = 0; s < arity; ++s) var.states.push_back("s" + std::to_string(s));
    variables.push_back(var);
  }
  std::vector<ris::Cpt> cpts;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    ris::Cpt table;
    table.owner = static_cast<ris::VertexId>(v);
    table.parent_order = parents[v];
    table.rows = rows[v];
    cpts.push_back(table);
  }
  return ris::BayesianNetwork(ris::Dag(variables, parents), cpts, name);
}

// A -> B -> C, all binary.
// Pr(A=1)=0.3; Pr(B=1|A=0)=0.2, Pr(B=1|A=1)=0.7; Pr(C=1|B=0)=0.4, Pr(C=1|B=1)=0.9.
inline ris::BayesianNetwork chain3() {
  return make_bn({{"A", 2}, {"B", 2}, {"C", 2}}, {{}, {0}, {1}},
                 {{{0.7, 0.3}},
                  {{0.8, 0.2}, {0.3, 0.7}},
                  {{0.6, 0.4}, {0.1, 0.9}}},
                 "chain3");
}

// A -> E <- B, all binary, ids A=0, B=1, E=2.
// Pr(E=1|A,B) = 0.1, 0.6, 0.6, 0.9 for (A,B) = (0,0),(0,1),(1,0),(1,1).
inline ris::BayesianNetwork collider() {
  return make_bn({{"A", 2}, {"B", 2}, {"E", 2}}, {{}, {}, {0, 1}},
                 {{{0.5, 0.5}},
                  {{0.5, 0.5}},
                  {{0.9, 0.1}, {0.4, 0.6}, {0.4, 0.6}, {0.1, 0.9}}},
                 "collider");
}

// Collider with near-parity table: conditioning on E couples A and B hard,
// which pushes the divergence floor well above 0.2.
inline ris::BayesianNetwork xor_collider() {
  return make_bn({{"A", 2}, {"B", 2}, {"E", 2}}, {{}, {}, {0, 1}},
                 {{{0.5, 0.5}},
                  {{0.5, 0.5}},
                  {{0.01, 0.99}, {0.99, 0.01}, {0.99, 0.01}, {0.01, 0.99}}},
                 "xor_collider");
}

// Diamond A -> B, A -> C, B -> D, C -> D (uniform tables).
inline ris::BayesianNetwork diamond() {
  return make_bn(
      {{"A", 2}, {"B", 2}, {"C", 2}, {"D", 2}}, {{}, {0}, {0}, {1, 2}},
      {{{0.5, 0.5}},
       {{0.4, 0.6}, {0.7, 0.3}},
       {{0.2, 0.8}, {0.9, 0.1}},
       {{0.3, 0.7}, {0.6, 0.4}, {0.8, 0.2}, {0.45, 0.55}}},
      "diamond");
}

// Random network with a seed-derived arc count; used by property tests.
inline ris::BayesianNetwork random_net(std::uint64_t seed, int n_vertices,
                                       const std::vector<int>& states = {2},
                                       double extreme_bias = 0.0) {
  ris::Xoshiro rng(ris::splitmix64_mix(seed ^ 0xA5A5A5A5ULL));
  const int max_arcs = n_vertices * (n_vertices - 1) / 2;
  const int n_arcs = static_cast<int>(rng.next_below(
      static_cast<std::uint64_t>(std::min(max_arcs, 2 * n_vertices)) + 1));
  return ris::random_network(n_vertices, n_arcs, states, seed, extreme_bias);
}

}  // namespace fixtures
