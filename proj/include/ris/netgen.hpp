#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ris/bn.hpp"
#include "ris/rng.hpp"

namespace ris {

// One CPT row: with probability (1 - extreme_bias) the entries are drawn
// uniformly from [0.1, 0.9] and normalized; otherwise one entry lands in
// (0.9, 1) and the rest share the remainder, floored at 1e-4.
std::vector<double> random_cpt_row(int arity, double extreme_bias, Xoshiro& rng);

// Uniform random DAG with exactly n_arcs arcs among the forward pairs of a
// random vertex permutation; arities drawn from state_choices; CPT rows via
// random_cpt_row. Deterministic per seed.
BayesianNetwork random_network(int n_vertices, int n_arcs,
                               const std::vector<int>& state_choices,
                               std::uint64_t seed, double extreme_bias = 0.2,
                               std::string name = "");

// `count` distinct vertices with uniformly drawn states; redrawn (bounded
// retries) while Pr(e) = 0 whenever the check is feasible under the cap.
// prefer_leaves weights the vertex draw toward sinks.
Evidence random_evidence(const BayesianNetwork& bn, int count, std::uint64_t seed,
                         bool prefer_leaves = false,
                         std::uint64_t cap = kDefaultEnumCap);

}  // namespace ris
