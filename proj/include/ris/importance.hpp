#pragma once

#include <cstdint>
#include <vector>

#include "ris/bn.hpp"
#include "ris/rng.hpp"

namespace ris {

// Factored sampling distribution over the unobserved vertices, in canonical
// order. Each factor's parents precede it in the order.
struct ImportanceFunction {
  struct Factor {
    VertexId vertex = -1;
    std::vector<VertexId> parents;
    std::vector<int> parent_arities;
    std::vector<std::vector<double>> rows;  // Cfg(parents), last parent fastest

    std::uint64_t row_index(const Configuration& config) const;
  };

  std::vector<VertexId> order;  // sampled vertices, canonical order
  std::vector<Factor> factors;  // aligned with `order`

  // Draws states for every sampled vertex into `config` (evidence and other
  // vertices are left untouched); returns the log density of the draw.
  double sample_into(Configuration& config, Xoshiro& rng) const;

  // Log density of the assignment in `config`; -inf outside the support.
  double log_density(const Configuration& config) const;
};

// One forward-sampled instantiation of the unobserved vertices with its
// importance weight Pr(config, e) / f(config).
struct WeightedSample {
  Configuration config;  // full network configuration with evidence pinned
  double weight = 0.0;
  double log_weight = 0.0;
};

}  // namespace ris
