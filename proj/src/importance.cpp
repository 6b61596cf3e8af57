#include "ris/importance.hpp"

#include <cmath>
#include <limits>

namespace ris {

std::uint64_t ImportanceFunction::Factor::row_index(const Configuration& config) const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const int state = config[parents[i]];
    if (state == Configuration::kUnassigned)
      throw ValidationError("importance factor parent unassigned");
    index = index * static_cast<std::uint64_t>(parent_arities[i]) +
            static_cast<std::uint64_t>(state);
  }
  return index;
}

double ImportanceFunction::sample_into(Configuration& config, Xoshiro& rng) const {
  double log_density = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Factor& factor = factors[i];
    const auto& row = factor.rows[factor.row_index(config)];
    const std::size_t state = rng.next_weighted(row);
    config[order[i]] = static_cast<int>(state);
    log_density += std::log(row[state]);
  }
  return log_density;
}

double ImportanceFunction::log_density(const Configuration& config) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Factor& factor = factors[i];
    const int state = config[order[i]];
    if (state == Configuration::kUnassigned)
      throw ValidationError("importance density needs every sampled vertex assigned");
    const double p = factor.rows[factor.row_index(config)][static_cast<std::size_t>(state)];
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    acc += std::log(p);
  }
  return acc;
}

}  // namespace ris
