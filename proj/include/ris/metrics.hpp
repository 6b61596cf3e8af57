#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ris/bn.hpp"
#include "ris/importance.hpp"
#include "ris/sampling.hpp"

namespace ris {

// One experiment measurement. Divergences are in nats; posterior_kl of a
// structure-preserving importance function never falls below post_kld.
struct MetricsReport {
  double mse = 0.0;
  double posterior_kl = 0.0;
  double post_kld = 0.0;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  std::string network_id;
  std::string evidence_id;
};

// Root-mean-square error across every posterior marginal entry:
// sqrt( (1 / sum_i n_i) * sum_i sum_j (est_ij - oracle_ij)^2 ).
double mse(const PosteriorEstimate& est,
           const std::vector<std::vector<double>>& oracle_marginals);

// KL of the exact posterior from the factored density of `fn`, in nats.
// Positive posterior mass over zero sampling density reports +infinity as a
// distinguished value rather than throwing.
double posterior_kl(const BayesianNetwork& bn, const Evidence& e,
                    const ImportanceFunction& fn,
                    std::uint64_t cap = kDefaultEnumCap);

// Divergence floor for structure-preserving importance functions: the KL
// reached by the minimizing plug-in Pr(x | parents, e), evaluated term by
// term from exact family posteriors rather than by direct divergence.
double post_kld(const BayesianNetwork& bn, const Evidence& e,
                std::uint64_t cap = kDefaultEnumCap);

// True iff the divergence floor exceeds the threshold, i.e. refractoring
// has room to beat structure-preserving samplers.
bool classify_bound_regime(const BayesianNetwork& bn, const Evidence& e,
                           double threshold = 0.1,
                           std::uint64_t cap = kDefaultEnumCap);

}  // namespace ris
