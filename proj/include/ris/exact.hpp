#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ris/bn.hpp"

namespace ris {

// Probability table over the configurations of an ordered vertex list,
// enumerated with the last vertex varying fastest.
struct FactorTable {
  std::vector<VertexId> vars;
  std::vector<int> arities;
  std::vector<double> values;

  std::uint64_t index_of(const Configuration& config) const;
  double total() const;
  void normalize();
};

// Precomputed log CPTs for fast joint evaluation; zero entries map to -inf.
class JointEvaluator {
 public:
  explicit JointEvaluator(const BayesianNetwork& bn);

  const BayesianNetwork& network() const { return *bn_; }

  // ln Pr of a full configuration over all vertices.
  double log_joint(const Configuration& full) const;

 private:
  const BayesianNetwork* bn_;
  std::vector<std::vector<std::vector<double>>> log_rows_;
};

// Enumerates Cfg(V \ E) with evidence pinned, invoking fn(config, mass)
// where mass = Pr(config, e). The visiting order is fixed, so reductions
// built on top are deterministic.
void for_each_completion(
    const BayesianNetwork& bn, const Evidence& e,
    const std::function<void(const Configuration&, double)>& fn,
    std::uint64_t cap = kDefaultEnumCap);

// Product of CPT entries for a full configuration (log-space accumulation).
double joint_probability(const BayesianNetwork& bn, const Configuration& full);

// Pr(e) by enumeration over Cfg(V \ E); throws ImpossibleEvidenceError when
// the evidence has zero probability.
double evidence_probability(const BayesianNetwork& bn, const Evidence& e,
                            std::uint64_t cap = kDefaultEnumCap);

// Posterior state distribution of one unobserved vertex.
std::vector<double> posterior_marginal(const BayesianNetwork& bn, VertexId v,
                                       const Evidence& e,
                                       std::uint64_t cap = kDefaultEnumCap);

// Joint posterior over {v} and a parent set disjoint from the evidence.
FactorTable family_posterior(const BayesianNetwork& bn, VertexId v,
                             const VertexSet& parent_set, const Evidence& e,
                             std::uint64_t cap = kDefaultEnumCap);

// Full normalized posterior over Cfg(V \ E).
FactorTable posterior_joint(const BayesianNetwork& bn, const Evidence& e,
                            std::uint64_t cap = kDefaultEnumCap);

// Posterior mass tables over several vertex subsets, filled in one
// enumeration pass. Subsets may include evidence vertices (their
// coordinates stay pinned). Tables are normalized; also returns Pr(e).
std::vector<FactorTable> posterior_tables(
    const BayesianNetwork& bn, const std::vector<std::vector<VertexId>>& subsets,
    const Evidence& e, double* evidence_prob = nullptr,
    std::uint64_t cap = kDefaultEnumCap);

}  // namespace ris
