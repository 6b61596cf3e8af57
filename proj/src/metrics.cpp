#include "ris/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ris/exact.hpp"

namespace ris {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tiny negative divergences are floating-point noise; anything worse means
// a real bug, since every divergence here is nonnegative by construction.
double clamp_divergence(double value, const char* what) {
  if (value >= 0.0) return value;
  if (value > -1e-12) return 0.0;
  throw Error(std::string(what) + " came out negative (" + std::to_string(value) +
              "); divergence must be nonnegative");
}

}  // namespace

double mse(const PosteriorEstimate& est,
           const std::vector<std::vector<double>>& oracle_marginals) {
  if (est.marginals.size() != oracle_marginals.size())
    throw ValidationError("marginal sets have different variable counts");
  long double sum_sq = 0.0L;
  std::uint64_t n_entries = 0;
  for (std::size_t i = 0; i < est.marginals.size(); ++i) {
    if (est.marginals[i].size() != oracle_marginals[i].size())
      throw ValidationError("marginal state counts differ");
    for (std::size_t j = 0; j < est.marginals[i].size(); ++j) {
      const double d = est.marginals[i][j] - oracle_marginals[i][j];
      sum_sq += static_cast<long double>(d) * d;
      ++n_entries;
    }
  }
  if (n_entries == 0) return 0.0;
  return std::sqrt(static_cast<double>(sum_sq / static_cast<long double>(n_entries)));
}

double posterior_kl(const BayesianNetwork& bn, const Evidence& e,
                    const ImportanceFunction& fn, std::uint64_t cap) {
  long double total = 0.0L;
  for_each_completion(
      bn, e, [&](const Configuration&, double mass) { total += mass; }, cap);
  if (total <= 0.0L) throw ImpossibleEvidenceError("evidence has zero probability");
  const double log_z = std::log(static_cast<double>(total));

  bool support_violation = false;
  long double kl = 0.0L;
  for_each_completion(
      bn, e,
      [&](const Configuration& config, double mass) {
        if (mass == 0.0) return;
        const double log_f = fn.log_density(config);
        if (log_f == -kInf) {
          support_violation = true;
          return;
        }
        const double p = mass / static_cast<double>(total);
        kl += static_cast<long double>(p) * (std::log(mass) - log_z - log_f);
      },
      cap);
  if (support_violation) return kInf;
  return clamp_divergence(static_cast<double>(kl), "posterior KL");
}

double post_kld(const BayesianNetwork& bn, const Evidence& e, std::uint64_t cap) {
  validate_evidence(bn, e);
  const Dag& dag = bn.dag();

  VertexSet evidence_set;
  for (const auto& [v, s] : e) evidence_set.push_back(v);
  if (evidence_set.empty()) return 0.0;  // plug-in equals the prior

  // One enumeration pass fills the family table of every unobserved vertex
  // plus the table over the combined evidence parents.
  std::vector<VertexId> family_owner;
  std::vector<std::vector<VertexId>> subsets;
  for (std::size_t v = 0; v < dag.size(); ++v) {
    const VertexId vertex = static_cast<VertexId>(v);
    if (e.count(vertex)) continue;
    std::vector<VertexId> family = dag.parents(vertex);
    family.push_back(vertex);
    std::sort(family.begin(), family.end(), [&](VertexId a, VertexId b) {
      return dag.order_position(a) < dag.order_position(b);
    });
    family_owner.push_back(vertex);
    subsets.push_back(std::move(family));
  }
  const VertexSet evidence_parents = combined_parents(dag, evidence_set);
  subsets.push_back(evidence_parents);

  double evidence_prob = 0.0;
  const std::vector<FactorTable> tables =
      posterior_tables(bn, subsets, e, &evidence_prob, cap);

  long double cpt_term = 0.0L;         // E[ln Pr(x | parents)] under the posterior
  long double entropy_term = 0.0L;     // conditional entropy of x given parents
  Configuration lookup(bn.size());
  lookup.apply(e);

  for (std::size_t f = 0; f < family_owner.size(); ++f) {
    const VertexId x = family_owner[f];
    const FactorTable& table = tables[f];
    const int arity = dag.variable(x).arity();
    ConfigEnumerator en(table.arities, cap);
    std::vector<int> states;
    std::uint64_t index = 0;
    while (en.next(states)) {
      const double mass = table.values[index++];
      if (mass == 0.0) continue;
      for (std::size_t i = 0; i < table.vars.size(); ++i) lookup[table.vars[i]] = states[i];
      const double base = cpt_row(bn, x, lookup)[static_cast<std::size_t>(lookup[x])];
      if (base <= 0.0) return kInf;  // cannot happen with positive mass
      cpt_term += static_cast<long double>(mass) * std::log(base);
      // Posterior conditional of x given its parents.
      double parent_mass = 0.0;
      const int observed = lookup[x];
      for (int state = 0; state < arity; ++state) {
        lookup[x] = state;
        parent_mass += table.values[table.index_of(lookup)];
      }
      lookup[x] = observed;
      entropy_term -= static_cast<long double>(mass) * std::log(mass / parent_mass);
    }
    for (VertexId v : table.vars) lookup[v] = Configuration::kUnassigned;
    lookup.apply(e);
  }

  // E[ln prod_i Pr(e_i | parents(e_i))] over the evidence-parent posterior.
  long double evidence_term = 0.0L;
  {
    const FactorTable& table = tables.back();
    ConfigEnumerator en(table.arities, cap);
    std::vector<int> states;
    std::uint64_t index = 0;
    while (en.next(states)) {
      const double mass = table.values[index++];
      if (mass == 0.0) continue;
      for (std::size_t i = 0; i < table.vars.size(); ++i) lookup[table.vars[i]] = states[i];
      for (VertexId ev : evidence_set) {
        const double p = cpt_row(bn, ev, lookup)[static_cast<std::size_t>(e.at(ev))];
        if (p <= 0.0) return kInf;
        evidence_term += static_cast<long double>(mass) * std::log(p);
      }
    }
  }

  const long double bound =
      cpt_term + entropy_term + evidence_term - std::log(evidence_prob);
  return clamp_divergence(static_cast<double>(bound), "divergence floor");
}

bool classify_bound_regime(const BayesianNetwork& bn, const Evidence& e,
                           double threshold, std::uint64_t cap) {
  return post_kld(bn, e, cap) > threshold;
}

}  // namespace ris
