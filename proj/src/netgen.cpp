#include "ris/netgen.hpp"

#include <algorithm>
#include <cmath>

#include "ris/exact.hpp"

namespace ris {

std::vector<double> random_cpt_row(int arity, double extreme_bias, Xoshiro& rng) {
  if (arity < 2) throw ValidationError("CPT rows need at least two states");
  if (extreme_bias < 0.0 || extreme_bias > 1.0)
    throw ValidationError("extreme bias must be a probability");
  std::vector<double> row(static_cast<std::size_t>(arity));
  if (rng.next_double() >= extreme_bias) {
    double sum = 0.0;
    for (double& p : row) {
      p = 0.1 + 0.8 * rng.next_double();
      sum += p;
    }
    for (double& p : row) p /= sum;
    return row;
  }
  // One dominant entry in (0.9, 1); the residual mass keeps a 1e-4 floor.
  const double floor = 1e-4;
  const double cap = 1.0 - 2.0 * floor * static_cast<double>(arity - 1);
  const double peak = 0.9 + (cap - 0.9) * rng.next_double();
  const std::size_t peak_index = static_cast<std::size_t>(rng.next_below(
      static_cast<std::uint64_t>(arity)));
  double residual_raw = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i == peak_index) continue;
    row[i] = rng.next_double();
    residual_raw += row[i];
  }
  const double residual = 1.0 - peak;
  const double spread = residual - floor * static_cast<double>(arity - 1);
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i == peak_index) continue;
    row[i] = floor + (residual_raw > 0.0 ? spread * row[i] / residual_raw
                                         : spread / static_cast<double>(arity - 1));
  }
  row[peak_index] = peak;
  double sum = 0.0;
  for (double p : row) sum += p;
  for (double& p : row) p /= sum;
  return row;
}

BayesianNetwork random_network(int n_vertices, int n_arcs,
                               const std::vector<int>& state_choices,
                               std::uint64_t seed, double extreme_bias,
                               std::string name) {
  if (n_vertices < 1) throw ValidationError("need at least one vertex");
  const std::uint64_t max_arcs =
      static_cast<std::uint64_t>(n_vertices) * (n_vertices - 1) / 2;
  if (n_arcs < 0 || static_cast<std::uint64_t>(n_arcs) > max_arcs)
    throw ValidationError("arc count " + std::to_string(n_arcs) +
                          " infeasible for " + std::to_string(n_vertices) + " vertices");
  if (state_choices.empty()) throw ValidationError("no state counts to choose from");
  for (int s : state_choices)
    if (s < 2) throw ValidationError("state counts must be at least 2");

  Xoshiro rng(derive_seed(seed, Stream::NetworkGen));

  // Random permutation acts as the generating topological order.
  std::vector<VertexId> perm(static_cast<std::size_t>(n_vertices));
  for (int i = 0; i < n_vertices; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[rng.next_below(i)]);

  // Exact arc count via a partial shuffle of all forward pairs.
  std::vector<std::pair<VertexId, VertexId>> pairs;
  pairs.reserve(max_arcs);
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      pairs.emplace_back(perm[i], perm[j]);
  for (std::size_t k = 0; k < static_cast<std::size_t>(n_arcs); ++k)
    std::swap(pairs[k], pairs[k + rng.next_below(pairs.size() - k)]);

  std::vector<std::vector<VertexId>> parents(static_cast<std::size_t>(n_vertices));
  for (std::size_t k = 0; k < static_cast<std::size_t>(n_arcs); ++k)
    parents[static_cast<std::size_t>(pairs[k].second)].push_back(pairs[k].first);
  for (auto& list : parents) std::sort(list.begin(), list.end());

  std::vector<Variable> variables(static_cast<std::size_t>(n_vertices));
  for (int v = 0; v < n_vertices; ++v) {
    Variable& var = variables[static_cast<std::size_t>(v)];
    var.name = "X" + std::to_string(v);
    const int arity = state_choices[rng.next_below(state_choices.size())];
    for (int s = 0; s < arity; ++s) var.states.push_back("s" + std::to_string(s));
  }

  Dag dag(std::move(variables), parents);
  std::vector<Cpt> cpts(static_cast<std::size_t>(n_vertices));
  for (int v = 0; v < n_vertices; ++v) {
    Cpt& table = cpts[static_cast<std::size_t>(v)];
    table.owner = v;
    table.parent_order = parents[static_cast<std::size_t>(v)];
    const std::uint64_t n_rows =
        config_space_size(arities_of(dag, table.parent_order));
    const int arity = dag.variable(v).arity();
    for (std::uint64_t r = 0; r < n_rows; ++r)
      table.rows.push_back(random_cpt_row(arity, extreme_bias, rng));
  }
  if (name.empty()) name = "net" + std::to_string(seed);
  return BayesianNetwork(std::move(dag), std::move(cpts), std::move(name));
}

Evidence random_evidence(const BayesianNetwork& bn, int count, std::uint64_t seed,
                         bool prefer_leaves, std::uint64_t cap) {
  const int n = static_cast<int>(bn.size());
  if (count < 0 || count > n)
    throw ValidationError("evidence count out of range");
  Xoshiro rng(derive_seed(seed, Stream::EvidenceGen));

  // Sinks get 4x the draw weight when leaves are preferred.
  std::vector<double> weights(static_cast<std::size_t>(n), 1.0);
  if (prefer_leaves)
    for (int v = 0; v < n; ++v)
      if (bn.dag().children(v).empty()) weights[static_cast<std::size_t>(v)] = 4.0;

  // Zero-probability evidence would break every downstream posterior; check
  // when the enumeration is feasible, otherwise accept the draw.
  bool can_check = true;
  {
    std::vector<int> arities;
    for (const Variable& var : bn.dag().variables()) arities.push_back(var.arity());
    try {
      config_space_size(arities, cap);
    } catch (const CapacityError&) {
      can_check = false;
    }
  }

  constexpr int kMaxRetries = 64;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    std::vector<double> w = weights;
    Evidence e;
    for (int k = 0; k < count; ++k) {
      const std::size_t v = rng.next_weighted(w);
      w[v] = 0.0;
      const int arity = bn.dag().variable(static_cast<VertexId>(v)).arity();
      e[static_cast<VertexId>(v)] =
          static_cast<int>(rng.next_below(static_cast<std::uint64_t>(arity)));
    }
    if (!can_check) return e;
    try {
      evidence_probability(bn, e, cap);
      return e;
    } catch (const ImpossibleEvidenceError&) {
      continue;
    }
  }
  throw ValidationError("could not draw evidence with positive probability (retry budget exhausted)");
}

}  // namespace ris
