#include "ris/refractor.hpp"

#include <algorithm>
#include <cmath>

namespace ris {

std::string to_string(ScopeMode mode) {
  switch (mode) {
    case ScopeMode::FullAncestors: return "FULL_ANCESTORS";
    case ScopeMode::ParentsOfEvidence: return "PARENTS_OF_EVIDENCE";
    case ScopeMode::Explicit: return "EXPLICIT";
  }
  return "?";
}

std::uint64_t RefractoredFactor::row_index(const Configuration& config) const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const int state = config[parents[i]];
    if (state == Configuration::kUnassigned)
      throw ValidationError("factor parent unassigned in configuration");
    index = index * static_cast<std::uint64_t>(parent_arities[i]) +
            static_cast<std::uint64_t>(state);
  }
  return index;
}

const RefractoredFactor& RefractoredNetwork::factor(VertexId v) const {
  base.dag().check_vertex(v);
  const auto& slot = factors[static_cast<std::size_t>(v)];
  if (!slot) throw ValidationError("evidence vertices have no sampling factor");
  return *slot;
}

RefractoredFactor& RefractoredNetwork::factor(VertexId v) {
  base.dag().check_vertex(v);
  auto& slot = factors[static_cast<std::size_t>(v)];
  if (!slot) throw ValidationError("evidence vertices have no sampling factor");
  return *slot;
}

namespace {

// Sorts a vertex set by canonical order position.
std::vector<VertexId> canonical_sort(const Dag& dag, VertexSet vs) {
  std::sort(vs.begin(), vs.end(), [&](VertexId a, VertexId b) {
    return dag.order_position(a) < dag.order_position(b);
  });
  return vs;
}

// Builds the fallback table of a vertex: for every configuration of the
// factor parents, the base CPT row with evidence parents pinned to their
// observed states and expansion parents ignored.
RefractoredFactor make_fallback_factor(const BayesianNetwork& bn, const Evidence& e,
                                       VertexId v, std::vector<VertexId> parents,
                                       std::uint64_t cap) {
  const Dag& dag = bn.dag();
  RefractoredFactor factor;
  factor.vertex = v;
  factor.parents = std::move(parents);
  factor.parent_arities = arities_of(dag, factor.parents);
  const std::uint64_t n_rows = config_space_size(factor.parent_arities, cap);
  factor.rows.reserve(n_rows);
  factor.tags.assign(n_rows, RowTag::Fallback);

  Configuration lookup(bn.size());
  lookup.apply(e);
  ConfigEnumerator en(factor.parent_arities, cap);
  std::vector<int> states;
  while (en.next(states)) {
    for (std::size_t i = 0; i < factor.parents.size(); ++i) {
      const VertexId p = factor.parents[i];
      if (!e.count(p)) lookup[p] = states[i];
    }
    const std::uint64_t row = bn.cpt_row_index(v, lookup);
    factor.rows.push_back(bn.cpt(v).rows[row]);
  }
  return factor;
}

// Drops evidence members from a factor's parent list, keeping only the rows
// whose evidence coordinates match the observed states.
RefractoredFactor slice_evidence(const RefractoredFactor& factor, const Evidence& e) {
  bool has_evidence = false;
  for (VertexId p : factor.parents)
    if (e.count(p)) has_evidence = true;
  if (!has_evidence) return factor;

  RefractoredFactor out;
  out.vertex = factor.vertex;
  for (std::size_t i = 0; i < factor.parents.size(); ++i) {
    if (e.count(factor.parents[i])) continue;
    out.parents.push_back(factor.parents[i]);
    out.parent_arities.push_back(factor.parent_arities[i]);
  }
  ConfigEnumerator en(factor.parent_arities);
  std::vector<int> states;
  std::uint64_t row = 0;
  while (en.next(states)) {
    bool matches = true;
    for (std::size_t i = 0; i < factor.parents.size(); ++i) {
      auto it = e.find(factor.parents[i]);
      if (it != e.end() && it->second != states[i]) {
        matches = false;
        break;
      }
    }
    if (matches) {
      out.rows.push_back(factor.rows[row]);
      out.tags.push_back(factor.tags[row]);
    }
    ++row;
  }
  return out;
}

}  // namespace

RefractoredNetwork refractor(const BayesianNetwork& bn, const Evidence& e,
                             const RefractorScope& scope, std::uint64_t cap) {
  validate_evidence(bn, e);
  const Dag& dag = bn.dag();

  VertexSet evidence_set;
  for (const auto& [v, s] : e) evidence_set.push_back(v);

  VertexSet all_ancestors =
      evidence_set.empty() ? VertexSet{} : combined_ancestors(dag, evidence_set);

  VertexSet scope_set;
  switch (scope.mode) {
    case ScopeMode::FullAncestors:
      scope_set = all_ancestors;
      break;
    case ScopeMode::ParentsOfEvidence:
      scope_set = evidence_set.empty() ? VertexSet{}
                                       : combined_parents(dag, evidence_set);
      break;
    case ScopeMode::Explicit:
      for (VertexId v : scope.explicit_vertices)
        if (!contains(all_ancestors, v))
          throw ValidationError("scope vertex '" + dag.variable(v).name +
                                "' is not an ancestor of the evidence");
      scope_set = scope.explicit_vertices;
      std::sort(scope_set.begin(), scope_set.end());
      break;
  }

  RefractoredNetwork model{bn, e, {}, {}, false};

  for (VertexId ev : evidence_set) {
    for (VertexId x : scope_set) {
      if (contains(evidence_set, x) || !dag.is_ancestor(x, ev)) continue;
      const VertexSet expansion =
          set_difference(refractor_parent_set(dag, x, ev), evidence_set);
      auto [it, inserted] = model.expanded_parents.emplace(x, expansion);
      if (!inserted) it->second = set_union(it->second, expansion);
    }
  }

  model.factors.resize(bn.size());
  for (std::size_t v = 0; v < bn.size(); ++v) {
    const VertexId vertex = static_cast<VertexId>(v);
    if (e.count(vertex)) continue;
    VertexSet parents;
    auto it = model.expanded_parents.find(vertex);
    if (it != model.expanded_parents.end()) {
      // Expanded list is evidence-free; evidence members of the original
      // parent set stay pinned in the table until absorption.
      parents = it->second;
      for (VertexId p : dag.parents(vertex))
        if (e.count(p)) insert_into(parents, p);
    } else {
      parents = dag.parents(vertex);
      std::sort(parents.begin(), parents.end());
    }
    model.factors[v] =
        make_fallback_factor(bn, e, vertex, canonical_sort(dag, std::move(parents)), cap);
  }
  return model;
}

RefractoredNetwork absorb_evidence(RefractoredNetwork model) {
  if (model.absorbed) return model;
  for (auto& slot : model.factors)
    if (slot) *slot = slice_evidence(*slot, model.evidence);
  model.absorbed = true;
  return model;
}

CptCounts::CptCounts(const RefractoredNetwork& model) : model_(&model) {
  for (std::size_t v = 0; v < model.factors.size(); ++v) {
    const auto& slot = model.factors[v];
    if (!slot) continue;
    slot_vertex_.push_back(static_cast<VertexId>(v));
    const int arity = model.base.dag().variable(static_cast<VertexId>(v)).arity();
    counts_.emplace_back(slot->rows.size(),
                         std::vector<double>(static_cast<std::size_t>(arity), 0.0));
  }
}

void CptCounts::add(const Configuration& config, double weight) {
  if (weight < 0.0 || !std::isfinite(weight))
    throw ValidationError("sample weight must be finite and nonnegative");
  for (std::size_t slot = 0; slot < slot_vertex_.size(); ++slot) {
    const RefractoredFactor& factor = model_->factor(slot_vertex_[slot]);
    const std::uint64_t row = factor.row_index(config);
    const int state = config[slot_vertex_[slot]];
    if (state == Configuration::kUnassigned)
      throw ValidationError("sample configuration must assign every vertex");
    counts_[slot][row][static_cast<std::size_t>(state)] += weight;
  }
  total_weight_ += weight;
}

void CptCounts::merge(const CptCounts& other) {
  if (counts_.size() != other.counts_.size())
    throw ValidationError("cannot merge counts built for different models");
  for (std::size_t s = 0; s < counts_.size(); ++s)
    for (std::size_t r = 0; r < counts_[s].size(); ++r)
      for (std::size_t k = 0; k < counts_[s][r].size(); ++k)
        counts_[s][r][k] += other.counts_[s][r][k];
  total_weight_ += other.total_weight_;
}

double CptCounts::row_mass(std::size_t slot, std::uint64_t row) const {
  double mass = 0.0;
  for (double c : counts_[slot][row]) mass += c;
  return mass;
}

const std::vector<double>& CptCounts::row_counts(std::size_t slot,
                                                 std::uint64_t row) const {
  return counts_[slot][row];
}

void apply_counts(RefractoredNetwork& model, const CptCounts& counts,
                  double smoothing, double eta) {
  if (smoothing < 0.0) throw ValidationError("pseudocount must be nonnegative");
  if (eta < 0.0 || eta > 1.0) throw ValidationError("learning rate must be in [0, 1]");
  for (std::size_t slot = 0; slot < counts.slot_vertex_.size(); ++slot) {
    RefractoredFactor& factor = model.factor(counts.slot_vertex_[slot]);
    const std::size_t arity = factor.rows.empty() ? 0 : factor.rows[0].size();
    for (std::size_t r = 0; r < factor.rows.size(); ++r) {
      const double mass = counts.row_mass(slot, r);
      if (mass <= 0.0) continue;  // unseen rows keep their fallback value
      const auto& row_counts = counts.row_counts(slot, r);
      const double denom = mass + smoothing * static_cast<double>(arity);
      for (std::size_t k = 0; k < arity; ++k) {
        const double estimate = (row_counts[k] + smoothing) / denom;
        factor.rows[r][k] = (1.0 - eta) * factor.rows[r][k] + eta * estimate;
      }
      factor.tags[r] = RowTag::Learned;
    }
  }
}

RefractoredNetwork learn_cpt(RefractoredNetwork model,
                             std::span<const WeightedSample> samples,
                             double smoothing, std::vector<std::string>* warnings) {
  CptCounts counts(model);
  Configuration config;
  for (const WeightedSample& sample : samples) {
    config = sample.config;
    config.apply(model.evidence);
    counts.add(config, sample.weight);
  }
  if (counts.empty()) {
    if (warnings)
      warnings->push_back("sample stream carries no weight; factors left unchanged");
    return model;
  }
  apply_counts(model, counts, smoothing);
  return model;
}

ImportanceFunction importance_function(const RefractoredNetwork& model) {
  ImportanceFunction fn;
  for (VertexId v : model.base.dag().order()) {
    if (model.evidence.count(v)) continue;
    fn.order.push_back(v);
    const RefractoredFactor sliced = slice_evidence(model.factor(v), model.evidence);
    ImportanceFunction::Factor factor;
    factor.vertex = v;
    factor.parents = sliced.parents;
    factor.parent_arities = sliced.parent_arities;
    factor.rows = sliced.rows;
    fn.factors.push_back(std::move(factor));
  }
  return fn;
}

}  // namespace ris
