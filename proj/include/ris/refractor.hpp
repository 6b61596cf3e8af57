#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ris/bn.hpp"
#include "ris/importance.hpp"
#include "ris/shield.hpp"

namespace ris {

// Which evidence ancestors get their parent sets expanded.
enum class ScopeMode { FullAncestors, ParentsOfEvidence, Explicit };

struct RefractorScope {
  ScopeMode mode = ScopeMode::FullAncestors;
  VertexSet explicit_vertices;  // used by Explicit only

  static RefractorScope full_ancestors() { return {ScopeMode::FullAncestors, {}}; }
  static RefractorScope parents_of_evidence() { return {ScopeMode::ParentsOfEvidence, {}}; }
  static RefractorScope explicit_set(VertexSet vs) {
    return {ScopeMode::Explicit, std::move(vs)};
  }
};

std::string to_string(ScopeMode mode);

enum class RowTag : unsigned char { Fallback, Learned };

// Sampling factor of one unobserved vertex in the rewritten network. Until
// evidence absorption the parent list may still carry evidence members of
// the original parent set; expansion parents are never evidence vertices.
struct RefractoredFactor {
  VertexId vertex = -1;
  std::vector<VertexId> parents;  // canonical order
  std::vector<int> parent_arities;
  std::vector<std::vector<double>> rows;
  std::vector<RowTag> tags;  // per row

  std::uint64_t row_index(const Configuration& config) const;
};

// Evidence-rewritten network: expanded parent sets for in-scope evidence
// ancestors plus per-vertex factor tables. Fallback rows equal the base CPT
// row with evidence parents fixed; learned rows come from weighted samples.
struct RefractoredNetwork {
  BayesianNetwork base;
  Evidence evidence;
  // Expanded parent list (evidence-free) per in-scope ancestor.
  std::map<VertexId, VertexSet> expanded_parents;
  // One factor per unobserved vertex, empty slot for evidence vertices.
  std::vector<std::optional<RefractoredFactor>> factors;
  bool absorbed = false;

  const RefractoredFactor& factor(VertexId v) const;
  RefractoredFactor& factor(VertexId v);
};

// Rewrites the structure for the evidence: per evidence vertex E and
// in-scope ancestor X, the parents of X grow by the shield-derived set
// (minus evidence). All factor rows start as fallback copies of the base
// CPT with evidence parents fixed, so the untouched network samples exactly
// like likelihood weighting.
RefractoredNetwork refractor(const BayesianNetwork& bn, const Evidence& e,
                             const RefractorScope& scope,
                             std::uint64_t cap = kDefaultEnumCap);

// Removes evidence vertices from every parent list, slicing factor rows at
// the observed states. Idempotent; the sampled distribution is unchanged.
RefractoredNetwork absorb_evidence(RefractoredNetwork model);

// Weighted state counts aligned with a RefractoredNetwork's factor shapes.
// Merging partial counts is associative and commutative, so sample streams
// can be processed in independent shards.
class CptCounts {
 public:
  explicit CptCounts(const RefractoredNetwork& model);

  // `config` must assign every vertex (evidence pinned).
  void add(const Configuration& config, double weight);
  void merge(const CptCounts& other);

  // Weight mass seen for one factor row.
  double row_mass(std::size_t slot, std::uint64_t row) const;
  const std::vector<double>& row_counts(std::size_t slot, std::uint64_t row) const;
  bool empty() const { return total_weight_ == 0.0; }

 private:
  friend void apply_counts(RefractoredNetwork&, const CptCounts&, double, double);
  std::vector<VertexId> slot_vertex_;
  std::vector<std::vector<std::vector<double>>> counts_;  // [slot][row][state]
  double total_weight_ = 0.0;
  const RefractoredNetwork* model_;
};

// Replaces or blends factor rows with smoothed weighted-frequency
// estimates: entry = (count + pseudocount) / (mass + pseudocount * arity),
// then new = (1 - eta) * old + eta * estimate. Rows with zero weight mass
// keep their previous value and tag.
void apply_counts(RefractoredNetwork& model, const CptCounts& counts,
                  double smoothing, double eta = 1.0);

// Re-estimates factor rows from a weighted sample stream. Rows never hit by
// a positive-weight sample stay fallback; an all-zero stream returns the
// model unchanged and records a warning.
RefractoredNetwork learn_cpt(RefractoredNetwork model,
                             std::span<const WeightedSample> samples,
                             double smoothing,
                             std::vector<std::string>* warnings = nullptr);

// Materializes the current factored sampler over the unobserved vertices.
// Evidence parents still present before absorption are pinned to their
// observed states.
ImportanceFunction importance_function(const RefractoredNetwork& model);

}  // namespace ris
