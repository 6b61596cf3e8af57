#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ris/bn.hpp"
#include "ris/exact.hpp"
#include "ris/importance.hpp"
#include "ris/refractor.hpp"
#include "ris/rng.hpp"

namespace ris {

enum class Variant { LW, SIS, AIS, RIS_SIS, RIS_AIS };

std::string to_string(Variant variant);
std::optional<Variant> variant_from_string(const std::string& text);
bool is_refractoring(Variant variant);
bool is_adaptive(Variant variant);

struct SamplerConfig {
  std::uint64_t total_samples = 10000;
  std::uint64_t seed = 0;
  int learning_stages = 10;
  // 0 derives an even split of total_samples across the learning stages.
  std::uint64_t samples_per_stage = 0;
  // Empty derives a geometric ramp from 0.4 down to 0.1.
  std::vector<double> learning_rate_schedule;
  double smoothing = 1.0;
  double flatten_threshold = 0.04;
  Variant variant = Variant::LW;
  // Adaptive heuristic: start the factors of evidence parents at uniform.
  bool ais_uniform_parent_init = true;
};

struct PosteriorEstimate {
  std::vector<VertexId> vertices;              // unobserved, ascending id
  std::vector<std::vector<double>> marginals;  // aligned with vertices
  double evidence_prob_estimate = 0.0;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
};

struct SamplerRun {
  PosteriorEstimate estimate;
  ImportanceFunction final_importance;
  std::uint64_t wall_samples_drawn = 0;
  std::vector<std::string> warnings;
};

// Forward-samples one instantiation and attaches its importance weight
// Pr(config, e) / f(config), computed in log space.
WeightedSample draw_sample(const ImportanceFunction& fn, const JointEvaluator& joint,
                           const Evidence& e, Xoshiro& rng);

// Self-normalized posterior estimate from a weighted sample stream.
PosteriorEstimate estimate(const BayesianNetwork& bn, const Evidence& e,
                           std::span<const WeightedSample> samples);

// Mergeable streaming form of `estimate` (for sharded sample production).
class EstimateAccumulator {
 public:
  EstimateAccumulator(const BayesianNetwork& bn, const Evidence& e);

  void add(const Configuration& config, double weight);
  void merge(const EstimateAccumulator& other);
  std::uint64_t count() const { return count_; }
  double total_weight() const { return total_weight_; }

  PosteriorEstimate finalize(std::uint64_t seed) const;

 private:
  std::vector<VertexId> vertices_;
  std::vector<std::vector<double>> weighted_counts_;
  double total_weight_ = 0.0;
  std::uint64_t count_ = 0;
};

// Runs the configured sampler. Structure-preserving variants (LW, SIS, AIS)
// ignore `scope`; refractoring variants rewrite the network with it first.
SamplerRun run_sampler(const BayesianNetwork& bn, const Evidence& e,
                       const SamplerConfig& cfg,
                       const RefractorScope& scope = RefractorScope::full_ancestors(),
                       std::uint64_t cap = kDefaultEnumCap);

SamplerRun run_sis(const BayesianNetwork& bn, const Evidence& e, SamplerConfig cfg);
SamplerRun run_ais(const BayesianNetwork& bn, const Evidence& e, SamplerConfig cfg);
SamplerRun run_ris(const BayesianNetwork& bn, const Evidence& e, SamplerConfig cfg,
                   const RefractorScope& scope);

// Structure-preserving importance function with exact-oracle entries
// Pr(x | parents, e): the divergence minimizer over the original structure.
ImportanceFunction structure_preserving_plugin(const BayesianNetwork& bn,
                                               const Evidence& e,
                                               std::uint64_t cap = kDefaultEnumCap);

// Importance function over the refractored structure with exact-oracle
// conditionals for every factor.
ImportanceFunction refractored_plugin(const BayesianNetwork& bn, const Evidence& e,
                                      const RefractorScope& scope,
                                      std::uint64_t cap = kDefaultEnumCap);

// Desk-scale support audit: true iff every configuration with positive
// posterior mass has positive sampling density.
bool check_support(const BayesianNetwork& bn, const Evidence& e,
                   const ImportanceFunction& fn, std::uint64_t cap = kDefaultEnumCap);

}  // namespace ris
