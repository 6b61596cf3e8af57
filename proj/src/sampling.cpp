#include "ris/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ris {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::LW: return "LW";
    case Variant::SIS: return "SIS";
    case Variant::AIS: return "AIS";
    case Variant::RIS_SIS: return "RIS_SIS";
    case Variant::RIS_AIS: return "RIS_AIS";
  }
  return "?";
}

std::optional<Variant> variant_from_string(const std::string& text) {
  if (text == "LW") return Variant::LW;
  if (text == "SIS") return Variant::SIS;
  if (text == "AIS") return Variant::AIS;
  if (text == "RIS_SIS") return Variant::RIS_SIS;
  if (text == "RIS_AIS") return Variant::RIS_AIS;
  return std::nullopt;
}

bool is_refractoring(Variant variant) {
  return variant == Variant::RIS_SIS || variant == Variant::RIS_AIS;
}

bool is_adaptive(Variant variant) {
  return variant == Variant::AIS || variant == Variant::RIS_AIS;
}

WeightedSample draw_sample(const ImportanceFunction& fn, const JointEvaluator& joint,
                           const Evidence& e, Xoshiro& rng) {
  WeightedSample sample;
  sample.config = Configuration(joint.network().size());
  sample.config.apply(e);
  const double log_density = fn.sample_into(sample.config, rng);
  const double log_joint = joint.log_joint(sample.config);
  sample.log_weight = log_joint - log_density;
  sample.weight = log_joint == kNegInf ? 0.0 : std::exp(sample.log_weight);
  if (!std::isfinite(sample.weight) && log_joint != kNegInf)
    throw ValidationError("nonfinite importance weight");
  return sample;
}

EstimateAccumulator::EstimateAccumulator(const BayesianNetwork& bn, const Evidence& e)
    : vertices_(unobserved_vertices(bn.dag(), e)) {
  weighted_counts_.reserve(vertices_.size());
  for (VertexId v : vertices_)
    weighted_counts_.emplace_back(
        static_cast<std::size_t>(bn.dag().variable(v).arity()), 0.0);
}

void EstimateAccumulator::add(const Configuration& config, double weight) {
  if (weight < 0.0 || !std::isfinite(weight))
    throw ValidationError("sample weight must be finite and nonnegative");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const int state = config[vertices_[i]];
    if (state == Configuration::kUnassigned)
      throw ValidationError("estimate needs every unobserved vertex assigned");
    weighted_counts_[i][static_cast<std::size_t>(state)] += weight;
  }
  total_weight_ += weight;
  ++count_;
}

void EstimateAccumulator::merge(const EstimateAccumulator& other) {
  if (vertices_ != other.vertices_)
    throw ValidationError("cannot merge estimates over different vertex sets");
  for (std::size_t i = 0; i < weighted_counts_.size(); ++i)
    for (std::size_t s = 0; s < weighted_counts_[i].size(); ++s)
      weighted_counts_[i][s] += other.weighted_counts_[i][s];
  total_weight_ += other.total_weight_;
  count_ += other.count_;
}

PosteriorEstimate EstimateAccumulator::finalize(std::uint64_t seed) const {
  if (count_ == 0 || total_weight_ <= 0.0)
    throw DegenerateEstimateError("all sample weights are zero");
  PosteriorEstimate out;
  out.vertices = vertices_;
  out.marginals = weighted_counts_;
  for (auto& marginal : out.marginals)
    for (double& v : marginal) v /= total_weight_;
  out.evidence_prob_estimate = total_weight_ / static_cast<double>(count_);
  out.sample_count = count_;
  out.seed = seed;
  return out;
}

PosteriorEstimate estimate(const BayesianNetwork& bn, const Evidence& e,
                           std::span<const WeightedSample> samples) {
  EstimateAccumulator acc(bn, e);
  Configuration config;
  for (const WeightedSample& sample : samples) {
    config = sample.config;
    config.apply(e);
    acc.add(config, sample.weight);
  }
  return acc.finalize(0);
}

namespace {

std::vector<std::uint64_t> even_split(std::uint64_t total, std::size_t parts) {
  std::vector<std::uint64_t> sizes(parts, total / parts);
  for (std::size_t i = 0; i < total % parts; ++i) ++sizes[i];
  return sizes;
}

std::vector<double> resolve_schedule(const SamplerConfig& cfg) {
  const std::size_t stages = static_cast<std::size_t>(std::max(cfg.learning_stages, 0));
  if (!cfg.learning_rate_schedule.empty()) {
    if (cfg.learning_rate_schedule.size() != stages)
      throw ValidationError("learning rate schedule length must equal stage count");
    for (double eta : cfg.learning_rate_schedule)
      if (eta < 0.0 || eta > 1.0)
        throw ValidationError("learning rates must be in [0, 1]");
    return cfg.learning_rate_schedule;
  }
  // Geometric ramp 0.4 -> 0.1.
  std::vector<double> etas(stages, 0.4);
  for (std::size_t k = 1; k < stages; ++k)
    etas[k] = 0.4 * std::pow(0.1 / 0.4,
                             static_cast<double>(k) / static_cast<double>(stages - 1));
  return etas;
}

// Raises learned entries below the threshold and renormalizes the row.
void flatten_learned_rows(RefractoredNetwork& model, double threshold) {
  if (threshold <= 0.0) return;
  for (auto& slot : model.factors) {
    if (!slot) continue;
    for (std::size_t r = 0; r < slot->rows.size(); ++r) {
      if (slot->tags[r] != RowTag::Learned) continue;
      double sum = 0.0;
      for (double& p : slot->rows[r]) {
        if (p < threshold) p = threshold;
        sum += p;
      }
      for (double& p : slot->rows[r]) p /= sum;
    }
  }
}

void init_uniform_evidence_parents(RefractoredNetwork& model) {
  VertexSet evidence_set;
  for (const auto& [v, s] : model.evidence) evidence_set.push_back(v);
  if (evidence_set.empty()) return;
  const VertexSet parents = combined_parents(model.base.dag(), evidence_set);
  for (VertexId p : parents) {
    if (model.evidence.count(p)) continue;
    RefractoredFactor& factor = model.factor(p);
    const double arity = static_cast<double>(model.base.dag().variable(p).arity());
    for (std::size_t r = 0; r < factor.rows.size(); ++r) {
      std::fill(factor.rows[r].begin(), factor.rows[r].end(), 1.0 / arity);
      factor.tags[r] = RowTag::Learned;
    }
  }
}

struct StageBuffer {
  std::vector<Configuration> configs;
  std::vector<double> log_weights;

  void clear() {
    configs.clear();
    log_weights.clear();
  }
};

// Draws one stage of samples; weights are kept in log space and shifted by
// the stage maximum before any accumulation.
void draw_stage(const ImportanceFunction& fn, const JointEvaluator& joint,
                const Evidence& e, Xoshiro& rng, std::uint64_t count,
                StageBuffer& buffer) {
  buffer.clear();
  Configuration config(joint.network().size());
  for (std::uint64_t i = 0; i < count; ++i) {
    config.states.assign(config.states.size(), Configuration::kUnassigned);
    config.apply(e);
    const double log_density = fn.sample_into(config, rng);
    const double log_joint = joint.log_joint(config);
    buffer.configs.push_back(config);
    buffer.log_weights.push_back(log_joint - log_density);
  }
}

double stage_shift(const StageBuffer& buffer) {
  double shift = kNegInf;
  for (double lw : buffer.log_weights) shift = std::max(shift, lw);
  return std::isfinite(shift) ? shift : 0.0;
}

}  // namespace

SamplerRun run_sampler(const BayesianNetwork& bn, const Evidence& e,
                       const SamplerConfig& cfg, const RefractorScope& scope,
                       std::uint64_t cap) {
  validate_evidence(bn, e);
  if (cfg.total_samples < 1) throw ValidationError("need at least one sample");
  if (cfg.learning_stages < 0) throw ValidationError("negative stage count");
  if (cfg.flatten_threshold < 0.0 || cfg.flatten_threshold >= 1.0)
    throw ValidationError("flatten threshold must be in [0, 1)");

  SamplerConfig resolved = cfg;
  if (cfg.variant == Variant::LW) {
    resolved.learning_stages = 0;
    resolved.learning_rate_schedule.clear();
  }
  const int stages = resolved.learning_stages;
  const std::vector<double> etas = resolve_schedule(resolved);

  const RefractorScope effective_scope =
      is_refractoring(cfg.variant) ? scope : RefractorScope::explicit_set({});
  RefractoredNetwork model = absorb_evidence(refractor(bn, e, effective_scope, cap));
  if (is_adaptive(cfg.variant) && cfg.ais_uniform_parent_init)
    init_uniform_evidence_parents(model);

  const JointEvaluator joint(bn);
  SamplerRun run;

  // Learning-stage sizes; adaptive variants add a separate result stage of
  // total_samples afterwards, so their reported counts exclude learning.
  std::vector<std::uint64_t> stage_sizes;
  if (stages > 0) {
    if (cfg.samples_per_stage > 0)
      stage_sizes.assign(static_cast<std::size_t>(stages), cfg.samples_per_stage);
    else
      stage_sizes = even_split(cfg.total_samples, static_cast<std::size_t>(stages));
  } else if (!is_adaptive(cfg.variant)) {
    stage_sizes.push_back(cfg.total_samples);  // single unlearned batch
  }

  StageBuffer buffer;
  EstimateAccumulator acc(bn, e);
  double estimate_shift = 0.0;

  std::size_t last_active = 0;
  for (std::size_t k = 0; k < stage_sizes.size(); ++k)
    if (stage_sizes[k] > 0) last_active = k;

  for (std::size_t k = 0; k < stage_sizes.size(); ++k) {
    if (stage_sizes[k] == 0) continue;
    const ImportanceFunction fn = importance_function(model);
    Xoshiro rng(derive_seed(cfg.seed, Stream::LearningStage, k));
    draw_stage(fn, joint, e, rng, stage_sizes[k], buffer);
    run.wall_samples_drawn += stage_sizes[k];
    const double shift = stage_shift(buffer);

    const bool learn_this_stage = stages > 0;
    const bool estimate_this_stage = !is_adaptive(cfg.variant) && k == last_active;

    CptCounts counts(model);
    if (estimate_this_stage) {
      acc = EstimateAccumulator(bn, e);
      estimate_shift = shift;
    }
    for (std::size_t i = 0; i < buffer.configs.size(); ++i) {
      const double w = std::exp(buffer.log_weights[i] - shift);
      if (learn_this_stage) counts.add(buffer.configs[i], w);
      if (estimate_this_stage) acc.add(buffer.configs[i], w);
    }
    if (learn_this_stage) {
      if (counts.empty()) {
        run.warnings.push_back("learning stage " + std::to_string(k + 1) +
                               " carried no weight; update skipped");
      } else {
        apply_counts(model, counts, cfg.smoothing, etas[k]);
        if (is_adaptive(cfg.variant))
          flatten_learned_rows(model, cfg.flatten_threshold);
      }
    }
  }

  if (is_adaptive(cfg.variant)) {
    const ImportanceFunction fn = importance_function(model);
    Xoshiro rng(derive_seed(cfg.seed, Stream::ResultStage));
    draw_stage(fn, joint, e, rng, cfg.total_samples, buffer);
    run.wall_samples_drawn += cfg.total_samples;
    const double shift = stage_shift(buffer);
    acc = EstimateAccumulator(bn, e);
    estimate_shift = shift;
    for (std::size_t i = 0; i < buffer.configs.size(); ++i)
      acc.add(buffer.configs[i], std::exp(buffer.log_weights[i] - shift));
  }

  run.estimate = acc.finalize(cfg.seed);
  run.estimate.evidence_prob_estimate *= std::exp(estimate_shift);
  run.final_importance = importance_function(model);
  return run;
}

SamplerRun run_sis(const BayesianNetwork& bn, const Evidence& e, SamplerConfig cfg) {
  cfg.variant = Variant::SIS;
  return run_sampler(bn, e, cfg);
}

SamplerRun run_ais(const BayesianNetwork& bn, const Evidence& e, SamplerConfig cfg) {
  cfg.variant = Variant::AIS;
  return run_sampler(bn, e, cfg);
}

SamplerRun run_ris(const BayesianNetwork& bn, const Evidence& e, SamplerConfig cfg,
                   const RefractorScope& scope) {
  if (!is_refractoring(cfg.variant)) cfg.variant = Variant::RIS_SIS;
  return run_sampler(bn, e, cfg, scope);
}

namespace {

// Overwrites every factor row with the exact conditional posterior of the
// vertex given its factor parents. All family tables come from a single
// enumeration pass.
void fill_oracle_rows(RefractoredNetwork& model, std::uint64_t cap) {
  const Dag& dag = model.base.dag();
  std::vector<VertexId> slot_vertices;
  std::vector<std::vector<VertexId>> families;
  for (std::size_t v = 0; v < model.factors.size(); ++v) {
    if (!model.factors[v]) continue;
    const RefractoredFactor& factor = *model.factors[v];
    std::vector<VertexId> family = factor.parents;
    family.push_back(factor.vertex);
    slot_vertices.push_back(static_cast<VertexId>(v));
    families.push_back(std::move(family));
  }
  const std::vector<FactorTable> tables =
      posterior_tables(model.base, families, model.evidence, nullptr, cap);

  Configuration lookup(model.base.size());
  for (std::size_t s = 0; s < slot_vertices.size(); ++s) {
    RefractoredFactor& factor = model.factor(slot_vertices[s]);
    const FactorTable& table = tables[s];
    const int arity = dag.variable(factor.vertex).arity();
    ConfigEnumerator en(factor.parent_arities, cap);
    std::vector<int> states;
    std::uint64_t row = 0;
    while (en.next(states)) {
      for (std::size_t i = 0; i < factor.parents.size(); ++i)
        lookup[factor.parents[i]] = states[i];
      double mass = 0.0;
      std::vector<double> conditional(static_cast<std::size_t>(arity), 0.0);
      for (int x = 0; x < arity; ++x) {
        lookup[factor.vertex] = x;
        conditional[static_cast<std::size_t>(x)] = table.values[table.index_of(lookup)];
        mass += conditional[static_cast<std::size_t>(x)];
      }
      if (mass > 0.0) {
        for (double& p : conditional) p /= mass;
        factor.rows[row] = std::move(conditional);
        factor.tags[row] = RowTag::Learned;
      }
      // Zero-mass parent configurations keep the fallback row; they are
      // never reached when every earlier factor is exact.
      ++row;
    }
  }
}

}  // namespace

ImportanceFunction structure_preserving_plugin(const BayesianNetwork& bn,
                                               const Evidence& e, std::uint64_t cap) {
  RefractoredNetwork model =
      absorb_evidence(refractor(bn, e, RefractorScope::explicit_set({}), cap));
  fill_oracle_rows(model, cap);
  return importance_function(model);
}

ImportanceFunction refractored_plugin(const BayesianNetwork& bn, const Evidence& e,
                                      const RefractorScope& scope, std::uint64_t cap) {
  RefractoredNetwork model = absorb_evidence(refractor(bn, e, scope, cap));
  fill_oracle_rows(model, cap);
  return importance_function(model);
}

bool check_support(const BayesianNetwork& bn, const Evidence& e,
                   const ImportanceFunction& fn, std::uint64_t cap) {
  bool ok = true;
  for_each_completion(
      bn, e,
      [&](const Configuration& config, double mass) {
        if (mass > 0.0 && fn.log_density(config) == kNegInf) ok = false;
      },
      cap);
  return ok;
}

}  // namespace ris
