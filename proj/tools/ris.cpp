// Command-line harness: network generation, exact queries, shields,
// refractoring, sampling, metrics, and CSV experiment runs.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ris/exact.hpp"
#include "ris/experiment.hpp"
#include "ris/io.hpp"
#include "ris/metrics.hpp"
#include "ris/netgen.hpp"
#include "ris/sampling.hpp"
#include "ris/shield.hpp"

namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  bool strict_support = false;
  std::uint64_t enum_cap = ris::kDefaultEnumCap;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    ris::write_file(out_path, text);
}

ris::BayesianNetwork load_network(const std::string& path) {
  std::vector<std::string> warnings;
  ris::BayesianNetwork bn = ris::parse_network(ris::read_file(path), &warnings);
  for (const std::string& w : warnings) std::cerr << path << ": warning: " << w << "\n";
  return bn;
}

std::string marginals_text(const ris::BayesianNetwork& bn,
                           const std::vector<ris::VertexId>& vertices,
                           const std::vector<std::vector<double>>& marginals) {
  std::string out;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    out += bn.dag().variable(vertices[i]).name;
    for (double p : marginals[i]) out += " " + ris::format_probability(p);
    out += "\n";
  }
  return out;
}

ris::RefractorScope scope_from_name(const std::string& name) {
  if (name == "FULL_ANCESTORS") return ris::RefractorScope::full_ancestors();
  if (name == "PARENTS_OF_EVIDENCE") return ris::RefractorScope::parents_of_evidence();
  throw ris::ValidationError("unknown scope '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Bayesian-network importance sampling with evidence refractoring"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Master seed for all derived streams");
  app.add_flag("--strict-support", global.strict_support,
               "Abort when the sampler misses posterior-positive configurations");
  app.add_option("--enum-cap", global.enum_cap, "Enumeration cap (entry count)");

  // --- gen -----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Generate a random network (and evidence)");
  int gen_vertices = 20;
  int gen_arcs = 30;
  std::string gen_states = "2,3";
  double gen_bias = 0.2;
  std::string gen_name;
  std::string gen_out;
  int gen_evidence_count = 0;
  std::string gen_evidence_out;
  bool gen_prefer_leaves = false;
  gen->add_option("-n,--vertices", gen_vertices, "Vertex count");
  gen->add_option("-a,--arcs", gen_arcs, "Arc count (exact)");
  gen->add_option("--states", gen_states, "Comma-separated arity choices");
  gen->add_option("--extreme-bias", gen_bias, "Share of rows with one entry above 0.9");
  gen->add_option("--name", gen_name, "Network name");
  gen->add_option("-o,--out", gen_out, "Output path (default stdout)");
  gen->add_option("--evidence-count", gen_evidence_count, "Also draw an evidence set");
  gen->add_option("--evidence-out", gen_evidence_out, "Evidence output path");
  gen->add_flag("--prefer-leaves", gen_prefer_leaves, "Weight evidence draw toward sinks");

  // --- exact ---------------------------------------------------------------
  auto* exact_cmd = app.add_subcommand("exact", "Exact evidence probability and marginals");
  std::string exact_network, exact_evidence;
  exact_cmd->add_option("--network", exact_network, "Network file")->required();
  exact_cmd->add_option("--evidence", exact_evidence, "Evidence file");

  // --- shield --------------------------------------------------------------
  auto* shield_cmd = app.add_subcommand("shield", "Evidence shields of ancestor vertices");
  std::string shield_network, shield_evidence, shield_target;
  shield_cmd->add_option("--network", shield_network, "Network file")->required();
  shield_cmd->add_option("--evidence", shield_evidence, "Evidence file")->required();
  shield_cmd->add_option("--target", shield_target, "Restrict to one vertex name");

  // --- refractor -----------------------------------------------------------
  auto* refractor_cmd = app.add_subcommand("refractor", "Show the rewritten structure");
  std::string refr_network, refr_evidence, refr_scope = "FULL_ANCESTORS";
  refractor_cmd->add_option("--network", refr_network, "Network file")->required();
  refractor_cmd->add_option("--evidence", refr_evidence, "Evidence file")->required();
  refractor_cmd->add_option("--scope", refr_scope,
                            "FULL_ANCESTORS or PARENTS_OF_EVIDENCE");

  // --- sample --------------------------------------------------------------
  auto* sample_cmd = app.add_subcommand("sample", "Importance-sampled posterior estimate");
  std::string smp_network, smp_evidence, smp_variant = "LW", smp_scope = "FULL_ANCESTORS";
  std::uint64_t smp_samples = 10000;
  int smp_stages = 10;
  std::uint64_t smp_stage_samples = 0;
  double smp_smoothing = 1.0, smp_flatten = 0.04;
  sample_cmd->add_option("--network", smp_network, "Network file")->required();
  sample_cmd->add_option("--evidence", smp_evidence, "Evidence file");
  sample_cmd->add_option("--variant", smp_variant, "LW|SIS|AIS|RIS_SIS|RIS_AIS");
  sample_cmd->add_option("-N,--samples", smp_samples, "Sample budget");
  sample_cmd->add_option("--stages", smp_stages, "Learning stage count");
  sample_cmd->add_option("--stage-samples", smp_stage_samples,
                         "Samples per learning stage (0 = even split)");
  sample_cmd->add_option("--smoothing", smp_smoothing, "Learning pseudocount");
  sample_cmd->add_option("--flatten", smp_flatten, "Adaptive flattening threshold");
  sample_cmd->add_option("--scope", smp_scope, "Refractoring scope");

  // --- metrics ---------------------------------------------------------------
  auto* metrics_cmd = app.add_subcommand("metrics", "Divergence floor and sampler error");
  std::string met_network, met_evidence, met_variant, met_scope = "FULL_ANCESTORS";
  std::uint64_t met_samples = 10000;
  int met_stages = 10;
  double met_threshold = 0.1;
  metrics_cmd->add_option("--network", met_network, "Network file")->required();
  metrics_cmd->add_option("--evidence", met_evidence, "Evidence file")->required();
  metrics_cmd->add_option("--variant", met_variant, "Also run a sampler and report its error");
  metrics_cmd->add_option("-N,--samples", met_samples, "Sample budget");
  metrics_cmd->add_option("--stages", met_stages, "Learning stage count");
  metrics_cmd->add_option("--scope", met_scope, "Refractoring scope");
  metrics_cmd->add_option("--threshold", met_threshold, "Bound-regime threshold");

  // --- experiment ------------------------------------------------------------
  auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment spec to CSV");
  std::string exp_spec, exp_out, exp_win;
  std::uint64_t exp_min_n = 0;
  int exp_threads = 0;
  exp_cmd->add_option("--spec", exp_spec, "Experiment spec file")->required();
  exp_cmd->add_option("--out", exp_out, "CSV output path (default stdout)");
  exp_cmd->add_option("--threads", exp_threads, "Override spec thread count");
  exp_cmd->add_option("--win-ratio", exp_win,
                      "Report win ratio, e.g. RIS_SIS,SIS");
  exp_cmd->add_option("--min-n", exp_min_n, "Minimum N for the win ratio");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      std::vector<int> states;
      std::stringstream ss(gen_states);
      for (std::string part; std::getline(ss, part, ',');)
        states.push_back(std::stoi(part));
      const ris::BayesianNetwork bn = ris::random_network(
          gen_vertices, gen_arcs, states, global.seed, gen_bias, gen_name);
      emit(ris::serialize_network(bn), gen_out);
      if (gen_evidence_count > 0) {
        const ris::Evidence e = ris::random_evidence(
            bn, gen_evidence_count, global.seed, gen_prefer_leaves, global.enum_cap);
        emit(ris::serialize_evidence(e, bn), gen_evidence_out);
      }
      return 0;
    }

    if (*exact_cmd) {
      const ris::BayesianNetwork bn = load_network(exact_network);
      ris::Evidence e;
      if (!exact_evidence.empty())
        e = ris::parse_evidence(ris::read_file(exact_evidence), bn);
      const double prob = ris::evidence_probability(bn, e, global.enum_cap);
      std::cout << "evidenceProbability " << ris::format_probability(prob) << "\n";
      std::vector<std::vector<double>> marginals;
      const std::vector<ris::VertexId> free = ris::unobserved_vertices(bn.dag(), e);
      for (ris::VertexId v : free)
        marginals.push_back(ris::posterior_marginal(bn, v, e, global.enum_cap));
      std::cout << marginals_text(bn, free, marginals);
      return 0;
    }

    if (*shield_cmd) {
      const ris::BayesianNetwork bn = load_network(shield_network);
      const ris::Evidence e = ris::parse_evidence(ris::read_file(shield_evidence), bn);
      for (const auto& [ev, state] : e) {
        for (std::size_t v = 0; v < bn.size(); ++v) {
          const ris::VertexId x = static_cast<ris::VertexId>(v);
          if (e.count(x) || !bn.dag().is_ancestor(x, ev)) continue;
          const std::string& name = bn.dag().variable(x).name;
          if (!shield_target.empty() && name != shield_target) continue;
          const ris::Shield shield = ris::compute_shield(bn.dag(), x, ev);
          std::cout << "shield " << name << " given " << bn.dag().variable(ev).name
                    << " :";
          for (ris::VertexId m : shield.members)
            std::cout << " " << bn.dag().variable(m).name;
          std::cout << (ris::verify_shield(bn.dag(), shield) ? "  [separates]"
                                                             : "  [BROKEN]")
                    << "\n";
        }
      }
      return 0;
    }

    if (*refractor_cmd) {
      const ris::BayesianNetwork bn = load_network(refr_network);
      const ris::Evidence e = ris::parse_evidence(ris::read_file(refr_evidence), bn);
      const ris::RefractoredNetwork model = ris::absorb_evidence(
          ris::refractor(bn, e, scope_from_name(refr_scope), global.enum_cap));
      for (std::size_t v = 0; v < bn.size(); ++v) {
        const ris::VertexId x = static_cast<ris::VertexId>(v);
        if (e.count(x)) continue;
        const ris::RefractoredFactor& factor = model.factor(x);
        std::cout << bn.dag().variable(x).name << " <-";
        for (ris::VertexId p : factor.parents)
          std::cout << " " << bn.dag().variable(p).name;
        if (model.expanded_parents.count(x)) std::cout << "  [expanded]";
        std::cout << "\n";
      }
      return 0;
    }

    if (*sample_cmd || (*metrics_cmd && !met_variant.empty())) {
      // Shared sampler invocation; metrics adds divergences afterwards.
      const bool is_metrics = static_cast<bool>(*metrics_cmd);
      const ris::BayesianNetwork bn = load_network(is_metrics ? met_network : smp_network);
      ris::Evidence e;
      const std::string evidence_path = is_metrics ? met_evidence : smp_evidence;
      if (!evidence_path.empty())
        e = ris::parse_evidence(ris::read_file(evidence_path), bn);

      ris::SamplerConfig cfg;
      cfg.total_samples = is_metrics ? met_samples : smp_samples;
      cfg.seed = global.seed;
      cfg.learning_stages = is_metrics ? met_stages : smp_stages;
      cfg.samples_per_stage = is_metrics ? 0 : smp_stage_samples;
      cfg.smoothing = is_metrics ? 1.0 : smp_smoothing;
      cfg.flatten_threshold = is_metrics ? 0.04 : smp_flatten;
      const std::string variant_name = is_metrics ? met_variant : smp_variant;
      const auto variant = ris::variant_from_string(variant_name);
      if (!variant) throw ris::ValidationError("unknown variant '" + variant_name + "'");
      cfg.variant = *variant;

      const ris::SamplerRun run = ris::run_sampler(
          bn, e, cfg, scope_from_name(is_metrics ? met_scope : smp_scope),
          global.enum_cap);
      for (const std::string& w : run.warnings) std::cerr << "warning: " << w << "\n";

      bool oracle_ok = true;
      try {
        if (!ris::check_support(bn, e, run.final_importance, global.enum_cap)) {
          if (global.strict_support)
            throw ris::Error("sampler support misses posterior-positive configurations");
          std::cerr << "warning: sampler support misses posterior-positive "
                       "configurations\n";
        }
      } catch (const ris::CapacityError&) {
        oracle_ok = false;
      }

      std::cout << "variant " << ris::to_string(cfg.variant) << "\n"
                << "samplesReported " << run.estimate.sample_count << "\n"
                << "wallSamplesDrawn " << run.wall_samples_drawn << "\n"
                << "evidenceProbEstimate "
                << ris::format_probability(run.estimate.evidence_prob_estimate) << "\n";
      std::cout << marginals_text(bn, run.estimate.vertices, run.estimate.marginals);

      if (is_metrics && oracle_ok) {
        const double bound = ris::post_kld(bn, e, global.enum_cap);
        std::cout << "postKld " << ris::format_probability(bound) << "\n"
                  << "boundRegime "
                  << (bound > met_threshold ? "refractorable" : "limited") << "\n";
        const double kl = ris::posterior_kl(bn, e, run.final_importance, global.enum_cap);
        std::cout << "posteriorKl " << ris::format_probability(kl) << "\n";
        std::vector<std::vector<double>> oracle;
        for (ris::VertexId v : run.estimate.vertices)
          oracle.push_back(ris::posterior_marginal(bn, v, e, global.enum_cap));
        std::cout << "mse " << ris::format_probability(ris::mse(run.estimate, oracle))
                  << "\n";
      }
      return 0;
    }

    if (*metrics_cmd) {
      const ris::BayesianNetwork bn = load_network(met_network);
      const ris::Evidence e = ris::parse_evidence(ris::read_file(met_evidence), bn);
      const double bound = ris::post_kld(bn, e, global.enum_cap);
      std::cout << "postKld " << ris::format_probability(bound) << "\n"
                << "boundRegime "
                << (bound > met_threshold ? "refractorable" : "limited") << "\n";
      return 0;
    }

    if (*exp_cmd) {
      ris::ExperimentSpec spec = ris::parse_experiment_spec(ris::read_file(exp_spec));
      if (exp_threads > 0) spec.threads = exp_threads;
      const std::vector<ris::ExperimentRow> rows = ris::run_experiment(spec);
      emit(ris::to_csv(rows), exp_out);
      if (!exp_win.empty()) {
        const std::size_t comma = exp_win.find(',');
        if (comma == std::string::npos)
          throw ris::ValidationError("--win-ratio wants <challenger>,<baseline>");
        const auto a = ris::variant_from_string(exp_win.substr(0, comma));
        const auto b = ris::variant_from_string(exp_win.substr(comma + 1));
        if (!a || !b) throw ris::ValidationError("unknown variant in --win-ratio");
        std::cout << "winRatio " << ris::to_string(*a) << " vs " << ris::to_string(*b)
                  << " " << ris::format_probability(ris::win_ratio(rows, *a, *b, exp_min_n))
                  << "\n";
      }
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
