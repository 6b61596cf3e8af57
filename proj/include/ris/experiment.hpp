#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ris/metrics.hpp"
#include "ris/refractor.hpp"
#include "ris/sampling.hpp"

namespace ris {

// Declarative experiment: networks, per-network evidence sets, sampler
// variants, a sample-count grid, and seeds. Key-value text format:
//
//   network  <id> <path>
//   evidence <id> <networkId> <path>
//   variant  <LW|SIS|AIS|RIS_SIS|RIS_AIS>
//   samples  <from> <to> <step>        (or: samples-list <n> <n> ...)
//   seed     <s>                       (repeatable)
//   scope    <FULL_ANCESTORS|PARENTS_OF_EVIDENCE>
//   stages   <n>
//   stage-samples <n>                  (0 = even split of the budget)
//   smoothing <pseudocount>
//   flatten  <threshold>
//   threads  <n>
//   enum-cap <n>
struct ExperimentSpec {
  struct NetworkRef {
    std::string id;
    std::string path;
  };
  struct EvidenceRef {
    std::string id;
    std::string network_id;
    std::string path;
  };

  std::vector<NetworkRef> networks;
  std::vector<EvidenceRef> evidences;
  std::vector<Variant> variants;
  std::vector<std::uint64_t> sample_grid;
  std::vector<std::uint64_t> seeds;
  ScopeMode scope = ScopeMode::FullAncestors;
  int stages = 10;
  std::uint64_t samples_per_stage = 0;
  double smoothing = 1.0;
  double flatten = 0.04;
  int threads = 1;
  std::uint64_t enum_cap = kDefaultEnumCap;
};

ExperimentSpec parse_experiment_spec(std::string_view text);

// One CSV row. Oracle-dependent columns are empty when the exact oracle is
// out of capacity for the cell's network.
struct ExperimentRow {
  std::string network_id;
  std::string evidence_id;
  Variant variant = Variant::LW;
  ScopeMode scope = ScopeMode::FullAncestors;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::optional<double> mse;
  std::optional<double> posterior_kl;
  std::optional<double> post_kld;
  double evidence_prob_estimate = 0.0;
  std::uint64_t wall_samples_drawn = 0;
};

// Runs every (evidence, variant, N, seed) cell. Cells execute independently
// (optionally in parallel); rows come back in deterministic sorted order.
std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec);

// Header comment pins the RNG algorithms; identical specs yield identical
// bytes on one platform.
std::string to_csv(const std::vector<ExperimentRow>& rows);

// Fraction of (network, evidence, N) cells with N >= min_n in which
// `challenger` has strictly lower median-over-seeds MSE than `baseline`.
double win_ratio(const std::vector<ExperimentRow>& rows, Variant challenger,
                 Variant baseline, std::uint64_t min_n = 0);

}  // namespace ris
