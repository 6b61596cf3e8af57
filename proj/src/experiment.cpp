#include "ris/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <sstream>

#include "ris/exact.hpp"
#include "ris/io.hpp"

namespace ris {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    if (token[0] == '#') break;
    tokens.push_back(token);
  }
  return tokens;
}

std::uint64_t parse_u64(const std::string& token, int line_no) {
  try {
    return std::stoull(token);
  } catch (const std::exception&) {
    throw ParseError(line_no, "expected a count, got '" + token + "'");
  }
}

double parse_real(const std::string& token, int line_no) {
  try {
    return std::stod(token);
  } catch (const std::exception&) {
    throw ParseError(line_no, "expected a number, got '" + token + "'");
  }
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::string_view text) {
  ExperimentSpec spec;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];
    if (key == "network") {
      if (tokens.size() != 3) throw ParseError(line_no, "usage: network <id> <path>");
      spec.networks.push_back({tokens[1], tokens[2]});
    } else if (key == "evidence") {
      if (tokens.size() != 4)
        throw ParseError(line_no, "usage: evidence <id> <networkId> <path>");
      spec.evidences.push_back({tokens[1], tokens[2], tokens[3]});
    } else if (key == "variant") {
      if (tokens.size() != 2) throw ParseError(line_no, "usage: variant <name>");
      const auto variant = variant_from_string(tokens[1]);
      if (!variant) throw ParseError(line_no, "unknown variant '" + tokens[1] + "'");
      spec.variants.push_back(*variant);
    } else if (key == "samples") {
      if (tokens.size() != 4)
        throw ParseError(line_no, "usage: samples <from> <to> <step>");
      const std::uint64_t from = parse_u64(tokens[1], line_no);
      const std::uint64_t to = parse_u64(tokens[2], line_no);
      const std::uint64_t step = parse_u64(tokens[3], line_no);
      if (from < 1 || step < 1 || to < from)
        throw ParseError(line_no, "bad sample grid");
      for (std::uint64_t n = from; n <= to; n += step) spec.sample_grid.push_back(n);
    } else if (key == "samples-list") {
      for (std::size_t i = 1; i < tokens.size(); ++i)
        spec.sample_grid.push_back(parse_u64(tokens[i], line_no));
    } else if (key == "seed") {
      if (tokens.size() != 2) throw ParseError(line_no, "usage: seed <s>");
      spec.seeds.push_back(parse_u64(tokens[1], line_no));
    } else if (key == "scope") {
      if (tokens.size() != 2) throw ParseError(line_no, "usage: scope <mode>");
      if (tokens[1] == "FULL_ANCESTORS")
        spec.scope = ScopeMode::FullAncestors;
      else if (tokens[1] == "PARENTS_OF_EVIDENCE")
        spec.scope = ScopeMode::ParentsOfEvidence;
      else
        throw ParseError(line_no, "unknown scope '" + tokens[1] + "'");
    } else if (key == "stages") {
      spec.stages = static_cast<int>(parse_u64(tokens.at(1), line_no));
    } else if (key == "stage-samples") {
      spec.samples_per_stage = parse_u64(tokens.at(1), line_no);
    } else if (key == "smoothing") {
      spec.smoothing = parse_real(tokens.at(1), line_no);
    } else if (key == "flatten") {
      spec.flatten = parse_real(tokens.at(1), line_no);
    } else if (key == "threads") {
      spec.threads = static_cast<int>(parse_u64(tokens.at(1), line_no));
    } else if (key == "enum-cap") {
      spec.enum_cap = parse_u64(tokens.at(1), line_no);
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
  if (spec.seeds.empty()) spec.seeds.push_back(0);
  return spec;
}

namespace {

struct EvidenceContext {
  const BayesianNetwork* bn = nullptr;
  std::string network_id;
  std::string evidence_id;
  Evidence evidence;
  bool oracle_available = false;
  std::optional<double> post_kld_value;
  std::vector<std::vector<double>> oracle_marginals;
};

ExperimentRow run_cell(const EvidenceContext& ctx, Variant variant, ScopeMode scope,
                       std::uint64_t n, std::uint64_t seed,
                       const ExperimentSpec& spec) {
  ExperimentRow row;
  row.network_id = ctx.network_id;
  row.evidence_id = ctx.evidence_id;
  row.variant = variant;
  row.scope = scope;
  row.n = n;
  row.seed = seed;
  row.post_kld = ctx.post_kld_value;

  SamplerConfig cfg;
  cfg.total_samples = n;
  cfg.seed = seed;
  cfg.learning_stages = spec.stages;
  cfg.samples_per_stage = spec.samples_per_stage;
  cfg.smoothing = spec.smoothing;
  cfg.flatten_threshold = spec.flatten;
  cfg.variant = variant;

  RefractorScope rscope = scope == ScopeMode::ParentsOfEvidence
                              ? RefractorScope::parents_of_evidence()
                              : RefractorScope::full_ancestors();
  const SamplerRun run = run_sampler(*ctx.bn, ctx.evidence, cfg, rscope, spec.enum_cap);
  row.evidence_prob_estimate = run.estimate.evidence_prob_estimate;
  row.wall_samples_drawn = run.wall_samples_drawn;
  if (ctx.oracle_available) {
    row.mse = mse(run.estimate, ctx.oracle_marginals);
    row.posterior_kl =
        posterior_kl(*ctx.bn, ctx.evidence, run.final_importance, spec.enum_cap);
  }
  return row;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec) {
  std::map<std::string, BayesianNetwork> networks;
  for (const auto& ref : spec.networks) {
    if (networks.count(ref.id))
      throw ValidationError("duplicate network id '" + ref.id + "'");
    networks.emplace(ref.id, parse_network(read_file(ref.path)));
  }

  std::vector<EvidenceContext> contexts;
  for (const auto& ref : spec.evidences) {
    auto it = networks.find(ref.network_id);
    if (it == networks.end())
      throw ValidationError("evidence '" + ref.id + "' names unknown network '" +
                            ref.network_id + "'");
    EvidenceContext ctx;
    ctx.bn = &it->second;
    ctx.network_id = ref.network_id;
    ctx.evidence_id = ref.id;
    ctx.evidence = parse_evidence(read_file(ref.path), it->second);
    try {
      ctx.post_kld_value = post_kld(*ctx.bn, ctx.evidence, spec.enum_cap);
      for (VertexId v : unobserved_vertices(ctx.bn->dag(), ctx.evidence))
        ctx.oracle_marginals.push_back(
            posterior_marginal(*ctx.bn, v, ctx.evidence, spec.enum_cap));
      ctx.oracle_available = true;
    } catch (const CapacityError&) {
      ctx.oracle_available = false;  // sampling columns are still emitted
    }
    contexts.push_back(std::move(ctx));
  }

  // Cells in deterministic sorted order (variant order as declared).
  struct Cell {
    const EvidenceContext* ctx;
    Variant variant;
    std::uint64_t n;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const EvidenceContext& ctx : contexts)
    for (Variant variant : spec.variants)
      for (std::uint64_t n : spec.sample_grid)
        for (std::uint64_t seed : spec.seeds)
          cells.push_back({&ctx, variant, n, seed});

  std::vector<ExperimentRow> rows(cells.size());
  const int threads = std::max(1, spec.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      rows[i] = run_cell(*cells[i].ctx, cells[i].variant, spec.scope, cells[i].n,
                         cells[i].seed, spec);
  } else {
    std::vector<std::future<void>> futures;
    futures.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      futures.push_back(std::async(std::launch::async, [&, t]() {
        for (std::size_t i = static_cast<std::size_t>(t); i < cells.size();
             i += static_cast<std::size_t>(threads))
          rows[i] = run_cell(*cells[i].ctx, cells[i].variant, spec.scope, cells[i].n,
                             cells[i].seed, spec);
      }));
    }
    for (auto& future : futures) future.get();
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const ExperimentRow& a, const ExperimentRow& b) {
                     auto key = [](const ExperimentRow& r) {
                       return std::make_tuple(r.network_id, r.evidence_id,
                                              static_cast<int>(r.variant), r.n, r.seed);
                     };
                     return key(a) < key(b);
                   });
  return rows;
}

namespace {

std::string format_optional(const std::optional<double>& value) {
  if (!value) return "";
  if (std::isinf(*value)) return *value > 0 ? "inf" : "-inf";
  return format_probability(*value);
}

}  // namespace

std::string to_csv(const std::vector<ExperimentRow>& rows) {
  std::string out =
      "# rng=xoshiro256++ seed-derivation=splitmix64\n"
      "networkId,evidenceId,variant,scope,N,seed,mse,posteriorKl,postKld,"
      "evidenceProbEstimate,wallSamplesDrawn\n";
  for (const ExperimentRow& row : rows) {
    out += row.network_id + "," + row.evidence_id + "," + to_string(row.variant) + "," +
           to_string(row.scope) + "," + std::to_string(row.n) + "," +
           std::to_string(row.seed) + "," + format_optional(row.mse) + "," +
           format_optional(row.posterior_kl) + "," + format_optional(row.post_kld) +
           "," + format_probability(row.evidence_prob_estimate) + "," +
           std::to_string(row.wall_samples_drawn) + "\n";
  }
  return out;
}

double win_ratio(const std::vector<ExperimentRow>& rows, Variant challenger,
                 Variant baseline, std::uint64_t min_n) {
  // Median-over-seeds MSE per (network, evidence, N, variant).
  std::map<std::tuple<std::string, std::string, std::uint64_t, int>,
           std::vector<double>>
      cells;
  for (const ExperimentRow& row : rows) {
    if (row.n < min_n || !row.mse) continue;
    if (row.variant != challenger && row.variant != baseline) continue;
    cells[{row.network_id, row.evidence_id, row.n, static_cast<int>(row.variant)}]
        .push_back(*row.mse);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  };
  std::uint64_t wins = 0;
  std::uint64_t total = 0;
  for (const auto& [key, values] : cells) {
    if (std::get<3>(key) != static_cast<int>(challenger)) continue;
    auto base_key = key;
    std::get<3>(base_key) = static_cast<int>(baseline);
    auto it = cells.find(base_key);
    if (it == cells.end()) continue;
    ++total;
    if (median(values) < median(it->second)) ++wins;
  }
  if (total == 0) return 0.0;
  return static_cast<double>(wins) / static_cast<double>(total);
}

}  // namespace ris
