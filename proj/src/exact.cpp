#include "ris/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ris {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::uint64_t FactorTable::index_of(const Configuration& config) const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const int state = config[vars[i]];
    if (state == Configuration::kUnassigned)
      throw ValidationError("table vertex unassigned in configuration");
    index = index * static_cast<std::uint64_t>(arities[i]) + static_cast<std::uint64_t>(state);
  }
  return index;
}

double FactorTable::total() const {
  long double sum = 0.0L;
  for (double v : values) sum += v;
  return static_cast<double>(sum);
}

void FactorTable::normalize() {
  const double sum = total();
  if (sum <= 0.0) throw ImpossibleEvidenceError("table has zero total mass");
  for (double& v : values) v /= sum;
}

JointEvaluator::JointEvaluator(const BayesianNetwork& bn) : bn_(&bn) {
  log_rows_.resize(bn.size());
  for (std::size_t v = 0; v < bn.size(); ++v) {
    const auto& rows = bn.cpt(static_cast<VertexId>(v)).rows;
    log_rows_[v].resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      log_rows_[v][r].resize(rows[r].size());
      for (std::size_t s = 0; s < rows[r].size(); ++s)
        log_rows_[v][r][s] = rows[r][s] > 0.0 ? std::log(rows[r][s]) : kNegInf;
    }
  }
}

double JointEvaluator::log_joint(const Configuration& full) const {
  double acc = 0.0;
  for (std::size_t v = 0; v < bn_->size(); ++v) {
    const int state = full[static_cast<VertexId>(v)];
    if (state == Configuration::kUnassigned)
      throw ValidationError("joint probability needs a full configuration");
    const std::uint64_t row = bn_->cpt_row_index(static_cast<VertexId>(v), full);
    acc += log_rows_[v][row][static_cast<std::size_t>(state)];
  }
  return acc;
}

void for_each_completion(
    const BayesianNetwork& bn, const Evidence& e,
    const std::function<void(const Configuration&, double)>& fn,
    std::uint64_t cap) {
  validate_evidence(bn, e);
  const JointEvaluator joint(bn);
  const std::vector<VertexId> free = unobserved_vertices(bn.dag(), e);
  Configuration config(bn.size());
  config.apply(e);

  ConfigEnumerator en(arities_of(bn.dag(), free), cap);
  std::vector<int> states;
  while (en.next(states)) {
    for (std::size_t i = 0; i < free.size(); ++i) config[free[i]] = states[i];
    const double log_mass = joint.log_joint(config);
    fn(config, log_mass == kNegInf ? 0.0 : std::exp(log_mass));
  }
}

double joint_probability(const BayesianNetwork& bn, const Configuration& full) {
  const JointEvaluator joint(bn);
  const double log_mass = joint.log_joint(full);
  return log_mass == kNegInf ? 0.0 : std::exp(log_mass);
}

double evidence_probability(const BayesianNetwork& bn, const Evidence& e,
                            std::uint64_t cap) {
  long double sum = 0.0L;
  for_each_completion(bn, e, [&](const Configuration&, double mass) { sum += mass; }, cap);
  if (sum <= 0.0L)
    throw ImpossibleEvidenceError("evidence has zero probability");
  return static_cast<double>(sum);
}

std::vector<FactorTable> posterior_tables(
    const BayesianNetwork& bn, const std::vector<std::vector<VertexId>>& subsets,
    const Evidence& e, double* evidence_prob, std::uint64_t cap) {
  std::vector<FactorTable> tables(subsets.size());
  // Extended-precision accumulation: downstream bound computations cancel
  // these sums against each other almost exactly.
  std::vector<std::vector<long double>> sums(subsets.size());
  for (std::size_t t = 0; t < subsets.size(); ++t) {
    tables[t].vars = subsets[t];
    tables[t].arities = arities_of(bn.dag(), subsets[t]);
    sums[t].assign(config_space_size(tables[t].arities, cap), 0.0L);
  }
  long double total = 0.0L;
  for_each_completion(
      bn, e,
      [&](const Configuration& config, double mass) {
        total += mass;
        if (mass == 0.0) return;
        for (std::size_t t = 0; t < tables.size(); ++t)
          sums[t][tables[t].index_of(config)] += mass;
      },
      cap);
  if (total <= 0.0L)
    throw ImpossibleEvidenceError("evidence has zero probability");
  if (evidence_prob) *evidence_prob = static_cast<double>(total);
  for (std::size_t t = 0; t < tables.size(); ++t) {
    tables[t].values.resize(sums[t].size());
    for (std::size_t i = 0; i < sums[t].size(); ++i)
      tables[t].values[i] = static_cast<double>(sums[t][i] / total);
  }
  return tables;
}

std::vector<double> posterior_marginal(const BayesianNetwork& bn, VertexId v,
                                       const Evidence& e, std::uint64_t cap) {
  bn.dag().check_vertex(v);
  if (e.count(v))
    throw ValidationError("posterior marginal of an evidence vertex");
  auto tables = posterior_tables(bn, {{v}}, e, nullptr, cap);
  return tables[0].values;
}

FactorTable family_posterior(const BayesianNetwork& bn, VertexId v,
                             const VertexSet& parent_set, const Evidence& e,
                             std::uint64_t cap) {
  bn.dag().check_vertex(v);
  std::vector<VertexId> family{v};
  for (VertexId p : parent_set) {
    bn.dag().check_vertex(p);
    family.push_back(p);
  }
  for (VertexId m : family)
    if (e.count(m))
      throw ValidationError("family posterior overlaps the evidence set");
  // Family laid out in canonical order for a deterministic table shape.
  std::sort(family.begin(), family.end(), [&](VertexId a, VertexId b) {
    return bn.dag().order_position(a) < bn.dag().order_position(b);
  });
  auto tables = posterior_tables(bn, {family}, e, nullptr, cap);
  return std::move(tables[0]);
}

FactorTable posterior_joint(const BayesianNetwork& bn, const Evidence& e,
                            std::uint64_t cap) {
  std::vector<VertexId> free;
  for (VertexId v : bn.dag().order())
    if (!e.count(v)) free.push_back(v);
  auto tables = posterior_tables(bn, {free}, e, nullptr, cap);
  return std::move(tables[0]);
}

}  // namespace ris
