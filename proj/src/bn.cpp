#include "ris/bn.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace ris {

bool contains(const VertexSet& set, VertexId v) {
  return std::binary_search(set.begin(), set.end(), v);
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void insert_into(VertexSet& set, VertexId v) {
  auto it = std::lower_bound(set.begin(), set.end(), v);
  if (it == set.end() || *it != v) set.insert(it, v);
}

Dag::Dag(std::vector<Variable> variables,
         std::vector<std::vector<VertexId>> parents)
    : variables_(std::move(variables)), parents_(std::move(parents)) {
  const std::size_t n = variables_.size();
  if (parents_.size() != n)
    throw StructuralError("parent list count does not match vertex count");
  for (std::size_t i = 0; i < n; ++i) {
    Variable& var = variables_[i];
    var.id = static_cast<VertexId>(i);
    if (var.name.empty())
      throw ValidationError("vertex " + std::to_string(i) + " has no name");
    if (var.arity() < 2)
      throw ValidationError("variable '" + var.name + "' needs at least 2 states");
    for (std::size_t a = 0; a < var.states.size(); ++a)
      for (std::size_t b = a + 1; b < var.states.size(); ++b)
        if (var.states[a] == var.states[b])
          throw ValidationError("variable '" + var.name + "' has duplicate state '" +
                                var.states[a] + "'");
  }

  children_.assign(n, {});
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<VertexId> seen;
    for (VertexId p : parents_[v]) {
      if (p < 0 || static_cast<std::size_t>(p) >= n)
        throw StructuralError("unknown parent id " + std::to_string(p) +
                              " of vertex '" + variables_[v].name + "'");
      if (p == static_cast<VertexId>(v))
        throw StructuralError("vertex '" + variables_[v].name + "' lists itself as parent");
      if (std::find(seen.begin(), seen.end(), p) != seen.end())
        throw StructuralError("duplicate parent of vertex '" + variables_[v].name + "'");
      seen.push_back(p);
      children_[static_cast<std::size_t>(p)].push_back(static_cast<VertexId>(v));
    }
  }

  // Kahn with a min-heap on VertexId: the canonical order is deterministic.
  std::vector<int> pending(n, 0);
  for (std::size_t v = 0; v < n; ++v) pending[v] = static_cast<int>(parents_[v].size());
  std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (pending[v] == 0) ready.push(static_cast<VertexId>(v));
  order_.reserve(n);
  while (!ready.empty()) {
    const VertexId v = ready.top();
    ready.pop();
    order_.push_back(v);
    for (VertexId c : children_[static_cast<std::size_t>(v)])
      if (--pending[static_cast<std::size_t>(c)] == 0) ready.push(c);
  }
  if (order_.size() != n) {
    for (std::size_t v = 0; v < n; ++v)
      if (pending[v] > 0)
        throw StructuralError("cycle detected through vertex '" + variables_[v].name + "'");
  }
  order_pos_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    order_pos_[static_cast<std::size_t>(order_[i])] = static_cast<int>(i);

  // Ancestor closure in topological order: An(v) = union of An(p) + {p}.
  ancestors_ = BitMatrix(n);
  for (VertexId v : order_) {
    for (VertexId p : parents_[static_cast<std::size_t>(v)]) {
      ancestors_.set(static_cast<std::size_t>(v), static_cast<std::size_t>(p));
      ancestors_.or_row(static_cast<std::size_t>(v), static_cast<std::size_t>(p));
    }
  }
}

void Dag::check_vertex(VertexId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= variables_.size())
    throw StructuralError("unknown vertex id " + std::to_string(v));
}

const Variable& Dag::variable(VertexId v) const {
  check_vertex(v);
  return variables_[static_cast<std::size_t>(v)];
}

VertexId Dag::vertex_by_name(const std::string& name) const {
  for (const Variable& var : variables_)
    if (var.name == name) return var.id;
  return -1;
}

const std::vector<VertexId>& Dag::parents(VertexId v) const {
  check_vertex(v);
  return parents_[static_cast<std::size_t>(v)];
}

const std::vector<VertexId>& Dag::children(VertexId v) const {
  check_vertex(v);
  return children_[static_cast<std::size_t>(v)];
}

int Dag::order_position(VertexId v) const {
  check_vertex(v);
  return order_pos_[static_cast<std::size_t>(v)];
}

bool Dag::is_ancestor(VertexId ancestor, VertexId descendant) const {
  check_vertex(ancestor);
  check_vertex(descendant);
  return ancestors_.get(static_cast<std::size_t>(descendant),
                        static_cast<std::size_t>(ancestor));
}

BayesianNetwork::BayesianNetwork(Dag dag, std::vector<Cpt> cpts, std::string name)
    : dag_(std::move(dag)), cpts_(std::move(cpts)), name_(std::move(name)) {
  const std::size_t n = dag_.size();
  if (cpts_.size() != n) throw ValidationError("need exactly one CPT per vertex");
  for (std::size_t v = 0; v < n; ++v) {
    Cpt& table = cpts_[v];
    table.owner = static_cast<VertexId>(v);
    const Variable& var = dag_.variable(static_cast<VertexId>(v));
    if (table.parent_order != dag_.parents(static_cast<VertexId>(v)))
      throw ValidationError("CPT parent order of '" + var.name +
                            "' does not match the graph");
    std::vector<int> arities;
    for (VertexId p : table.parent_order) arities.push_back(dag_.variable(p).arity());
    const std::uint64_t expected_rows = config_space_size(arities);
    if (table.rows.size() != expected_rows)
      throw ValidationError("CPT of '" + var.name + "' has " +
                            std::to_string(table.rows.size()) + " rows, expected " +
                            std::to_string(expected_rows));
    for (const auto& row : table.rows) {
      if (row.size() != static_cast<std::size_t>(var.arity()))
        throw ValidationError("CPT row width of '" + var.name +
                              "' does not match its arity");
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0 && p <= 1.0) || !std::isfinite(p))
          throw ValidationError("CPT entry of '" + var.name + "' outside [0, 1]");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance)
        throw ValidationError("CPT row of '" + var.name + "' sums to " +
                              std::to_string(sum));
    }
  }
}

std::uint64_t BayesianNetwork::cpt_row_index(VertexId v,
                                             const Configuration& config) const {
  const Cpt& table = cpts_[static_cast<std::size_t>(v)];
  std::uint64_t index = 0;
  for (VertexId p : table.parent_order) {
    const int arity = dag_.variable(p).arity();
    const int state = config[p];
    if (state == Configuration::kUnassigned)
      throw ValidationError("parent '" + dag_.variable(p).name + "' of '" +
                            dag_.variable(v).name + "' is unassigned");
    if (state < 0 || state >= arity)
      throw ValidationError("state " + std::to_string(state) + " out of range for '" +
                            dag_.variable(p).name + "'");
    index = index * static_cast<std::uint64_t>(arity) + static_cast<std::uint64_t>(state);
  }
  return index;
}

std::vector<VertexId> topological_order(const Dag& dag) { return dag.order(); }

VertexSet ancestors(const Dag& dag, VertexId v) {
  dag.check_vertex(v);
  VertexSet out;
  for (std::size_t a = 0; a < dag.size(); ++a)
    if (dag.is_ancestor(static_cast<VertexId>(a), v))
      out.push_back(static_cast<VertexId>(a));
  return out;
}

VertexSet ahead_set(const Dag& dag, VertexId v) {
  const int pos = dag.order_position(v);
  VertexSet out;
  for (int i = 0; i < pos; ++i) out.push_back(dag.order()[static_cast<std::size_t>(i)]);
  std::sort(out.begin(), out.end());
  return out;
}

VertexSet combined_parents(const Dag& dag, const VertexSet& members) {
  if (members.empty()) throw ValidationError("combined_parents of an empty set");
  VertexSet out;
  for (VertexId m : members)
    for (VertexId p : dag.parents(m)) insert_into(out, p);
  return set_difference(out, members);
}

VertexSet combined_ancestors(const Dag& dag, const VertexSet& members) {
  VertexSet out;
  for (VertexId m : members) {
    dag.check_vertex(m);
    for (std::size_t a = 0; a < dag.size(); ++a)
      if (dag.is_ancestor(static_cast<VertexId>(a), m))
        insert_into(out, static_cast<VertexId>(a));
  }
  return set_difference(out, members);
}

std::span<const double> cpt_row(const BayesianNetwork& bn, VertexId v,
                                const Configuration& config) {
  bn.dag().check_vertex(v);
  const std::uint64_t index = bn.cpt_row_index(v, config);
  return bn.cpt(v).rows[index];
}

std::uint64_t config_space_size(std::span<const int> arities, std::uint64_t cap) {
  std::uint64_t count = 1;
  for (int arity : arities) {
    if (arity < 1) throw ValidationError("arity must be positive");
    if (count > cap / static_cast<std::uint64_t>(arity))
      throw CapacityError("configuration space exceeds cap of " + std::to_string(cap));
    count *= static_cast<std::uint64_t>(arity);
  }
  return count;
}

ConfigEnumerator::ConfigEnumerator(std::vector<int> arities, std::uint64_t cap)
    : arities_(std::move(arities)) {
  count_ = config_space_size(arities_, cap);
}

bool ConfigEnumerator::next(std::vector<int>& states) {
  if (emitted_ == count_) return false;
  if (emitted_ == 0) {
    states.assign(arities_.size(), 0);
    ++emitted_;
    return true;
  }
  // Odometer step, last position fastest.
  for (std::size_t i = arities_.size(); i-- > 0;) {
    if (++states[i] < arities_[i]) break;
    states[i] = 0;
  }
  ++emitted_;
  return true;
}

std::vector<int> arities_of(const Dag& dag, const std::vector<VertexId>& vars) {
  std::vector<int> out;
  out.reserve(vars.size());
  for (VertexId v : vars) out.push_back(dag.variable(v).arity());
  return out;
}

ConfigEnumerator enumerate_configs(const std::vector<Variable>& vars,
                                   std::uint64_t cap) {
  if (vars.empty()) throw ValidationError("cannot enumerate an empty variable list");
  std::vector<int> arities;
  arities.reserve(vars.size());
  for (const Variable& var : vars) arities.push_back(var.arity());
  return ConfigEnumerator(std::move(arities), cap);
}

void validate_evidence(const BayesianNetwork& bn, const Evidence& e) {
  for (const auto& [v, s] : e) {
    bn.dag().check_vertex(v);
    if (s < 0 || s >= bn.dag().variable(v).arity())
      throw ValidationError("evidence state " + std::to_string(s) +
                            " out of range for '" + bn.dag().variable(v).name + "'");
  }
}

std::vector<VertexId> unobserved_vertices(const Dag& dag, const Evidence& e) {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < dag.size(); ++v)
    if (!e.count(static_cast<VertexId>(v))) out.push_back(static_cast<VertexId>(v));
  return out;
}

}  // namespace ris
