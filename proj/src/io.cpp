#include "ris/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

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

struct PendingVariable {
  Variable var;
  std::vector<std::string> parent_names;
  std::vector<std::vector<double>> rows;
  bool has_cpt = false;
  int declared_line = 0;
};

double parse_probability(const std::string& token, int line_no) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ParseError(line_no, "expected a probability, got '" + token + "'");
  }
  if (used != token.size())
    throw ParseError(line_no, "trailing junk in probability '" + token + "'");
  if (!std::isfinite(value) || value < 0.0)
    throw ParseError(line_no, "probability '" + token + "' out of range");
  return value;
}

}  // namespace

BayesianNetwork parse_network(std::string_view text,
                              std::vector<std::string>* warnings) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;

  std::string network_name;
  std::vector<PendingVariable> pending;
  std::map<std::string, std::size_t> by_name;

  // CPT rows still expected for the variable currently being read.
  PendingVariable* reading_cpt = nullptr;
  std::uint64_t rows_expected = 0;

  auto arity_of = [&](const std::string& name) {
    return static_cast<int>(pending[by_name.at(name)].var.states.size());
  };
  auto expected_rows = [&](const PendingVariable& pv) {
    std::uint64_t rows = 1;
    for (const std::string& p : pv.parent_names)
      rows *= static_cast<std::uint64_t>(arity_of(p));
    return rows;
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;

    if (reading_cpt) {
      // Probability lines until the row count is satisfied.
      const int arity = static_cast<int>(reading_cpt->var.states.size());
      if (tokens.size() != static_cast<std::size_t>(arity))
        throw ParseError(line_no, "CPT row of '" + reading_cpt->var.name + "' needs " +
                                      std::to_string(arity) + " probabilities, got " +
                                      std::to_string(tokens.size()));
      std::vector<double> row;
      row.reserve(tokens.size());
      for (const std::string& token : tokens)
        row.push_back(parse_probability(token, line_no));
      double sum = 0.0;
      for (double p : row) sum += p;
      if (std::abs(sum - 1.0) > kRowRenormBand)
        throw ParseError(line_no, "CPT row of '" + reading_cpt->var.name + "' sums to " +
                                      std::to_string(sum));
      bool out_of_unit = false;
      for (double p : row) out_of_unit = out_of_unit || p > 1.0;
      if (std::abs(sum - 1.0) > kRowSumTolerance || out_of_unit) {
        for (double& p : row) p /= sum;
        if (warnings)
          warnings->push_back("line " + std::to_string(line_no) + ": CPT row of '" +
                              reading_cpt->var.name + "' renormalized (sum was " +
                              format_probability(sum) + ")");
      }
      reading_cpt->rows.push_back(std::move(row));
      if (--rows_expected == 0) reading_cpt = nullptr;
      continue;
    }

    const std::string& keyword = tokens[0];
    if (keyword == "network") {
      if (tokens.size() != 2) throw ParseError(line_no, "usage: network <name>");
      if (!network_name.empty()) throw ParseError(line_no, "duplicate network line");
      network_name = tokens[1];
    } else if (keyword == "variable") {
      if (network_name.empty())
        throw ParseError(line_no, "the network line must come first");
      if (tokens.size() < 4)
        throw ParseError(line_no, "usage: variable <name> <state> <state> ...");
      if (by_name.count(tokens[1]))
        throw ParseError(line_no, "duplicate variable '" + tokens[1] + "'");
      PendingVariable pv;
      pv.var.name = tokens[1];
      pv.var.states.assign(tokens.begin() + 2, tokens.end());
      pv.declared_line = line_no;
      by_name[tokens[1]] = pending.size();
      pending.push_back(std::move(pv));
    } else if (keyword == "parents") {
      if (tokens.size() < 3)
        throw ParseError(line_no, "usage: parents <name> <parentName> ...");
      auto it = by_name.find(tokens[1]);
      if (it == by_name.end())
        throw ParseError(line_no, "unknown variable '" + tokens[1] + "'");
      PendingVariable& pv = pending[it->second];
      if (!pv.parent_names.empty())
        throw ParseError(line_no, "duplicate parents line for '" + tokens[1] + "'");
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        if (!by_name.count(tokens[i]))
          throw ParseError(line_no, "unknown parent '" + tokens[i] + "'");
        pv.parent_names.push_back(tokens[i]);
      }
    } else if (keyword == "cpt") {
      if (tokens.size() != 2) throw ParseError(line_no, "usage: cpt <name>");
      auto it = by_name.find(tokens[1]);
      if (it == by_name.end())
        throw ParseError(line_no, "unknown variable '" + tokens[1] + "'");
      PendingVariable& pv = pending[it->second];
      if (pv.has_cpt)
        throw ParseError(line_no, "duplicate cpt block for '" + tokens[1] + "'");
      pv.has_cpt = true;
      reading_cpt = &pv;
      rows_expected = expected_rows(pv);
    } else {
      throw ParseError(line_no, "unknown keyword '" + keyword + "'");
    }
  }

  if (network_name.empty()) throw ParseError(line_no, "missing network line");
  if (reading_cpt)
    throw ParseError(line_no, "unterminated CPT block for '" +
                                  reading_cpt->var.name + "'");
  if (pending.empty()) throw ParseError(line_no, "network has no variables");

  std::vector<Variable> variables;
  std::vector<std::vector<VertexId>> parents;
  std::vector<Cpt> cpts;
  for (std::size_t v = 0; v < pending.size(); ++v) {
    PendingVariable& pv = pending[v];
    if (!pv.has_cpt)
      throw ParseError(pv.declared_line, "variable '" + pv.var.name + "' has no cpt block");
    variables.push_back(pv.var);
    std::vector<VertexId> parent_ids;
    for (const std::string& name : pv.parent_names)
      parent_ids.push_back(static_cast<VertexId>(by_name.at(name)));
    parents.push_back(parent_ids);
    Cpt table;
    table.owner = static_cast<VertexId>(v);
    table.parent_order = std::move(parent_ids);
    table.rows = std::move(pv.rows);
    cpts.push_back(std::move(table));
  }
  return BayesianNetwork(Dag(std::move(variables), std::move(parents)),
                         std::move(cpts), network_name);
}

std::string format_probability(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string serialize_network(const BayesianNetwork& bn) {
  std::string out;
  out += "network " + (bn.name().empty() ? std::string("bn") : bn.name()) + "\n";
  const Dag& dag = bn.dag();
  for (const Variable& var : dag.variables()) {
    out += "variable " + var.name;
    for (const std::string& state : var.states) out += " " + state;
    out += "\n";
  }
  for (const Variable& var : dag.variables()) {
    const auto& parents = dag.parents(var.id);
    if (parents.empty()) continue;
    out += "parents " + var.name;
    for (VertexId p : parents) out += " " + dag.variable(p).name;
    out += "\n";
  }
  for (const Variable& var : dag.variables()) {
    out += "cpt " + var.name + "\n";
    for (const auto& row : bn.cpt(var.id).rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += " ";
        out += format_probability(row[i]);
      }
      out += "\n";
    }
  }
  return out;
}

Evidence parse_evidence(std::string_view text, const BayesianNetwork& bn) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  Evidence e;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2)
      throw ParseError(line_no, "usage: <variableName> <stateLabel>");
    const VertexId v = bn.dag().vertex_by_name(tokens[0]);
    if (v < 0) throw ParseError(line_no, "unknown variable '" + tokens[0] + "'");
    const Variable& var = bn.dag().variable(v);
    int state = -1;
    for (std::size_t s = 0; s < var.states.size(); ++s)
      if (var.states[s] == tokens[1]) state = static_cast<int>(s);
    if (state < 0)
      throw ParseError(line_no, "variable '" + tokens[0] + "' has no state '" +
                                    tokens[1] + "'");
    if (e.count(v))
      throw ParseError(line_no, "duplicate evidence for '" + tokens[0] + "'");
    e[v] = state;
  }
  return e;
}

std::string serialize_evidence(const Evidence& e, const BayesianNetwork& bn) {
  std::string out;
  for (const auto& [v, s] : e) {
    const Variable& var = bn.dag().variable(v);
    out += var.name + " " + var.states[static_cast<std::size_t>(s)] + "\n";
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

}  // namespace ris
