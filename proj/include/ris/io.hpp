#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ris/bn.hpp"

namespace ris {

// Line-oriented text format, '#' comments:
//   network <name>
//   variable <name> <state> <state> ...      (one per vertex, id order)
//   parents <name> <parentName> ...          (non-root vertices)
//   cpt <name>                                (followed by one probability
//       line per parent configuration, last parent varying fastest)
//
// Rows off sum-1 by more than 1e-9 but at most 1e-6 are renormalized with a
// warning; larger violations are errors.
BayesianNetwork parse_network(std::string_view text,
                              std::vector<std::string>* warnings = nullptr);

// Canonical form: vertices in id order, probabilities with 17 significant
// digits, rows in enumeration order. parse(serialize(bn)) reproduces the
// network exactly, and serializing again yields identical bytes.
std::string serialize_network(const BayesianNetwork& bn);

// Evidence files: one `<variableName> <stateLabel>` per line.
Evidence parse_evidence(std::string_view text, const BayesianNetwork& bn);
std::string serialize_evidence(const Evidence& e, const BayesianNetwork& bn);

// Shortest-exact decimal for doubles ("%.17g").
std::string format_probability(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace ris
