#pragma once

// Exhaustive d-separation checker for small graphs: enumerates every simple
// undirected path and tests it for activity under the usual blocking rules.
// Deliberately independent of the reachability implementation it audits.

#include <vector>

#include "ris/bn.hpp"

namespace testing_oracle {

inline bool path_is_active(const ris::Dag& dag, const std::vector<ris::VertexId>& path,
                           const std::vector<char>& in_z,
                           const std::vector<char>& z_or_anc_of_z) {
  auto is_parent = [&](ris::VertexId p, ris::VertexId c) {
    for (ris::VertexId q : dag.parents(c))
      if (q == p) return true;
    return false;
  };
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const ris::VertexId prev = path[i - 1];
    const ris::VertexId v = path[i];
    const ris::VertexId next = path[i + 1];
    const bool collider = is_parent(prev, v) && is_parent(next, v);
    if (collider) {
      if (!z_or_anc_of_z[static_cast<std::size_t>(v)]) return false;
    } else {
      if (in_z[static_cast<std::size_t>(v)]) return false;
    }
  }
  return true;
}

inline bool dsep_by_path_enumeration(const ris::Dag& dag, ris::VertexSet x_set,
                                     ris::VertexSet y_set, const ris::VertexSet& z_set) {
  x_set = ris::set_difference(x_set, z_set);
  y_set = ris::set_difference(y_set, z_set);
  if (x_set.empty() || y_set.empty()) return true;

  const std::size_t n = dag.size();
  std::vector<char> in_z(n, 0);
  for (ris::VertexId z : z_set) in_z[static_cast<std::size_t>(z)] = 1;
  std::vector<char> z_or_anc(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (in_z[v]) {
      z_or_anc[v] = 1;
      continue;
    }
    for (ris::VertexId z : z_set)
      if (dag.is_ancestor(static_cast<ris::VertexId>(v), z)) z_or_anc[v] = 1;
  }

  std::vector<std::vector<ris::VertexId>> neighbors(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (ris::VertexId p : dag.parents(static_cast<ris::VertexId>(v))) {
      neighbors[v].push_back(p);
      neighbors[static_cast<std::size_t>(p)].push_back(static_cast<ris::VertexId>(v));
    }
  }

  std::vector<char> on_path(n, 0);
  std::vector<ris::VertexId> path;
  bool connected = false;

  auto dfs = [&](auto&& self, ris::VertexId v) -> void {
    if (connected) return;
    on_path[static_cast<std::size_t>(v)] = 1;
    path.push_back(v);
    if (path.size() > 1 && ris::contains(y_set, v) &&
        path_is_active(dag, path, in_z, z_or_anc)) {
      connected = true;
    } else {
      for (ris::VertexId next : neighbors[static_cast<std::size_t>(v)])
        if (!on_path[static_cast<std::size_t>(next)]) self(self, next);
    }
    path.pop_back();
    on_path[static_cast<std::size_t>(v)] = 0;
  };

  for (ris::VertexId x : x_set) {
    dfs(dfs, x);
    if (connected) return false;
  }
  return true;
}

}  // namespace testing_oracle
