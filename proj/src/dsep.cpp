#include <algorithm>
#include <vector>

#include "ris/bn.hpp"

namespace ris {

namespace {

// Entry direction of a trail arriving at a vertex.
enum : int { kFromParent = 0, kFromChild = 1 };

}  // namespace

// Active-trail reachability: a trail continues through v as a chain or fork
// only if v is unobserved, and through a collider only if v or one of its
// descendants is observed. States are (vertex, entry direction), so the
// pass is linear in vertices and arcs.
bool d_separated(const Dag& dag, const VertexSet& x_set, const VertexSet& y_set,
                 const VertexSet& z_set) {
  const std::size_t n = dag.size();
  for (VertexId v : x_set) dag.check_vertex(v);
  for (VertexId v : y_set) dag.check_vertex(v);
  for (VertexId v : z_set) dag.check_vertex(v);

  std::vector<char> in_z(n, 0);
  for (VertexId v : z_set) in_z[static_cast<std::size_t>(v)] = 1;

  // Conditioned members of X/Y are separated by definition.
  VertexSet sources = set_difference(x_set, z_set);
  VertexSet targets = set_difference(y_set, z_set);
  for (VertexId v : sources)
    if (contains(targets, v))
      throw ValidationError("d-separation query with overlapping X and Y");
  if (sources.empty() || targets.empty()) return true;

  std::vector<char> is_target(n, 0);
  for (VertexId v : targets) is_target[static_cast<std::size_t>(v)] = 1;

  // z_anc[v]: v in Z or some descendant of v is in Z (opens colliders).
  std::vector<char> z_anc(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (in_z[v]) {
      z_anc[v] = 1;
      continue;
    }
    for (VertexId z : z_set)
      if (dag.is_ancestor(static_cast<VertexId>(v), z)) {
        z_anc[v] = 1;
        break;
      }
  }

  std::vector<char> visited(2 * n, 0);
  std::vector<std::pair<VertexId, int>> stack;
  auto push = [&](VertexId v, int dir) {
    const std::size_t key = 2 * static_cast<std::size_t>(v) + static_cast<std::size_t>(dir);
    if (!visited[key]) {
      visited[key] = 1;
      stack.emplace_back(v, dir);
    }
  };

  // Source endpoints impose no blocking of their own.
  for (VertexId x : sources) {
    for (VertexId c : dag.children(x)) push(c, kFromParent);
    for (VertexId p : dag.parents(x)) push(p, kFromChild);
  }

  while (!stack.empty()) {
    const auto [v, dir] = stack.back();
    stack.pop_back();
    if (is_target[static_cast<std::size_t>(v)]) return false;

    if (dir == kFromChild) {
      // Fork or upward chain: continues only through unobserved vertices.
      if (in_z[static_cast<std::size_t>(v)]) continue;
      for (VertexId p : dag.parents(v)) push(p, kFromChild);
      for (VertexId c : dag.children(v)) push(c, kFromParent);
    } else {
      // Downward chain needs v unobserved; collider needs Z below or at v.
      if (!in_z[static_cast<std::size_t>(v)])
        for (VertexId c : dag.children(v)) push(c, kFromParent);
      if (z_anc[static_cast<std::size_t>(v)])
        for (VertexId p : dag.parents(v)) push(p, kFromChild);
    }
  }
  return true;
}

}  // namespace ris
