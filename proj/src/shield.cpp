#include "ris/shield.hpp"

#include <algorithm>
#include <deque>
#include <vector>

namespace ris {

Shield compute_shield(const Dag& dag, VertexId x, VertexId evidence,
                      ShieldStats* stats) {
  dag.check_vertex(x);
  dag.check_vertex(evidence);
  if (!dag.is_ancestor(x, evidence))
    throw ValidationError("shield is only defined for ancestors of the evidence vertex");

  const std::size_t n = dag.size();
  std::vector<char> in_shield(n, 0);
  in_shield[static_cast<std::size_t>(x)] = 1;

  // Ahead set of x in canonical order; scanned from the latest backwards.
  const int x_pos = dag.order_position(x);
  std::vector<VertexId> ahead(dag.order().begin(), dag.order().begin() + x_pos);

  std::vector<char> enqueued(n, 0);
  std::deque<VertexId> queue;
  for (std::size_t i = ahead.size(); i-- > 0;) {
    const VertexId candidate = ahead[i];
    if (stats) ++stats->candidates;
    queue.clear();
    std::fill(enqueued.begin(), enqueued.end(), 0);
    queue.push_back(candidate);
    enqueued[static_cast<std::size_t>(candidate)] = 1;
    while (!queue.empty()) {
      const VertexId v = queue.front();
      queue.pop_front();
      if (stats) ++stats->queue_visits;
      if (v == evidence) {
        in_shield[static_cast<std::size_t>(candidate)] = 1;
        break;
      }
      // Descend through unshielded evidence ancestors. Shield members block
      // (they are conditioned on), and only ancestors of the evidence can
      // lead the walk to it. Descendants of x other than x itself stay
      // traversable: a shared child of the candidate and x can mediate a
      // directed path to the evidence that bypasses x entirely.
      if (!in_shield[static_cast<std::size_t>(v)] && dag.is_ancestor(v, evidence)) {
        for (VertexId c : dag.children(v)) {
          if (stats) ++stats->arc_visits;
          if (!enqueued[static_cast<std::size_t>(c)]) {
            enqueued[static_cast<std::size_t>(c)] = 1;
            queue.push_back(c);
          }
        }
      }
    }
  }

  Shield shield;
  shield.target = x;
  shield.evidence = evidence;
  for (std::size_t v = 0; v < n; ++v)
    if (in_shield[v]) shield.members.push_back(static_cast<VertexId>(v));
  return shield;
}

bool verify_shield(const Dag& dag, const Shield& shield) {
  dag.check_vertex(shield.target);
  dag.check_vertex(shield.evidence);
  // The shield property only constrains ancestors of the evidence vertex;
  // for other targets it holds vacuously.
  if (!dag.is_ancestor(shield.target, shield.evidence)) return true;
  VertexSet covered = ahead_set(dag, shield.target);
  insert_into(covered, shield.target);
  const VertexSet rest = set_difference(covered, shield.members);
  return d_separated(dag, {shield.evidence}, rest, shield.members);
}

VertexSet refractor_parent_set(const Dag& dag, VertexId x, VertexId evidence,
                               ShieldStats* stats) {
  const Shield shield = compute_shield(dag, x, evidence, stats);
  VertexSet expanded = shield.members;
  expanded.erase(std::remove(expanded.begin(), expanded.end(), x), expanded.end());
  VertexSet base = dag.parents(x);
  std::sort(base.begin(), base.end());
  return set_union(expanded, base);
}

}  // namespace ris
