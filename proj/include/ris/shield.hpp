#pragma once

#include <cstdint>

#include "ris/bn.hpp"

namespace ris {

// Evidence shield of a target vertex: a subset of {X} + Ah(X), containing X,
// that d-separates the evidence vertex from the rest of {X} + Ah(X).
//
// The scan guarantees the d-separation property and determinism, never
// minimality: candidates are accepted greedily in reverse canonical order.
struct Shield {
  VertexId target = -1;
  VertexId evidence = -1;
  VertexSet members;
};

struct ShieldStats {
  std::uint64_t candidates = 0;
  std::uint64_t queue_visits = 0;
  std::uint64_t arc_visits = 0;
};

// Computes the shield of X against evidence vertex E. X must be an ancestor
// of E. Scans Ah(X) from the latest vertex backwards; a candidate joins the
// shield when a descendant walk from it (through vertices outside the shield
// that are ancestors of E but not descendants of X) reaches E. Each walk
// visits every arc at most once.
Shield compute_shield(const Dag& dag, VertexId x, VertexId evidence,
                      ShieldStats* stats = nullptr);

// Independent correctness check: the members must d-separate the evidence
// vertex from the rest of {X} + Ah(X).
bool verify_shield(const Dag& dag, const Shield& shield);

// Expanded parent set used for refractoring: shield members (minus X)
// united with the original parents. Every member precedes X canonically.
VertexSet refractor_parent_set(const Dag& dag, VertexId x, VertexId evidence,
                               ShieldStats* stats = nullptr);

}  // namespace ris
