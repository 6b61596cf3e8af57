#include <doctest.h>

#include <algorithm>
#include <set>

#include "dsep_oracle.hpp"
#include "fixtures.hpp"
#include "ris/bn.hpp"

using namespace ris;

TEST_CASE("topological order of a chain is the chain") {
  const auto bn = fixtures::chain3();
  CHECK(topological_order(bn.dag()) == std::vector<VertexId>{0, 1, 2});
}

TEST_CASE("topological order of a single vertex") {
  const auto bn = fixtures::make_bn({{"A", 2}}, {{}}, {{{0.5, 0.5}}}, "one");
  CHECK(topological_order(bn.dag()) == std::vector<VertexId>{0});
}

TEST_CASE("topological order breaks ties by ascending vertex id") {
  // Collider admits [A,B,E] and [B,A,E]; the canonical order picks A first.
  const auto bn = fixtures::collider();
  CHECK(topological_order(bn.dag()) == std::vector<VertexId>{0, 1, 2});
}

TEST_CASE("cycle detection names a vertex on the cycle") {
  std::vector<Variable> vars(2);
  vars[0].name = "A";
  vars[0].states = {"s0", "s1"};
  vars[1].name = "B";
  vars[1].states = {"s0", "s1"};
  CHECK_THROWS_AS(Dag(vars, {{1}, {0}}), StructuralError);
}

TEST_CASE("topological order is a permutation respecting every arc") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto bn = fixtures::random_net(seed, 10);
    const auto order = topological_order(bn.dag());
    REQUIRE(order.size() == bn.size());
    std::set<VertexId> seen(order.begin(), order.end());
    CHECK(seen.size() == bn.size());
    for (std::size_t v = 0; v < bn.size(); ++v)
      for (VertexId p : bn.dag().parents(static_cast<VertexId>(v)))
        CHECK(bn.dag().order_position(p) <
              bn.dag().order_position(static_cast<VertexId>(v)));
  }
}

TEST_CASE("ancestors of a chain end and of a root") {
  const auto bn = fixtures::chain3();
  CHECK(ancestors(bn.dag(), 2) == VertexSet{0, 1});
  CHECK(ancestors(bn.dag(), 0) == VertexSet{});
}

TEST_CASE("ancestors of the diamond sink") {
  const auto bn = fixtures::diamond();
  CHECK(ancestors(bn.dag(), 3) == VertexSet{0, 1, 2});
}

TEST_CASE("ancestors are always contained in the ahead set") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto bn = fixtures::random_net(seed, 9);
    for (std::size_t v = 0; v < bn.size(); ++v) {
      const auto anc = ancestors(bn.dag(), static_cast<VertexId>(v));
      const auto ahead = ahead_set(bn.dag(), static_cast<VertexId>(v));
      CHECK(set_difference(anc, ahead).empty());
    }
  }
}

TEST_CASE("ahead set follows the canonical order") {
  const auto chain = fixtures::chain3();
  CHECK(ahead_set(chain.dag(), 1) == VertexSet{0});
  CHECK(ahead_set(chain.dag(), 0) == VertexSet{});
  const auto coll = fixtures::collider();
  CHECK(ahead_set(coll.dag(), 2) == VertexSet{0, 1});
}

TEST_CASE("combined parents") {
  const auto coll = fixtures::collider();
  CHECK(combined_parents(coll.dag(), {2}) == VertexSet{0, 1});
  const auto chain = fixtures::chain3();
  CHECK(combined_parents(chain.dag(), {1, 2}) == VertexSet{0});
  CHECK(combined_parents(chain.dag(), {0}) == VertexSet{});
  CHECK_THROWS_AS(combined_parents(chain.dag(), {}), ValidationError);
}

TEST_CASE("unknown vertices are rejected") {
  const auto bn = fixtures::chain3();
  CHECK_THROWS_AS(ancestors(bn.dag(), 7), StructuralError);
  CHECK_THROWS_AS(ahead_set(bn.dag(), -1), StructuralError);
}

TEST_CASE("d-separation on the collider and chain") {
  const auto coll = fixtures::collider();
  CHECK(d_separated(coll.dag(), {0}, {1}, {}));
  CHECK_FALSE(d_separated(coll.dag(), {0}, {1}, {2}));
  const auto chain = fixtures::chain3();
  CHECK(d_separated(chain.dag(), {0}, {2}, {1}));
  CHECK_FALSE(d_separated(chain.dag(), {0}, {2}, {}));
}

TEST_CASE("d-separation matches exhaustive path enumeration on small dags") {
  Xoshiro rng(20240817);
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 600; ++seed) {
    const auto bn = fixtures::random_net(seed, 3 + static_cast<int>(seed % 6));
    const int n = static_cast<int>(bn.size());
    for (int trial = 0; trial < 6; ++trial) {
      // Each vertex lands in at most one role, so X, Y, Z stay disjoint.
      VertexSet x, y, z;
      for (int v = 0; v < n; ++v) {
        switch (rng.next_below(4)) {
          case 0: x.push_back(v); break;
          case 1: y.push_back(v); break;
          case 2: z.push_back(v); break;
          default: break;
        }
      }
      CHECK(d_separated(bn.dag(), x, y, z) ==
            testing_oracle::dsep_by_path_enumeration(bn.dag(), x, y, z));
      ++checked;
    }
  }
}

TEST_CASE("cpt_row reads the stored rows") {
  const auto coll = fixtures::collider();
  Configuration config(coll.size());
  config[0] = 1;
  config[1] = 1;
  const auto row = cpt_row(coll, 2, config);
  CHECK(row[0] == doctest::Approx(0.1));
  CHECK(row[1] == doctest::Approx(0.9));

  const auto chain = fixtures::chain3();
  Configuration empty_config(chain.size());
  const auto prior = cpt_row(chain, 0, empty_config);
  CHECK(prior[1] == doctest::Approx(0.3));

  Configuration bad(coll.size());
  bad[0] = 2;  // out of range
  bad[1] = 0;
  CHECK_THROWS_AS(cpt_row(coll, 2, bad), ValidationError);
  Configuration partial(coll.size());
  partial[0] = 0;  // B unassigned
  CHECK_THROWS_AS(cpt_row(coll, 2, partial), ValidationError);
}

TEST_CASE("configuration enumeration order and counts") {
  ConfigEnumerator two_binary({2, 2});
  std::vector<std::vector<int>> seen;
  std::vector<int> states;
  while (two_binary.next(states)) seen.push_back(states);
  CHECK(seen == std::vector<std::vector<int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});

  ConfigEnumerator ternary({3});
  CHECK(ternary.count() == 3);

  ConfigEnumerator twenty(std::vector<int>(20, 2));
  CHECK(twenty.count() == 1048576);

  CHECK_THROWS_AS(ConfigEnumerator(std::vector<int>(40, 2)), CapacityError);
  CHECK_NOTHROW(ConfigEnumerator(std::vector<int>(8, 2), 256));
  CHECK_THROWS_AS(ConfigEnumerator(std::vector<int>(9, 2), 256), CapacityError);
}

TEST_CASE("cpt rows must be normalized at construction") {
  CHECK_THROWS_AS(fixtures::make_bn({{"A", 2}}, {{}}, {{{0.5, 0.4}}}, "bad"),
                  ValidationError);
  CHECK_THROWS_AS(fixtures::make_bn({{"A", 2}}, {{}}, {{{1.2, -0.2}}}, "bad"),
                  ValidationError);
  // Off by 1e-10 stays within tolerance.
  CHECK_NOTHROW(fixtures::make_bn({{"A", 2}}, {{}}, {{{0.5, 0.5 + 1e-10}}}, "ok"));
}

TEST_CASE("evidence validation") {
  const auto bn = fixtures::chain3();
  Evidence e{{2, 1}};
  CHECK_NOTHROW(validate_evidence(bn, e));
  Evidence bad{{2, 5}};
  CHECK_THROWS_AS(validate_evidence(bn, bad), ValidationError);
  Evidence unknown{{9, 0}};
  CHECK_THROWS_AS(validate_evidence(bn, unknown), StructuralError);
}
