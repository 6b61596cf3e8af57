#include <doctest.h>

#include <cmath>
#include <map>

#include "fixtures.hpp"
#include "ris/exact.hpp"
#include "ris/netgen.hpp"

using namespace ris;

namespace {

Configuration full_config(const BayesianNetwork& bn, std::vector<int> states) {
  Configuration config(bn.size());
  for (std::size_t v = 0; v < states.size(); ++v)
    config[static_cast<VertexId>(v)] = states[v];
  return config;
}

}  // namespace

TEST_CASE("joint probability of chain3 is the three-factor product") {
  const auto bn = fixtures::chain3();
  CHECK(joint_probability(bn, full_config(bn, {1, 1, 1})) ==
        doctest::Approx(0.3 * 0.7 * 0.9).epsilon(1e-12));
  CHECK_THROWS_AS(joint_probability(bn, full_config(bn, {1, 1})), ValidationError);
}

TEST_CASE("deterministic tables give 0/1 joints") {
  const auto bn = fixtures::make_bn({{"A", 2}, {"B", 2}}, {{}, {0}},
                                    {{{1.0, 0.0}}, {{0.0, 1.0}, {1.0, 0.0}}},
                                    "deterministic");
  CHECK(joint_probability(bn, full_config(bn, {0, 1})) == doctest::Approx(1.0));
  CHECK(joint_probability(bn, full_config(bn, {0, 0})) == doctest::Approx(0.0));
  CHECK(joint_probability(bn, full_config(bn, {1, 0})) == doctest::Approx(0.0));
}

TEST_CASE("joint probabilities sum to one") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto bn = fixtures::random_net(seed, 8, {2, 3});
    long double total = 0.0L;
    for_each_completion(bn, {}, [&](const Configuration&, double mass) { total += mass; });
    CHECK(static_cast<double>(total) == doctest::Approx(1.0).epsilon(1e-9));
  }
  // Full desk scale: twenty binary variables.
  const auto big = random_network(20, 30, {2}, 424);
  CHECK(evidence_probability(big, {}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("evidence probability on chain3") {
  const auto bn = fixtures::chain3();
  CHECK(evidence_probability(bn, {{2, 1}}) == doctest::Approx(0.575).epsilon(1e-12));
  CHECK(evidence_probability(bn, {}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("impossible evidence is a distinguished error") {
  const auto bn = fixtures::make_bn({{"A", 2}, {"B", 2}}, {{}, {0}},
                                    {{{1.0, 0.0}}, {{0.5, 0.5}, {0.5, 0.5}}},
                                    "zero_root");
  CHECK_THROWS_AS(evidence_probability(bn, {{0, 1}}), ImpossibleEvidenceError);
}

TEST_CASE("posterior marginal of chain3 given its endpoint") {
  const auto bn = fixtures::chain3();
  const auto marginal = posterior_marginal(bn, 1, {{2, 1}});
  CHECK(marginal[1] == doctest::Approx(0.9 * 0.35 / 0.575).epsilon(1e-9));
  CHECK(marginal[0] + marginal[1] == doctest::Approx(1.0).epsilon(1e-12));

  const auto prior = posterior_marginal(bn, 1, {});
  CHECK(prior[1] == doctest::Approx(0.35).epsilon(1e-12));

  CHECK_THROWS_AS(posterior_marginal(bn, 2, {{2, 1}}), ValidationError);
}

TEST_CASE("marginal of a vertex disconnected from the evidence is its prior") {
  const auto bn = fixtures::make_bn(
      {{"A", 2}, {"B", 2}}, {{}, {}},
      {{{0.3, 0.7}}, {{0.6, 0.4}}}, "disconnected");
  const auto marginal = posterior_marginal(bn, 0, {{1, 1}});
  CHECK(marginal[0] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("family posterior sums to one and nests the marginal") {
  const auto bn = fixtures::chain3();
  const auto family = family_posterior(bn, 1, {0}, {{2, 1}});
  REQUIRE(family.values.size() == 4);
  CHECK(family.total() == doctest::Approx(1.0).epsilon(1e-9));

  // Collapsing the parent axis reproduces the posterior marginal.
  const auto marginal = posterior_marginal(bn, 1, {{2, 1}});
  Configuration config(bn.size());
  for (int b = 0; b < 2; ++b) {
    double sum = 0.0;
    for (int a = 0; a < 2; ++a) {
      config[0] = a;
      config[1] = b;
      sum += family.values[family.index_of(config)];
    }
    CHECK(sum == doctest::Approx(marginal[static_cast<std::size_t>(b)]).epsilon(1e-9));
  }

  // Empty parent set reduces to the marginal itself.
  const auto lone = family_posterior(bn, 1, {}, {{2, 1}});
  CHECK(lone.values[1] == doctest::Approx(marginal[1]).epsilon(1e-12));

  // Prior family marginal with no evidence.
  const auto prior = family_posterior(bn, 1, {0}, {});
  config[0] = 1;
  config[1] = 1;
  CHECK(prior.values[prior.index_of(config)] == doctest::Approx(0.3 * 0.7).epsilon(1e-12));

  CHECK_THROWS_AS(family_posterior(bn, 1, {2}, {{2, 1}}), ValidationError);
}

TEST_CASE("posterior joint of chain3 given C=1") {
  const auto bn = fixtures::chain3();
  const auto joint = posterior_joint(bn, {{2, 1}});
  REQUIRE(joint.values.size() == 4);
  Configuration config(bn.size());
  config[0] = 1;
  config[1] = 1;
  CHECK(joint.values[joint.index_of(config)] ==
        doctest::Approx(0.189 / 0.575).epsilon(1e-9));
  CHECK(joint.total() == doctest::Approx(1.0).epsilon(1e-9));

  // Single unobserved vertex: equals the marginal.
  const auto pair_joint = posterior_joint(bn, {{0, 1}, {2, 1}});
  const auto marginal = posterior_marginal(bn, 1, {{0, 1}, {2, 1}});
  CHECK(pair_joint.values[0] == doctest::Approx(marginal[0]).epsilon(1e-12));
  CHECK(pair_joint.values[1] == doctest::Approx(marginal[1]).epsilon(1e-12));

  // No evidence: the prior joint.
  const auto prior = posterior_joint(bn, {});
  config[0] = 1;
  config[1] = 1;
  config[2] = 1;
  CHECK(prior.values[prior.index_of(config)] == doctest::Approx(0.189).epsilon(1e-12));
}

TEST_CASE("evidence probability equals unnormalized posterior mass") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto bn = fixtures::random_net(seed + 100, 7, {2, 3});
    const Evidence e = random_evidence(bn, 2, seed);
    const double prob = evidence_probability(bn, e);
    long double mass = 0.0L;
    for_each_completion(bn, e, [&](const Configuration&, double m) { mass += m; });
    CHECK(prob == doctest::Approx(static_cast<double>(mass)).epsilon(1e-12));
  }
}

// For vertices with no observed descendants, conditioning on the rest of
// the ahead set plus the evidence never shifts the local conditional: the
// posterior conditional equals the base row with evidence parents pinned.
TEST_CASE("non-ancestors of the evidence keep their base conditionals") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 25 && seed < 200; ++seed) {
    const auto bn = fixtures::random_net(seed, 7, {2});
    Evidence e;
    try {
      e = random_evidence(bn, 2, seed ^ 0xE);
    } catch (const ValidationError&) {
      continue;
    }
    VertexSet evidence_set;
    for (const auto& [v, s] : e) evidence_set.push_back(v);
    const VertexSet an_e = combined_ancestors(bn.dag(), evidence_set);

    for (std::size_t v = 0; v < bn.size(); ++v) {
      const VertexId x = static_cast<VertexId>(v);
      if (e.count(x) || contains(an_e, x)) continue;

      // Unobserved ahead-set of x.
      std::vector<VertexId> ahead;
      for (VertexId u : ahead_set(bn.dag(), x))
        if (!e.count(u)) ahead.push_back(u);

      std::vector<VertexId> block = ahead;
      block.push_back(x);
      double evidence_prob = 0.0;
      const auto tables = posterior_tables(bn, {block}, e, &evidence_prob);
      const FactorTable& table = tables[0];

      ConfigEnumerator en(table.arities);
      std::vector<int> states;
      Configuration lookup(bn.size());
      lookup.apply(e);
      std::uint64_t index = 0;
      std::vector<double> cell(2);
      while (en.next(states)) {
        const std::uint64_t i = index++;
        if (static_cast<int>(i % 2) != 0) continue;  // x is last, visit pairs
        for (std::size_t k = 0; k < table.vars.size(); ++k)
          lookup[table.vars[k]] = states[k];
        cell[0] = table.values[i];
        cell[1] = table.values[i + 1];
        const double mass = cell[0] + cell[1];
        if (mass <= 0.0) continue;
        const auto base = cpt_row(bn, x, lookup);
        CHECK(cell[1] / mass == doctest::Approx(base[1]).epsilon(1e-9));
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}
