#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "ris/exact.hpp"
#include "ris/metrics.hpp"
#include "ris/sampling.hpp"

using namespace ris;

namespace {

// Direct-KL oracle value for the collider given E=1, derived by hand from
// the posterior (1/22, 6/22, 6/22, 9/22) against the product of its
// marginals. Frozen as the regression constant for the divergence floor.
constexpr double kColliderFloor = 0.036128212763858844;

std::vector<std::vector<double>> oracle_marginals(const BayesianNetwork& bn,
                                                  const Evidence& e) {
  std::vector<std::vector<double>> out;
  for (VertexId v : unobserved_vertices(bn.dag(), e))
    out.push_back(posterior_marginal(bn, v, e));
  return out;
}

// Structure-preserving importance function with random positive rows.
ImportanceFunction random_sp_function(const BayesianNetwork& bn, const Evidence& e,
                                      Xoshiro& rng) {
  RefractoredNetwork model =
      absorb_evidence(refractor(bn, e, RefractorScope::explicit_set({})));
  for (auto& slot : model.factors) {
    if (!slot) continue;
    for (auto& row : slot->rows) {
      double sum = 0.0;
      for (double& p : row) {
        p = 0.05 + rng.next_double();
        sum += p;
      }
      for (double& p : row) p /= sum;
    }
  }
  return importance_function(model);
}

}  // namespace

TEST_CASE("mse is zero on itself and one at maximal disagreement") {
  const auto bn = fixtures::chain3();
  const Evidence e{{2, 1}};
  PosteriorEstimate est;
  est.vertices = unobserved_vertices(bn.dag(), e);
  est.marginals = oracle_marginals(bn, e);
  CHECK(mse(est, est.marginals) == 0.0);

  PosteriorEstimate flipped;
  flipped.marginals = {{1.0, 0.0}};
  CHECK(mse(flipped, {{0.0, 1.0}}) == doctest::Approx(1.0));

  PosteriorEstimate bad;
  bad.marginals = {{1.0, 0.0}, {0.5, 0.5}};
  CHECK_THROWS_AS(mse(bad, {{0.0, 1.0}}), ValidationError);
}

TEST_CASE("sampling error decreases with the budget") {
  const auto bn = fixtures::chain3();
  const Evidence e{{2, 1}};
  const auto oracle = oracle_marginals(bn, e);
  std::vector<double> medians;
  for (std::uint64_t n : {1000ULL, 10000ULL, 100000ULL}) {
    std::vector<double> errors;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SamplerConfig cfg;
      cfg.total_samples = n;
      cfg.seed = seed;
      cfg.variant = Variant::LW;
      errors.push_back(mse(run_sampler(bn, e, cfg).estimate, oracle));
      CHECK(errors.back() > 0.0);
    }
    std::sort(errors.begin(), errors.end());
    medians.push_back(errors[errors.size() / 2]);
  }
  CHECK(medians[0] > medians[1]);
  CHECK(medians[1] > medians[2]);
}

TEST_CASE("the divergence floor of the collider matches the frozen oracle value") {
  const auto bn = fixtures::collider();
  const Evidence e{{2, 1}};
  const double floor = post_kld(bn, e);
  CHECK(floor == doctest::Approx(kColliderFloor).epsilon(1e-9));

  // Dual route: the structure-preserving plug-in reaches exactly the floor.
  const ImportanceFunction plugin = structure_preserving_plugin(bn, e);
  CHECK(posterior_kl(bn, e, plugin) == doctest::Approx(floor).epsilon(1e-9));
}

TEST_CASE("a chain conditioned on its endpoint keeps a zero floor") {
  // The posterior of a chain is still a chain, so the structure-preserving
  // plug-in is exact and the floor collapses to zero.
  const auto bn = fixtures::chain3();
  const Evidence e{{2, 1}};
  const double floor = post_kld(bn, e);
  CHECK(floor == doctest::Approx(0.0).epsilon(1e-12));
  const ImportanceFunction plugin = structure_preserving_plugin(bn, e);
  CHECK(posterior_kl(bn, e, plugin) <= 1e-9);
}

TEST_CASE("no evidence means no divergence floor") {
  const auto bn = fixtures::collider();
  CHECK(post_kld(bn, {}) == 0.0);
}

TEST_CASE("root evidence collapses the floor and the plug-in divergence") {
  const auto bn = fixtures::chain3();
  const Evidence e{{0, 1}};
  CHECK(post_kld(bn, e) <= 1e-12);
  const ImportanceFunction plugin = structure_preserving_plugin(bn, e);
  CHECK(posterior_kl(bn, e, plugin) <= 1e-9);
}

TEST_CASE("the family-term floor matches the direct divergence at the plug-in") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 40 && seed < 400; ++seed) {
    const auto bn = fixtures::random_net(seed ^ 0xE41, 4 + static_cast<int>(seed % 7));
    Evidence e;
    try {
      e = random_evidence(bn, 1 + static_cast<int>(seed % 3), seed);
    } catch (const ValidationError&) {
      continue;
    }
    const double floor = post_kld(bn, e);
    const double direct = posterior_kl(bn, e, structure_preserving_plugin(bn, e));
    CHECK(std::abs(floor - direct) <= 1e-9);
    ++checked;
  }
  CHECK(checked == 40);
}

TEST_CASE("random structure-preserving functions never beat the floor") {
  Xoshiro rng(55);
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 20 && seed < 200; ++seed) {
    const auto bn = fixtures::random_net(seed ^ 0xF10, 5 + static_cast<int>(seed % 5));
    Evidence e;
    try {
      e = random_evidence(bn, 1 + static_cast<int>(seed % 2), seed);
    } catch (const ValidationError&) {
      continue;
    }
    const double floor = post_kld(bn, e);
    for (int k = 0; k < 20; ++k) {
      const double kl = posterior_kl(bn, e, random_sp_function(bn, e, rng));
      CHECK(kl >= floor - 1e-9);
    }
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("the refractored plug-in beats positive floors") {
  for (const auto& bn : {fixtures::collider(), fixtures::xor_collider()}) {
    const Evidence e{{2, 1}};
    const double floor = post_kld(bn, e);
    REQUIRE(floor > 0.03);
    const double kl =
        posterior_kl(bn, e, refractored_plugin(bn, e, RefractorScope::full_ancestors()));
    CHECK(kl < floor);
    CHECK(kl <= 1e-9);  // the rewritten structure carries the posterior exactly
  }
}

TEST_CASE("the refractored plug-in never exceeds the floor on random networks") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 25 && seed < 250; ++seed) {
    const auto bn = fixtures::random_net(seed ^ 0x9A1, 4 + static_cast<int>(seed % 7));
    Evidence e;
    try {
      e = random_evidence(bn, 1 + static_cast<int>(seed % 2), seed);
    } catch (const ValidationError&) {
      continue;
    }
    const double floor = post_kld(bn, e);
    const double kl =
        posterior_kl(bn, e, refractored_plugin(bn, e, RefractorScope::full_ancestors()));
    CHECK(kl <= floor + 1e-9);
    ++checked;
  }
  CHECK(checked == 25);
}

TEST_CASE("support violations report infinite divergence instead of throwing") {
  const auto bn = fixtures::collider();
  const Evidence e{{2, 1}};
  ImportanceFunction fn = importance_function(
      absorb_evidence(refractor(bn, e, RefractorScope::explicit_set({}))));
  fn.factors[0].rows[0] = {1.0, 0.0};
  CHECK(std::isinf(posterior_kl(bn, e, fn)));
}

TEST_CASE("bound regime classification") {
  const auto xor_bn = fixtures::xor_collider();
  const Evidence e{{2, 1}};
  // Floor of the near-parity collider, frozen from the direct-KL oracle.
  CHECK(post_kld(xor_bn, e) == doctest::Approx(0.637145646205098).epsilon(1e-9));
  CHECK(classify_bound_regime(xor_bn, e, 0.2));
  CHECK(classify_bound_regime(xor_bn, e, 0.1));
  CHECK(classify_bound_regime(fixtures::collider(), e, 0.0));

  const auto chain = fixtures::chain3();
  CHECK_FALSE(classify_bound_regime(chain, Evidence{{0, 1}}, 0.1));
}
