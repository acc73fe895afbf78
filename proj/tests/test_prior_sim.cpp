#include <doctest.h>

#include <cmath>
#include <vector>

#include "mcclust/prior_sim.hpp"

using namespace mcclust;

TEST_CASE("two groups share a cluster with probability 1/(1+alpha)") {
  Rng rng(7);
  for (double alpha : {0.5, 1.0, 2.0}) {
    Hyperparameters hyper;
    hyper.alpha = alpha;
    const std::int64_t draws = 50000;
    std::int64_t hits = 0;
    for (std::int64_t d = 0; d < draws; ++d) {
      const PriorDraw pd = simulate_urn(2, {1, 1}, hyper, rng);
      hits += (pd.z[0] == pd.z[1]);
    }
    const double p = 1.0 / (1.0 + alpha);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
    CHECK(std::abs(static_cast<double>(hits) / draws - p) < 4.0 * sigma);
  }
}

TEST_CASE("stick-breaking weights have the GEM moments") {
  Hyperparameters hyper;
  hyper.alpha = 1.5;
  hyper.eta = 1.0;
  hyper.v = 2.0;
  Rng rng(13);
  const int T = default_truncation(hyper.alpha);
  const int draws = 20000;
  double mean_first = 0.0, sum_sq = 0.0;
  for (int d = 0; d < draws; ++d) {
    const SticksDraw sd = simulate_sticks(T, hyper, rng);
    mean_first += sd.pi[0];
    for (double w : sd.pi) sum_sq += w * w;
    double tau_total = 0.0;
    for (double t : sd.tau[0]) tau_total += t;
    REQUIRE(tau_total == doctest::Approx(1.0).epsilon(1e-9));
  }
  // E[pi_1] = 1/(1+alpha) and E[sum pi_k^2] = 1/(1+alpha).
  CHECK(mean_first / draws == doctest::Approx(1.0 / 2.5).epsilon(0.03));
  CHECK(sum_sq / draws == doctest::Approx(1.0 / 2.5).epsilon(0.03));
}

TEST_CASE("pair-probability closed form collapses to one on the full space") {
  for (double a : {0.5, 2.0}) {
    for (double v : {0.5, 2.0}) {
      for (double eta : {0.5, 2.0}) {
        Hyperparameters hyper;
        hyper.alpha = a;
        hyper.v = v;
        hyper.eta = eta;
        CHECK(ndpm_pair_probability(true, 1.0, 1.0, 1.0, hyper) == doctest::Approx(1.0));
        CHECK(ndpm_pair_probability(false, 1.0, 1.0, 1.0, hyper) == doctest::Approx(1.0));
      }
    }
  }
}

TEST_CASE("pair-probability closed form on the hand-derived unit case") {
  // alpha = v = eta = 1 with a two-atom uniform base. Summing the same-atom
  // coincidence over both atoms gives 7/8 within a group and 13/16 across
  // groups (urn argument: same table 1/2; else same dish 1/2; else same base
  // atom 1/2; across groups an extra 1/(1+alpha) cluster step).
  Hyperparameters hyper;
  double same = 0.0, cross = 0.0;
  for (double s : {0.5, 0.5}) {
    same += ndpm_pair_probability(true, s, s, s, hyper);
    cross += ndpm_pair_probability(false, s, s, s, hyper);
  }
  CHECK(same == doctest::Approx(0.875).epsilon(1e-12));
  CHECK(cross == doctest::Approx(0.8125).epsilon(1e-12));
}

TEST_CASE("closed form matches the urn estimate on overlapping sets") {
  const std::vector<double> base = {0.4, 0.35, 0.25};
  const std::vector<bool> a1 = {true, true, false};   // mass 0.75
  const std::vector<bool> a2 = {false, true, true};   // mass 0.60, overlap 0.35
  Hyperparameters hyper;
  hyper.alpha = 1.2;
  hyper.v = 0.7;
  hyper.eta = 1.6;
  Rng rng(55);
  const std::int64_t draws = 200000;
  for (bool same_group : {true, false}) {
    const double closed = ndpm_pair_probability(same_group, 0.75, 0.60, 0.35, hyper);
    const double mc = ndpm_pair_mc(same_group, a1, a2, base, hyper, draws, rng);
    const double sigma = std::sqrt(closed * (1.0 - closed) / static_cast<double>(draws));
    CHECK(std::abs(mc - closed) < 4.0 * sigma);
  }
}

TEST_CASE("closed form matches the urn estimate on disjoint sets") {
  const std::vector<double> base = {0.5, 0.3, 0.2};
  const std::vector<bool> a1 = {true, false, false};
  const std::vector<bool> a2 = {false, false, true};
  Hyperparameters hyper;
  Rng rng(56);
  const std::int64_t draws = 200000;
  for (bool same_group : {true, false}) {
    const double closed = ndpm_pair_probability(same_group, 0.5, 0.2, 0.0, hyper);
    const double mc = ndpm_pair_mc(same_group, a1, a2, base, hyper, draws, rng);
    const double sigma = std::sqrt(closed * (1.0 - closed) / static_cast<double>(draws)) + 1e-4;
    CHECK(std::abs(mc - closed) < 4.0 * sigma);
  }
}

TEST_CASE("marginalization report passes on a representative cell") {
  Hyperparameters hyper;
  hyper.alpha = 0.5;
  hyper.v = 2.0;
  hyper.eta = 1.0;
  Rng rng(99);
  const MarginalizationReport report =
      check_marginalization(hyper, 2, {2, 1}, 40000, rng, {0.5, 0.3, 0.2}, {0.4, 0.35, 0.25});
  CHECK(report.all_pass);
  CHECK(report.checks.size() == 3);
}

TEST_CASE("finite-base urn draws stay within the atom sets") {
  UrnBases bases;
  bases.context = std::vector<double>{0.6, 0.4};
  bases.content = std::vector<double>{0.3, 0.3, 0.4};
  Hyperparameters hyper;
  Rng rng(3);
  for (int d = 0; d < 200; ++d) {
    const PriorDraw pd = simulate_urn(3, {2, 1, 2}, hyper, rng, bases);
    for (int j = 0; j < 3; ++j) {
      CHECK(pd.context_atom(j) >= 0);
      CHECK(pd.context_atom(j) < 2);
    }
    CHECK(pd.content_atom(0, 0) >= 0);
    CHECK(pd.content_atom(0, 0) < 3);
  }
}
