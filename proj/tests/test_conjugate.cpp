#include <doctest.h>

#include <cmath>
#include <vector>

#include "mcclust/conjugate.hpp"

using namespace mcclust;

TEST_CASE("dirichlet-categorical predictive is the Polya urn rule") {
  DirichletCategorical dc(3, 0.5);
  dc.add(0);
  dc.add(0);
  dc.add(2);
  // counts (2,0,1), gamma = 0.5 each, total 3 + 1.5
  CHECK(dc.log_predictive(0) == doctest::Approx(std::log(2.5 / 4.5)).epsilon(1e-12));
  CHECK(dc.log_predictive(1) == doctest::Approx(std::log(0.5 / 4.5)).epsilon(1e-12));
  dc.remove(0);
  CHECK(dc.log_predictive(0) == doctest::Approx(std::log(1.5 / 3.5)).epsilon(1e-12));
}

TEST_CASE("dirichlet-categorical block marginal equals the sequential product") {
  DirichletCategorical dc(4, 0.7);
  dc.add(1);
  dc.add(3);
  const std::vector<int> block = {0, 1, 1, 3, 2};
  double seq = 0.0;
  DirichletCategorical scratch = dc;
  for (int v : block) {
    seq += scratch.log_predictive(v);
    scratch.add(v);
  }
  CHECK(dc.log_block_marginal(block) == doctest::Approx(seq).epsilon(1e-12));
  // and is permutation invariant
  const std::vector<int> perm = {3, 1, 2, 0, 1};
  CHECK(dc.log_block_marginal(perm) == doctest::Approx(seq).epsilon(1e-12));
}

TEST_CASE("dirichlet-categorical guards") {
  DirichletCategorical dc(2, 1.0);
  CHECK_THROWS_AS(dc.remove(0), StateCorruptionError);
  CHECK_THROWS_AS(dc.add(5), StructuralError);
  CHECK_THROWS_AS(DirichletCategorical(0, 1.0), DomainError);
  CHECK_THROWS_AS(DirichletCategorical(2, -1.0), DomainError);
}

TEST_CASE("normal-gamma posterior closed form on a hand example") {
  NormalGamma ng(0.0, 1.0, 2.0, 3.0);
  ng.add(1.0);
  ng.add(3.0);
  // n=2, mean=2, ss=2; kappa_n=3, m_n=(0+4)/3, a_n=3, b_n=3+1+ (1*2*4)/(2*3)
  const auto p = ng.posterior();
  CHECK(p.kappa == doctest::Approx(3.0));
  CHECK(p.m == doctest::Approx(4.0 / 3.0));
  CHECK(p.a == doctest::Approx(3.0));
  CHECK(p.b == doctest::Approx(3.0 + 1.0 + 0.5 * (1.0 * 2.0 * 4.0) / 3.0));
}

TEST_CASE("student-t predictive integrates to one") {
  NormalGamma ng(0.5, 2.0, 1.5, 2.5);
  ng.add(1.2);
  ng.add(-0.3);
  ng.add(0.9);
  // Simpson rule over a wide bracket; the t tails beyond +-80 contribute < 1e-6.
  const double lo = -80.0, hi = 80.0;
  const int steps = 200000;
  const double h = (hi - lo) / steps;
  double integral = 0.0;
  for (int s = 0; s <= steps; ++s) {
    const double x = lo + h * s;
    const double w = (s == 0 || s == steps) ? 1.0 : (s % 2 == 1 ? 4.0 : 2.0);
    integral += w * std::exp(ng.log_predictive(x));
  }
  integral *= h / 3.0;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("normal-gamma block marginal is permutation invariant") {
  NormalGamma ng(0.0, 1.0, 1.0, 1.0);
  const std::vector<double> a = {0.4, -1.2, 2.2, 0.0};
  const std::vector<double> b = {2.2, 0.0, 0.4, -1.2};
  CHECK(ng.log_block_marginal(a) == doctest::Approx(ng.log_block_marginal(b)).epsilon(1e-10));
}

TEST_CASE("normal-gamma removal resets accumulated rounding at zero") {
  NormalGamma ng(0.0, 1.0, 1.0, 1.0);
  ng.add(1e8);
  ng.add(-1e8);
  ng.remove(1e8);
  ng.remove(-1e8);
  CHECK(ng.n() == 0);
  CHECK(ng.sum() == 0.0);
  CHECK(ng.sum_sq() == 0.0);
  CHECK_THROWS_AS(ng.remove(0.0), StateCorruptionError);
}
