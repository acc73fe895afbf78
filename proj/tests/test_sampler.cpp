#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "mcclust/run.hpp"
#include "mcclust/sampler.hpp"
#include "support/forward_sim.hpp"
#include "support/tiny.hpp"

using namespace mcclust;
using namespace mcclust::testsupport;

namespace {

GroupedCorpus oracle_corpus(Rng& rng) {
  std::vector<std::vector<int>> tokens(5);
  std::vector<double> ctx(5);
  for (std::size_t j = 0; j < tokens.size(); ++j) {
    tokens[j].resize(2 + rng.integer(2));
    for (int& w : tokens[j]) w = static_cast<int>(rng.integer(3));
    ctx[j] = rng.normal(0.0, 1.5);
  }
  return tiny_gaussian_corpus(std::move(tokens), std::move(ctx), 3);
}

ModelState random_state(const GroupedCorpus& corpus, const Hyperparameters& hyper, Rng& rng) {
  std::vector<int> counts;
  for (const auto& g : corpus.groups) counts.push_back(static_cast<int>(g.tokens.size()));
  const ForwardAssignments fa =
      forward_assignments(static_cast<int>(corpus.num_groups()), counts, hyper, rng);
  return state_from_assignments(corpus, fa.z, fa.l, fa.epsilon, hyper, rng.integer(1u << 30));
}

}  // namespace

TEST_CASE("group conditional matches the enumerated joint density") {
  Rng rng(2024);
  Hyperparameters hyper;
  hyper.alpha = 1.3;
  hyper.v = 0.8;
  hyper.eta = 1.1;
  for (int rep = 0; rep < 12; ++rep) {
    const GroupedCorpus corpus = oracle_corpus(rng);
    ModelState state = random_state(corpus, hyper, rng);
    const int j = static_cast<int>(rng.integer(corpus.num_groups()));
    detach_group(state, j);
    const std::vector<double> logits = z_logits(state, j);
    const int K = state.K();
    REQUIRE(static_cast<int>(logits.size()) == K + 1);
    std::vector<double> joint(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) {
      std::vector<int> z = state.z;
      z[static_cast<std::size_t>(j)] = k;
      joint[static_cast<std::size_t>(k)] =
          joint_log_prob(corpus, z, state.l, state.epsilon, hyper);
    }
    for (int k = 0; k <= K; ++k) {
      CHECK(logits[static_cast<std::size_t>(k)] - logits[0] ==
            doctest::Approx(joint[static_cast<std::size_t>(k)] - joint[0]).epsilon(1e-8));
    }
    attach_group(state, j, static_cast<int>(rng.categorical_from_logits(logits)));
    CHECK_NOTHROW(state.check_invariants());
  }
}

TEST_CASE("token conditional matches the enumerated joint density") {
  Rng rng(515);
  Hyperparameters hyper;
  hyper.alpha = 0.9;
  hyper.v = 1.4;
  hyper.eta = 0.7;
  for (int rep = 0; rep < 12; ++rep) {
    const GroupedCorpus corpus = oracle_corpus(rng);
    ModelState state = random_state(corpus, hyper, rng);
    const int j = static_cast<int>(rng.integer(corpus.num_groups()));
    const int i = static_cast<int>(rng.integer(corpus.groups[j].tokens.size()));
    detach_token(state, j, i);
    const std::vector<double> logits = l_logits(state, j, i);
    const int M = state.M();
    REQUIRE(static_cast<int>(logits.size()) == M + 1);
    std::vector<double> joint(static_cast<std::size_t>(M) + 1);
    for (int m = 0; m <= M; ++m) {
      auto l = state.l;
      l[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = m;
      std::vector<double> eps = state.epsilon;
      if (m == M) eps.push_back(0.0);  // the residual weight names the new topic
      joint[static_cast<std::size_t>(m)] = joint_log_prob(corpus, state.z, l, eps, hyper);
    }
    for (int m = 0; m <= M; ++m) {
      CHECK(logits[static_cast<std::size_t>(m)] - logits[0] ==
            doctest::Approx(joint[static_cast<std::size_t>(m)] - joint[0]).epsilon(1e-8));
    }
    attach_token(state, j, i, static_cast<int>(rng.categorical_from_logits(logits)));
    CHECK_NOTHROW(state.check_invariants());
  }
}

TEST_CASE("table-count draw matches brute-force restaurant simulation") {
  LogStirlingTable table;
  Rng rng(88);
  const int n = 5;
  const double w = 0.7;
  const int draws = 60000;
  std::vector<double> direct(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> brute(static_cast<std::size_t>(n) + 1, 0.0);
  for (int d = 0; d < draws; ++d) {
    ++direct[static_cast<std::size_t>(sample_o_km(n, w, table, rng))];
    // Seat n customers with concentration w; count occupied tables.
    int tables = 0;
    for (int c = 0; c < n; ++c) {
      if (rng.uniform() * (static_cast<double>(c) + w) < w) ++tables;
    }
    ++brute[static_cast<std::size_t>(tables)];
  }
  double tv = 0.0;
  for (std::size_t h = 0; h <= n; ++h) tv += std::abs(direct[h] - brute[h]) / draws;
  CHECK(tv / 2.0 < 0.02);
}

TEST_CASE("epsilon draw has the Dirichlet posterior moments") {
  const GroupedCorpus corpus = tiny_plain_corpus({{0, 1, 1}, {1, 0}}, 2);
  Hyperparameters hyper;
  hyper.eta = 2.0;
  ModelState state = state_from_assignments(corpus, {0, 0}, {{0, 1, 1}, {1, 0}},
                                            {0.4, 0.4, 0.2}, hyper, 31);
  TableCounts aux;
  aux.u_m = {3, 5};
  aux.total = 8;
  const int draws = 30000;
  std::vector<double> mean(3, 0.0);
  for (int d = 0; d < draws; ++d) {
    sample_epsilon(state, aux);
    for (std::size_t m = 0; m < 3; ++m) mean[m] += state.epsilon[m];
  }
  for (double& m : mean) m /= draws;
  // Dirichlet(3, 5, 2) means
  CHECK(mean[0] == doctest::Approx(0.3).epsilon(0.03));
  CHECK(mean[1] == doctest::Approx(0.5).epsilon(0.03));
  CHECK(mean[2] == doctest::Approx(0.2).epsilon(0.03));
}

namespace {

// Quadrature mean of p(c) proportional to prior(c) * c^components *
// Gamma(c)/Gamma(c+customers), the stationary law of the auxiliary-variable
// concentration move.
double concentration_posterior_mean(double components, double customers, const GammaPrior& prior) {
  const int steps = 400000;
  const double hi = 60.0;
  const double h = hi / steps;
  double norm = 0.0, mean = 0.0, max_log = -1e300;
  std::vector<double> logs(static_cast<std::size_t>(steps));
  for (int s = 0; s < steps; ++s) {
    const double c = h * (s + 0.5);
    logs[static_cast<std::size_t>(s)] = (prior.shape - 1.0) * std::log(c) - prior.rate * c +
                                        components * std::log(c) + std::lgamma(c) -
                                        std::lgamma(c + customers);
    max_log = std::max(max_log, logs[static_cast<std::size_t>(s)]);
  }
  for (int s = 0; s < steps; ++s) {
    const double c = h * (s + 0.5);
    const double p = std::exp(logs[static_cast<std::size_t>(s)] - max_log);
    norm += p;
    mean += p * c;
  }
  return mean / norm;
}

}  // namespace

TEST_CASE("cluster concentration move targets its conditional") {
  const GroupedCorpus corpus = tiny_gaussian_corpus(
      {{0}, {1}, {0}, {1}, {0}, {1}, {0}, {1}}, {0, 0, 0, 0, 1, 1, 1, 1}, 2);
  Hyperparameters hyper;
  ModelState state = state_from_assignments(
      corpus, {0, 0, 0, 1, 1, 1, 2, 2}, {{0}, {1}, {0}, {1}, {0}, {1}, {0}, {1}},
      {0.5, 0.3, 0.2}, hyper, 4);
  Rng rng(17);
  const int iters = 60000;
  double mean = 0.0;
  for (int t = 0; t < iters; ++t) mean += sample_alpha(state, rng);
  mean /= iters;
  const double truth = concentration_posterior_mean(3.0, 8.0, hyper.alpha_prior);
  CHECK(mean == doctest::Approx(truth).epsilon(0.03));
}

TEST_CASE("topic concentration move targets its conditional") {
  const GroupedCorpus corpus = tiny_plain_corpus({{0, 1, 0, 1}, {1, 0}}, 2);
  Hyperparameters hyper;
  ModelState state = state_from_assignments(corpus, {0, 1}, {{0, 1, 0, 1}, {1, 0}},
                                            {0.4, 0.4, 0.2}, hyper, 4);
  Rng rng(19);
  const int iters = 60000;
  double mean = 0.0;
  for (int t = 0; t < iters; ++t) mean += sample_eta(state, /*u_total=*/5, rng);
  mean /= iters;
  const double truth = concentration_posterior_mean(2.0, 5.0, hyper.eta_prior);
  CHECK(mean == doctest::Approx(truth).epsilon(0.03));
}

TEST_CASE("content concentration move targets its conditional") {
  const GroupedCorpus corpus = tiny_plain_corpus({{0, 1, 0}, {1, 0, 1, 1}}, 2);
  Hyperparameters hyper;
  ModelState state = state_from_assignments(corpus, {0, 1}, {{0, 1, 0}, {1, 0, 1, 1}},
                                            {0.4, 0.4, 0.2}, hyper, 4);
  TableCounts aux;
  aux.o_km = {{1, 1}, {1, 2}};
  aux.o_kstar = {2, 3};
  aux.u_m = {2, 3};
  aux.total = 5;
  Rng rng(23);
  const int iters = 80000;
  double mean = 0.0;
  for (int t = 0; t < iters; ++t) mean += sample_v(state, aux, rng);
  mean /= iters;
  // Target: prior(v) * prod_k v^{o_k} Gamma(v)/Gamma(v+n_k) with
  // o = (2, 3), n = (3, 4).
  const int steps = 400000;
  const double hi = 60.0;
  const double h = hi / steps;
  double norm = 0.0, truth = 0.0, max_log = -1e300;
  std::vector<double> logs(static_cast<std::size_t>(steps));
  for (int s = 0; s < steps; ++s) {
    const double v = h * (s + 0.5);
    logs[static_cast<std::size_t>(s)] =
        (hyper.v_prior.shape - 1.0) * std::log(v) - hyper.v_prior.rate * v +
        2.0 * std::log(v) + std::lgamma(v) - std::lgamma(v + 3.0) +
        3.0 * std::log(v) + std::lgamma(v) - std::lgamma(v + 4.0);
    max_log = std::max(max_log, logs[static_cast<std::size_t>(s)]);
  }
  for (int s = 0; s < steps; ++s) {
    const double v = h * (s + 0.5);
    const double p = std::exp(logs[static_cast<std::size_t>(s)] - max_log);
    norm += p;
    truth += p * v;
  }
  truth /= norm;
  CHECK(mean == doctest::Approx(truth).epsilon(0.03));
}

TEST_CASE("full sweep keeps every invariant") {
  Rng seeder(7);
  const GroupedCorpus corpus = oracle_corpus(seeder);
  Hyperparameters hyper;
  GibbsSampler sampler(make_initial_state(corpus, hyper, 3));
  sampler.init_seeded();
  for (int t = 0; t < 60; ++t) {
    sampler.sweep();
    CHECK_NOTHROW(sampler.state().check_invariants());
  }
}

TEST_CASE("fixed seed reproduces the sweep report sequence bit for bit") {
  Rng seeder(40);
  const GroupedCorpus corpus = oracle_corpus(seeder);
  RunConfig config;
  config.sweeps = 25;
  config.burnin = 5;
  config.thinning = 2;
  const FitResult a = run_fit(corpus, config, 99);
  const FitResult b = run_fit(corpus, config, 99);
  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t t = 0; t < a.reports.size(); ++t) {
    CHECK(a.reports[t].K == b.reports[t].K);
    CHECK(a.reports[t].M == b.reports[t].M);
    CHECK(a.reports[t].alpha == b.reports[t].alpha);
    CHECK(a.reports[t].v == b.reports[t].v);
    CHECK(a.reports[t].eta == b.reports[t].eta);
    CHECK(a.reports[t].log_joint == b.reports[t].log_joint);
  }
  CHECK(a.final_state.z == b.final_state.z);
  CHECK(a.final_state.l == b.final_state.l);
}

TEST_CASE("prior-forward and successive-conditional runs agree (getting it right)") {
  GroupedCorpus corpus = tiny_gaussian_corpus({{0, 0}, {0, 0}, {0, 0}, {0, 0}},
                                              {0.0, 0.0, 0.0, 0.0}, 3);
  Hyperparameters hyper;
  const std::vector<int> token_counts = {2, 2, 2, 2};
  const int rounds = 4000;

  struct Stats {
    double k = 0.0, m = 0.0, cocluster = 0.0, cotopic = 0.0;
    void absorb(const std::vector<int>& z, const std::vector<std::vector<int>>& l, int K, int M) {
      k += K;
      m += M;
      cocluster += (z[0] == z[1]);
      cotopic += (l[0][0] == l[0][1]);
    }
  };

  Stats forward;
  Rng frng(101);
  for (int r = 0; r < rounds; ++r) {
    const ForwardAssignments fa = forward_assignments(4, token_counts, hyper, frng);
    int M = 0;
    for (const auto& row : fa.l) {
      for (int m : row) M = std::max(M, m + 1);
    }
    int K = 0;
    for (int k : fa.z) K = std::max(K, k + 1);
    forward.absorb(fa.z, fa.l, K, M);
  }

  Stats successive;
  Rng srng(202);
  ForwardAssignments cur = forward_assignments(4, token_counts, hyper, srng);
  regenerate_data(corpus, cur.z, cur.l, srng);
  for (int r = 0; r < rounds; ++r) {
    ModelState st = state_from_assignments(corpus, cur.z, cur.l, cur.epsilon, hyper, 0);
    st.rng = srng;
    GibbsSampler gs(std::move(st));
    gs.resample_alpha = gs.resample_v = gs.resample_eta = false;
    gs.sweep();
    cur.z = gs.state().z;
    cur.l = gs.state().l;
    cur.epsilon = gs.state().epsilon;
    srng = gs.state().rng;
    successive.absorb(cur.z, cur.l, gs.state().K(), gs.state().M());
    regenerate_data(corpus, cur.z, cur.l, srng);
  }

  // The successive chain is autocorrelated; tolerances are set generously
  // against binomial/count scales at this sample size.
  CHECK(forward.k / rounds == doctest::Approx(successive.k / rounds).epsilon(0.06));
  CHECK(forward.m / rounds == doctest::Approx(successive.m / rounds).epsilon(0.06));
  CHECK(std::abs(forward.cocluster - successive.cocluster) / rounds < 0.05);
  CHECK(std::abs(forward.cotopic - successive.cotopic) / rounds < 0.05);
}

TEST_CASE("group-order exchangeability of the collapsed joint") {
  // Swapping two groups' labels along with their data leaves the joint
  // density unchanged.
  Rng rng(321);
  const GroupedCorpus corpus = oracle_corpus(rng);
  Hyperparameters hyper;
  const ModelState state = random_state(corpus, hyper, rng);
  GroupedCorpus swapped = corpus;
  std::swap(swapped.groups[0], swapped.groups[3]);
  auto z = state.z;
  std::swap(z[0], z[3]);
  auto l = state.l;
  std::swap(l[0], l[3]);
  CHECK(joint_log_prob(corpus, state.z, state.l, state.epsilon, hyper) ==
        doctest::Approx(joint_log_prob(swapped, z, l, state.epsilon, hyper)).epsilon(1e-10));
}
