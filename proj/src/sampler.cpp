#include "mcclust/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace mcclust {

namespace {

// Per-group topic count vector c^j_m; unassigned slots (-1, during
// initialization) are skipped.
std::vector<std::int64_t> group_topic_counts(const ModelState& state, int j) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(state.M()), 0);
  for (int m : state.l[static_cast<std::size_t>(j)]) {
    if (m >= 0) ++c[static_cast<std::size_t>(m)];
  }
  return c;
}

std::int64_t cluster_token_total(const CountTables& counts, int k) {
  std::int64_t n = 0;
  for (std::int64_t c : counts.n_km[static_cast<std::size_t>(k)]) n += c;
  return n;
}

// log Dirichlet-multinomial marginal of the group's topic-count vector under
// concentration (v eps_1 + base_1, ..., v eps_M + base_M, v eps_new), where
// base is the cluster's existing count row (zeros for a new cluster). The
// residual eps_new slot carries no counts, so the total concentration is
// v + sum(base).
double log_content_marginal(const ModelState& state, const std::vector<std::int64_t>& base,
                            const std::vector<std::int64_t>& cj, std::int64_t nj) {
  const double v = state.hyper.v;
  std::int64_t base_total = 0;
  for (std::int64_t b : base) base_total += b;
  double log_p = std::lgamma(v + static_cast<double>(base_total)) -
                 std::lgamma(v + static_cast<double>(base_total + nj));
  for (std::size_t m = 0; m < cj.size(); ++m) {
    if (cj[m] == 0) continue;
    const double a = v * state.epsilon[m] + static_cast<double>(base[m]);
    log_p += std::lgamma(a + static_cast<double>(cj[m])) - std::lgamma(a);
  }
  return log_p;
}

void remove_cluster(ModelState& state, int k) {
  for (std::int64_t c : state.counts.n_km[static_cast<std::size_t>(k)]) {
    if (c != 0) throw StateCorruptionError("remove_cluster: nonzero topic counts remain");
  }
  state.counts.n_k.erase(state.counts.n_k.begin() + k);
  state.counts.n_km.erase(state.counts.n_km.begin() + k);
  state.cluster_ctx.erase(state.cluster_ctx.begin() + k);
  for (auto& zj : state.z) {
    if (zj > k) --zj;
  }
}

void remove_topic(ModelState& state, int m) {
  if (state.counts.m_count[static_cast<std::size_t>(m)] != 0) {
    throw StateCorruptionError("remove_topic: topic still has tokens");
  }
  state.epsilon[state.epsilon.size() - 1] += state.epsilon[static_cast<std::size_t>(m)];
  state.epsilon.erase(state.epsilon.begin() + m);
  state.counts.m_count.erase(state.counts.m_count.begin() + m);
  state.topic_words.erase(state.topic_words.begin() + m);
  for (auto& row : state.counts.n_km) row.erase(row.begin() + m);
  for (auto& lj : state.l) {
    for (auto& lm : lj) {
      if (lm > m) --lm;
    }
  }
}

}  // namespace

void detach_group(ModelState& state, int j) {
  const int k = state.z[static_cast<std::size_t>(j)];
  if (k < 0) throw StructuralError("detach_group: group already detached");
  state.cluster_ctx[static_cast<std::size_t>(k)].remove(state.corpus->groups[j].context);
  for (int m : state.l[static_cast<std::size_t>(j)]) {
    if (m < 0) continue;
    --state.counts.n_km[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
  }
  --state.counts.n_k[static_cast<std::size_t>(k)];
  state.z[static_cast<std::size_t>(j)] = -1;
  if (state.counts.n_k[static_cast<std::size_t>(k)] == 0) remove_cluster(state, k);
}

void attach_group(ModelState& state, int j, int k) {
  if (k < 0 || k > state.K()) throw StructuralError("attach_group: cluster index out of range");
  if (k == state.K()) {
    state.counts.n_k.push_back(0);
    state.counts.n_km.emplace_back(static_cast<std::size_t>(state.M()), 0);
    state.cluster_ctx.push_back(ContextStats::fresh(state.corpus->context));
  }
  ++state.counts.n_k[static_cast<std::size_t>(k)];
  for (int m : state.l[static_cast<std::size_t>(j)]) {
    if (m < 0) continue;
    ++state.counts.n_km[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
  }
  state.cluster_ctx[static_cast<std::size_t>(k)].add(state.corpus->groups[j].context);
  state.z[static_cast<std::size_t>(j)] = k;
}

void detach_token(ModelState& state, int j, int i) {
  const int k = state.z[static_cast<std::size_t>(j)];
  const int m = state.l[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  if (k < 0 || m < 0) throw StructuralError("detach_token: token or group not attached");
  const int w = state.corpus->groups[j].tokens[static_cast<std::size_t>(i)];
  --state.counts.n_km[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
  --state.counts.m_count[static_cast<std::size_t>(m)];
  state.topic_words[static_cast<std::size_t>(m)].remove(w);
  state.l[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = -1;
  if (state.counts.m_count[static_cast<std::size_t>(m)] == 0) remove_topic(state, m);
}

void attach_token(ModelState& state, int j, int i, int m) {
  if (m < 0 || m > state.M()) throw StructuralError("attach_token: topic index out of range");
  const int k = state.z[static_cast<std::size_t>(j)];
  if (k < 0) throw StructuralError("attach_token: group not attached");
  if (m == state.M()) {
    const double b = state.rng.beta(1.0, state.hyper.eta);
    const double residual = state.epsilon.back();
    state.epsilon.back() = b * residual;
    state.epsilon.push_back((1.0 - b) * residual);
    state.counts.m_count.push_back(0);
    state.topic_words.push_back(state.fresh_topic());
    for (auto& row : state.counts.n_km) row.push_back(0);
  }
  const int w = state.corpus->groups[j].tokens[static_cast<std::size_t>(i)];
  ++state.counts.n_km[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
  ++state.counts.m_count[static_cast<std::size_t>(m)];
  state.topic_words[static_cast<std::size_t>(m)].add(w);
  state.l[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = m;
}

std::vector<double> z_logits(const ModelState& state, int j) {
  if (state.z[static_cast<std::size_t>(j)] >= 0) {
    throw StructuralError("z_logits: group must be detached first");
  }
  const auto cj = group_topic_counts(state, j);
  std::int64_t nj = 0;
  for (std::int64_t c : cj) nj += c;
  const ContextObs& x = state.corpus->groups[j].context;
  const int K = state.K();
  std::vector<double> logits(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k < K; ++k) {
    logits[static_cast<std::size_t>(k)] =
        std::log(static_cast<double>(state.counts.n_k[static_cast<std::size_t>(k)])) +
        state.cluster_ctx[static_cast<std::size_t>(k)].log_predictive(x) +
        log_content_marginal(state, state.counts.n_km[static_cast<std::size_t>(k)], cj, nj);
  }
  const std::vector<std::int64_t> zeros(static_cast<std::size_t>(state.M()), 0);
  logits[static_cast<std::size_t>(K)] =
      std::log(state.hyper.alpha) +
      ContextStats::fresh(state.corpus->context).log_predictive(x) +
      log_content_marginal(state, zeros, cj, nj);
  return logits;
}

std::vector<double> l_logits(const ModelState& state, int j, int i) {
  if (state.l[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] >= 0) {
    throw StructuralError("l_logits: token must be detached first");
  }
  const int k = state.z[static_cast<std::size_t>(j)];
  if (k < 0) throw StructuralError("l_logits: group not attached");
  const int w = state.corpus->groups[j].tokens[static_cast<std::size_t>(i)];
  const int M = state.M();
  const double v = state.hyper.v;
  std::vector<double> logits(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m < M; ++m) {
    const double weight =
        static_cast<double>(state.counts.n_km[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]) +
        v * state.epsilon[static_cast<std::size_t>(m)];
    logits[static_cast<std::size_t>(m)] =
        std::log(weight) + state.topic_words[static_cast<std::size_t>(m)].log_predictive(w);
  }
  logits[static_cast<std::size_t>(M)] =
      std::log(v * state.eps_new()) + state.fresh_topic().log_predictive(w);
  return logits;
}

int sample_z(ModelState& state, int j, Rng& rng) {
  const auto logits = z_logits(state, j);
  return static_cast<int>(rng.categorical_from_logits(logits));
}

int sample_l(ModelState& state, int j, int i, Rng& rng) {
  const auto logits = l_logits(state, j, i);
  return static_cast<int>(rng.categorical_from_logits(logits));
}

int sample_o_km(std::int64_t n_km, double v_eps, LogStirlingTable& table, Rng& rng) {
  if (v_eps <= 0.0) throw DomainError("sample_o_km: weight must be positive");
  return table.sample_table_count(static_cast<int>(n_km), std::log(v_eps), rng);
}

TableCounts sample_table_counts(ModelState& state, LogStirlingTable& table) {
  const int K = state.K();
  const int M = state.M();
  TableCounts aux;
  aux.o_km.assign(static_cast<std::size_t>(K), std::vector<int>(static_cast<std::size_t>(M), 0));
  aux.o_kstar.assign(static_cast<std::size_t>(K), 0);
  aux.u_m.assign(static_cast<std::size_t>(M), 0);
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M; ++m) {
      const std::int64_t n = state.counts.n_km[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
      if (n == 0) continue;
      const int o = sample_o_km(n, state.hyper.v * state.epsilon[static_cast<std::size_t>(m)],
                                table, state.rng);
      aux.o_km[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] = o;
      aux.o_kstar[static_cast<std::size_t>(k)] += o;
      aux.u_m[static_cast<std::size_t>(m)] += o;
      aux.total += o;
    }
  }
  return aux;
}

void sample_epsilon(ModelState& state, const TableCounts& aux) {
  const int M = state.M();
  if (M == 0) {
    state.epsilon = {1.0};
    return;
  }
  std::vector<double> shape(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m < M; ++m) {
    // An active topic always has at least one table (Stirl(0,n)=0 for n>=1),
    // so u_m >= 1; the guard only fires on corrupted input.
    shape[static_cast<std::size_t>(m)] = std::max<double>(1.0, static_cast<double>(aux.u_m[m]));
  }
  shape[static_cast<std::size_t>(M)] = state.hyper.eta;
  std::vector<double> draw = state.rng.dirichlet(shape);
  double total = 0.0;
  for (double& e : draw) {
    e = std::max(e, 1e-300);
    total += e;
  }
  for (double& e : draw) e /= total;
  state.epsilon = std::move(draw);
}

namespace {

double escobar_west_draw(double n_components, double n_customers, double current,
                         double prior_shape, double prior_rate, Rng& rng) {
  const double t = rng.beta(current + 1.0, n_customers);
  const double rate = prior_rate - std::log(t);
  const double ratio = (prior_shape + n_components - 1.0) / (n_customers * rate);
  double pi_t = 1.0;
  if (std::isfinite(ratio)) pi_t = ratio / (1.0 + ratio);
  if (rng.bernoulli(pi_t)) return rng.gamma(prior_shape + n_components, rate);
  return rng.gamma(prior_shape + n_components - 1.0, rate);
}

}  // namespace

double sample_eta(ModelState& state, std::int64_t u_total, Rng& rng) {
  if (state.M() == 0 || u_total == 0) return state.hyper.eta;
  state.hyper.eta = escobar_west_draw(static_cast<double>(state.M()),
                                      static_cast<double>(u_total), state.hyper.eta,
                                      state.hyper.eta_prior.shape, state.hyper.eta_prior.rate, rng);
  return state.hyper.eta;
}

double sample_alpha(ModelState& state, Rng& rng) {
  const auto J = static_cast<double>(state.corpus->num_groups());
  if (J < 1.0 || state.K() == 0) return state.hyper.alpha;
  state.hyper.alpha = escobar_west_draw(static_cast<double>(state.K()), J, state.hyper.alpha,
                                        state.hyper.alpha_prior.shape,
                                        state.hyper.alpha_prior.rate, rng);
  return state.hyper.alpha;
}

double sample_v(ModelState& state, const TableCounts& aux, Rng& rng) {
  const double v = state.hyper.v;
  double sum_o_minus_t = 0.0;
  double sum_log_b = 0.0;
  bool any = false;
  for (int k = 0; k < state.K(); ++k) {
    const auto n = static_cast<double>(cluster_token_total(state.counts, k));
    if (n < 1.0) continue;
    any = true;
    const double b_k = rng.beta(v + 1.0, n);
    const bool t_k = rng.bernoulli(n / (n + v));
    sum_o_minus_t += static_cast<double>(aux.o_kstar[static_cast<std::size_t>(k)]) -
                     (t_k ? 1.0 : 0.0);
    sum_log_b += std::log(b_k);
  }
  if (!any) return state.hyper.v;
  const double shape = state.hyper.v_prior.shape + sum_o_minus_t;
  const double rate = state.hyper.v_prior.rate - sum_log_b;
  state.hyper.v = rng.gamma(std::max(shape, 1e-9), rate);
  return state.hyper.v;
}

double log_joint_surrogate(const ModelState& state) {
  const std::size_t J = state.corpus->num_groups();
  if (J == 0) return 0.0;
  const double alpha = state.hyper.alpha;
  const double v = state.hyper.v;
  double log_p = 0.0;
  // CRP partition probability over groups.
  log_p += static_cast<double>(state.K()) * std::log(alpha) + std::lgamma(alpha) -
           std::lgamma(alpha + static_cast<double>(J));
  for (std::int64_t n : state.counts.n_k) log_p += std::lgamma(static_cast<double>(n));
  // Context block marginals per cluster.
  for (const auto& ctx : state.cluster_ctx) {
    log_p += ctx.log_marginal_of_held(state.corpus->context);
  }
  // Topic-count block marginals given epsilon, per cluster.
  for (int k = 0; k < state.K(); ++k) {
    const auto n = static_cast<double>(cluster_token_total(state.counts, k));
    log_p += std::lgamma(v) - std::lgamma(v + n);
    for (int m = 0; m < state.M(); ++m) {
      const auto c = static_cast<double>(state.counts.n_km[k][m]);
      if (c == 0.0) continue;
      const double a = v * state.epsilon[static_cast<std::size_t>(m)];
      log_p += std::lgamma(a + c) - std::lgamma(a);
    }
  }
  // Content block marginals per topic.
  for (const auto& topic : state.topic_words) {
    const double gamma_sum = topic.concentration_sum();
    log_p += std::lgamma(gamma_sum) - std::lgamma(gamma_sum + static_cast<double>(topic.total()));
    const auto& conc = topic.concentration();
    for (int w = 0; w < topic.dim(); ++w) {
      const std::int64_t c = topic.count(w);
      if (c == 0) continue;
      log_p += std::lgamma(conc[static_cast<std::size_t>(w)] + static_cast<double>(c)) -
               std::lgamma(conc[static_cast<std::size_t>(w)]);
    }
  }
  return log_p;
}

SweepReport GibbsSampler::sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto J = static_cast<int>(state_.corpus->num_groups());
  for (int j = 0; j < J; ++j) {
    detach_group(state_, j);
    const int k = sample_z(state_, j, state_.rng);
    attach_group(state_, j, k);
  }
  for (int j = 0; j < J; ++j) {
    const auto nj = static_cast<int>(state_.corpus->groups[j].tokens.size());
    for (int i = 0; i < nj; ++i) {
      detach_token(state_, j, i);
      const int m = sample_l(state_, j, i, state_.rng);
      attach_token(state_, j, i, m);
    }
  }
  const TableCounts aux = sample_table_counts(state_, stirling_);
  sample_epsilon(state_, aux);
  if (resample_eta) sample_eta(state_, aux.total, state_.rng);
  if (resample_alpha) sample_alpha(state_, state_.rng);
  if (resample_v) sample_v(state_, aux, state_.rng);

  SweepReport report;
  report.iteration = ++iteration_;
  report.K = state_.K();
  report.M = state_.M();
  report.alpha = state_.hyper.alpha;
  report.v = state_.hyper.v;
  report.eta = state_.hyper.eta;
  report.log_joint = log_joint_surrogate(state_);
  report.seed = state_.rng.seed();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

namespace {

// The two blocks of the joint that depend on topic structure: the per-cluster
// Dirichlet-multinomial topic-count marginals given epsilon and the per-topic
// content marginals.  Used to score structural refinement moves during
// initialization.
double topic_block_score(const ModelState& state) {
  const double v = state.hyper.v;
  double log_p = 0.0;
  for (int k = 0; k < state.K(); ++k) {
    const auto n = static_cast<double>(cluster_token_total(state.counts, k));
    log_p += std::lgamma(v) - std::lgamma(v + n);
    for (int m = 0; m < state.M(); ++m) {
      const auto c = static_cast<double>(
          state.counts.n_km[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]);
      if (c == 0.0) continue;
      const double a = v * state.epsilon[static_cast<std::size_t>(m)];
      log_p += std::lgamma(a + c) - std::lgamma(a);
    }
  }
  for (const auto& topic : state.topic_words) {
    const double gamma_sum = topic.concentration_sum();
    log_p += std::lgamma(gamma_sum) - std::lgamma(gamma_sum + static_cast<double>(topic.total()));
    const auto& conc = topic.concentration();
    for (int w = 0; w < topic.dim(); ++w) {
      const std::int64_t c = topic.count(w);
      if (c == 0) continue;
      log_p += std::lgamma(conc[static_cast<std::size_t>(w)] + static_cast<double>(c)) -
               std::lgamma(conc[static_cast<std::size_t>(w)]);
    }
  }
  return log_p;
}

// Everything a structural topic move mutates; cluster assignments and context
// stats are untouched by splits and merges.
struct TopicSnapshot {
  std::vector<std::vector<int>> l;
  CountTables counts;
  std::vector<double> epsilon;
  std::vector<DirichletCategorical> topic_words;
};

TopicSnapshot snapshot_topics(const ModelState& state) {
  return {state.l, state.counts, state.epsilon, state.topic_words};
}

void restore_topics(ModelState& state, TopicSnapshot&& s) {
  state.l = std::move(s.l);
  state.counts = std::move(s.counts);
  state.epsilon = std::move(s.epsilon);
  state.topic_words = std::move(s.topic_words);
}

// Fold topic b into topic a (labels, counts, content stats, epsilon mass) and
// erase slot b.
void fold_topics(ModelState& state, int a, int b) {
  for (auto& lj : state.l) {
    for (auto& lm : lj) {
      if (lm == b) lm = a;
    }
  }
  for (auto& row : state.counts.n_km) {
    row[static_cast<std::size_t>(a)] += row[static_cast<std::size_t>(b)];
    row.erase(row.begin() + b);
  }
  state.counts.m_count[static_cast<std::size_t>(a)] +=
      state.counts.m_count[static_cast<std::size_t>(b)];
  const auto& bw = state.topic_words[static_cast<std::size_t>(b)];
  for (int w = 0; w < bw.dim(); ++w) {
    for (std::int64_t c = 0; c < bw.count(w); ++c) {
      state.topic_words[static_cast<std::size_t>(a)].add(w);
    }
  }
  state.epsilon[static_cast<std::size_t>(a)] += state.epsilon[static_cast<std::size_t>(b)];
  state.epsilon.erase(state.epsilon.begin() + b);
  state.counts.m_count.erase(state.counts.m_count.begin() + b);
  state.topic_words.erase(state.topic_words.begin() + b);
  for (auto& lj : state.l) {
    for (auto& lm : lj) {
      if (lm > b) --lm;
    }
  }
}

// Entropy of token (j,i)'s label conditional under the current counts (the
// token's own contribution is not removed; the bias cancels between the
// before/after evaluations of a structural move).
double token_label_entropy(const ModelState& state, int j, int i) {
  const int k = state.z[static_cast<std::size_t>(j)];
  const int w = state.corpus->groups[j].tokens[static_cast<std::size_t>(i)];
  const int M = state.M();
  const double v = state.hyper.v;
  std::vector<double> logits(static_cast<std::size_t>(M));
  double mx = -1e300;
  for (int m = 0; m < M; ++m) {
    const double weight =
        static_cast<double>(
            state.counts.n_km[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]) +
        v * state.epsilon[static_cast<std::size_t>(m)];
    logits[static_cast<std::size_t>(m)] =
        std::log(weight) + state.topic_words[static_cast<std::size_t>(m)].log_predictive(w);
    mx = std::max(mx, logits[static_cast<std::size_t>(m)]);
  }
  double z_norm = 0.0;
  for (double& l : logits) {
    l = std::exp(l - mx);
    z_norm += l;
  }
  double h = 0.0;
  for (double l : logits) {
    const double p = l / z_norm;
    if (p > 1e-300) h -= p * std::log(p);
  }
  return h;
}

// Tokens whose label conditional can change under a structural move touching
// the given topics: everything whose word lies in the support of any of them.
std::vector<std::pair<int, int>> affected_tokens(const ModelState& state,
                                                 std::initializer_list<int> topics) {
  std::vector<char> in_support(
      static_cast<std::size_t>(state.topic_words.empty() ? 0 : state.topic_words[0].dim()), 0);
  for (int m : topics) {
    const auto& t = state.topic_words[static_cast<std::size_t>(m)];
    for (int w = 0; w < t.dim(); ++w) {
      if (t.count(w) > 0) in_support[static_cast<std::size_t>(w)] = 1;
    }
  }
  std::vector<std::pair<int, int>> toks;
  for (int j = 0; j < static_cast<int>(state.l.size()); ++j) {
    const auto& words = state.corpus->groups[j].tokens;
    for (int i = 0; i < static_cast<int>(words.size()); ++i) {
      if (in_support[static_cast<std::size_t>(words[static_cast<std::size_t>(i)])]) {
        toks.emplace_back(j, i);
      }
    }
  }
  return toks;
}

double local_entropy(const ModelState& state, const std::vector<std::pair<int, int>>& toks) {
  double h = 0.0;
  for (const auto& [j, i] : toks) h += token_label_entropy(state, j, i);
  return h;
}

// Greedy merge proposal: accepted only if the free energy (topic block score
// plus label-assignment entropy, a lower bound on the log mass of the mode)
// improves.
bool try_merge(ModelState& state, int a, int b) {
  const auto toks = affected_tokens(state, {a, b});
  const double before = topic_block_score(state) + local_entropy(state, toks);
  TopicSnapshot saved = snapshot_topics(state);
  fold_topics(state, a, b);
  if (topic_block_score(state) + local_entropy(state, toks) > before + 1e-9) return true;
  restore_topics(state, std::move(saved));
  return false;
}

// Greedy split proposal: a short restricted scan partitions topic m's tokens
// into two sides by content and cluster usage; accepted only if the topic
// block score improves.
bool try_split(ModelState& state, int m, Rng& rng) {
  struct Tok {
    int j, i, w, k;
  };
  std::vector<Tok> toks;
  for (int j = 0; j < static_cast<int>(state.l.size()); ++j) {
    for (int i = 0; i < static_cast<int>(state.l[static_cast<std::size_t>(j)].size()); ++i) {
      if (state.l[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] == m) {
        toks.push_back({j, i, state.corpus->groups[j].tokens[static_cast<std::size_t>(i)],
                        state.z[static_cast<std::size_t>(j)]});
      }
    }
  }
  const int n = static_cast<int>(toks.size());
  if (n < 8) return false;

  const DirichletCategorical fresh = state.fresh_topic();
  const int V = fresh.dim();
  const double g = fresh.concentration()[0];
  const double g_sum = fresh.concentration_sum();
  const int K = state.K();
  const double half = 0.5 * state.hyper.v * state.epsilon[static_cast<std::size_t>(m)];

  // Seed the two sides with two tokens of different words when possible.
  int seed_b = -1;
  for (int t = 1; t < n; ++t) {
    if (toks[static_cast<std::size_t>(t)].w != toks[0].w) {
      seed_b = t;
      break;
    }
  }
  if (seed_b < 0) return false;

  std::vector<char> side(static_cast<std::size_t>(n), -1);
  std::vector<std::int64_t> cw[2] = {std::vector<std::int64_t>(static_cast<std::size_t>(V), 0),
                                     std::vector<std::int64_t>(static_cast<std::size_t>(V), 0)};
  std::vector<std::int64_t> ck[2] = {std::vector<std::int64_t>(static_cast<std::size_t>(K), 0),
                                     std::vector<std::int64_t>(static_cast<std::size_t>(K), 0)};
  std::int64_t nt[2] = {0, 0};
  const auto place = [&](int t, int s) {
    side[static_cast<std::size_t>(t)] = static_cast<char>(s);
    ++cw[s][static_cast<std::size_t>(toks[static_cast<std::size_t>(t)].w)];
    ++ck[s][static_cast<std::size_t>(toks[static_cast<std::size_t>(t)].k)];
    ++nt[s];
  };
  const auto unplace = [&](int t) {
    const int s = side[static_cast<std::size_t>(t)];
    --cw[s][static_cast<std::size_t>(toks[static_cast<std::size_t>(t)].w)];
    --ck[s][static_cast<std::size_t>(toks[static_cast<std::size_t>(t)].k)];
    --nt[s];
  };
  const auto side_logit = [&](int t, int s) {
    const Tok& tok = toks[static_cast<std::size_t>(t)];
    return std::log(static_cast<double>(ck[s][static_cast<std::size_t>(tok.k)]) + half) +
           std::log((static_cast<double>(cw[s][static_cast<std::size_t>(tok.w)]) + g)) -
           std::log(static_cast<double>(nt[s]) + g_sum);
  };
  for (int pass = 0; pass < 3; ++pass) {
    for (int t = 0; t < n; ++t) {
      if (pass == 0 && (t == 0 || t == seed_b)) {
        place(t, t == 0 ? 0 : 1);
        continue;
      }
      if (pass > 0) unplace(t);
      const double la = side_logit(t, 0);
      const double lb = side_logit(t, 1);
      const double p_b = 1.0 / (1.0 + std::exp(la - lb));
      place(t, rng.uniform() < p_b ? 1 : 0);
    }
  }
  if (nt[0] == 0 || nt[1] == 0) return false;

  const auto affected = affected_tokens(state, {m});
  const double before = topic_block_score(state) + local_entropy(state, affected);
  TopicSnapshot saved = snapshot_topics(state);

  // Materialize side 1 as a fresh topic, splitting epsilon[m] by token share.
  const int mb = state.M();
  const double share = static_cast<double>(nt[1]) / static_cast<double>(n);
  state.epsilon.insert(state.epsilon.end() - 1,
                       state.epsilon[static_cast<std::size_t>(m)] * share);
  state.epsilon[static_cast<std::size_t>(m)] *= 1.0 - share;
  state.counts.m_count.push_back(0);
  state.topic_words.push_back(state.fresh_topic());
  for (auto& row : state.counts.n_km) row.push_back(0);
  for (int t = 0; t < n; ++t) {
    if (side[static_cast<std::size_t>(t)] != 1) continue;
    const Tok& tok = toks[static_cast<std::size_t>(t)];
    state.l[static_cast<std::size_t>(tok.j)][static_cast<std::size_t>(tok.i)] = mb;
    --state.counts.n_km[static_cast<std::size_t>(tok.k)][static_cast<std::size_t>(m)];
    ++state.counts.n_km[static_cast<std::size_t>(tok.k)][static_cast<std::size_t>(mb)];
    --state.counts.m_count[static_cast<std::size_t>(m)];
    ++state.counts.m_count[static_cast<std::size_t>(mb)];
    state.topic_words[static_cast<std::size_t>(m)].remove(tok.w);
    state.topic_words[static_cast<std::size_t>(mb)].add(tok.w);
  }
  if (topic_block_score(state) + local_entropy(state, affected) > before + 1e-9) return true;
  restore_topics(state, std::move(saved));
  return false;
}

// One round of structural refinement: splits carve blended topics apart,
// merges remove duplicates and fragments.  Returns whether anything changed.
bool refine_topics(ModelState& state, Rng& rng) {
  bool changed = false;
  const int m_before = state.M();
  for (int m = 0; m < m_before && m < state.M(); ++m) {
    if (try_split(state, m, rng)) changed = true;
  }
  bool merged = true;
  while (merged) {
    merged = false;
    for (int a = 0; a < state.M() && !merged; ++a) {
      for (int b = a + 1; b < state.M() && !merged; ++b) {
        if (try_merge(state, a, b)) {
          changed = true;
          merged = true;
        }
      }
    }
  }
  return changed;
}

}  // namespace

void GibbsSampler::init_seeded(double v_boost, double eta_boost) {
  const GroupedCorpus& corpus = *state_.corpus;
  const auto J = static_cast<int>(corpus.num_groups());

  state_.z.assign(static_cast<std::size_t>(J), -1);
  state_.l.resize(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    state_.l[static_cast<std::size_t>(j)].assign(corpus.groups[j].tokens.size(), -1);
  }
  state_.counts = CountTables{};
  state_.cluster_ctx.clear();
  state_.topic_words.clear();
  state_.epsilon.assign(1, 1.0);

  // Seeding runs with inflated topic concentrations so that the sequential
  // pass creates a generous, data-driven pool of topics: v raises the weight
  // on the "new topic" arm, and eta keeps the residual stick mass from
  // collapsing after the first few splits.  Groups are seated in doubling
  // batches, and after each batch a few restricted passes (at the configured
  // concentrations) consolidate the topics while the counts are still small
  // enough for single-site moves to merge duplicates quickly.  The configured
  // values are restored before the first real sweep.
  const double v_saved = state_.hyper.v;
  const double eta_saved = state_.hyper.eta;
  const int consolidation_passes = 3;

  int seated = 0;
  int batch = std::max(8, J / 16);
  while (seated < J) {
    const int batch_end = std::min(J, seated + batch);
    state_.hyper.v = std::max(v_saved, v_boost);
    state_.hyper.eta = std::max(eta_saved, eta_boost);
    for (int j = seated; j < batch_end; ++j) {
      // Restaurant seating from CRP x context predictive, then each of the
      // group's tokens from the full topic conditional given everything
      // seated so far.
      const ContextObs& x = corpus.groups[j].context;
      std::vector<double> logits(static_cast<std::size_t>(state_.K()) + 1);
      for (int k = 0; k < state_.K(); ++k) {
        logits[static_cast<std::size_t>(k)] =
            std::log(static_cast<double>(state_.counts.n_k[static_cast<std::size_t>(k)])) +
            state_.cluster_ctx[static_cast<std::size_t>(k)].log_predictive(x);
      }
      logits[static_cast<std::size_t>(state_.K())] =
          std::log(state_.hyper.alpha) + ContextStats::fresh(corpus.context).log_predictive(x);
      const int k = static_cast<int>(state_.rng.categorical_from_logits(logits));
      attach_group(state_, j, k);
      for (int i = 0; i < static_cast<int>(corpus.groups[j].tokens.size()); ++i) {
        attach_token(state_, j, i, sample_l(state_, j, i, state_.rng));
      }
    }
    state_.hyper.v = v_saved;
    state_.hyper.eta = eta_saved;
    for (int pass = 0; pass < consolidation_passes; ++pass) {
      for (int j = 0; j < batch_end; ++j) {
        detach_group(state_, j);
        attach_group(state_, j, sample_z(state_, j, state_.rng));
      }
      for (int j = 0; j < batch_end; ++j) {
        for (int i = 0; i < static_cast<int>(corpus.groups[j].tokens.size()); ++i) {
          detach_token(state_, j, i);
          attach_token(state_, j, i, sample_l(state_, j, i, state_.rng));
        }
      }
      const TableCounts aux = sample_table_counts(state_, stirling_);
      sample_epsilon(state_, aux);
    }
    seated = batch_end;
    batch *= 2;
  }

  for (int pass = 0; pass < consolidation_passes; ++pass) {
    for (int j = 0; j < J; ++j) {
      detach_group(state_, j);
      attach_group(state_, j, sample_z(state_, j, state_.rng));
    }
    for (int j = 0; j < J; ++j) {
      for (int i = 0; i < static_cast<int>(corpus.groups[j].tokens.size()); ++i) {
        detach_token(state_, j, i);
        attach_token(state_, j, i, sample_l(state_, j, i, state_.rng));
      }
    }
    const TableCounts aux = sample_table_counts(state_, stirling_);
    sample_epsilon(state_, aux);
  }
  iteration_ = 0;
}

}  // namespace mcclust
