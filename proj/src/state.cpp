#include "mcclust/state.hpp"

#include <algorithm>
#include <cmath>

namespace mcclust {

CountTables rebuild_counts(const GroupedCorpus& corpus, const std::vector<int>& z,
                           const std::vector<std::vector<int>>& l) {
  if (z.size() != corpus.num_groups() || l.size() != corpus.num_groups()) {
    throw StructuralError("rebuild_counts: assignment length mismatch");
  }
  int K = 0, M = 0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (z[j] < 0) throw StructuralError("rebuild_counts: negative cluster index");
    K = std::max(K, z[j] + 1);
    if (l[j].size() != corpus.groups[j].tokens.size()) {
      throw StructuralError("rebuild_counts: token label length mismatch");
    }
    for (int m : l[j]) {
      if (m < 0) throw StructuralError("rebuild_counts: negative topic index");
      M = std::max(M, m + 1);
    }
  }
  CountTables t;
  t.n_k.assign(K, 0);
  t.n_km.assign(K, std::vector<std::int64_t>(M, 0));
  t.m_count.assign(M, 0);
  for (std::size_t j = 0; j < z.size(); ++j) {
    ++t.n_k[z[j]];
    for (int m : l[j]) {
      ++t.n_km[z[j]][m];
      ++t.m_count[m];
    }
  }
  return t;
}

ContextStats ContextStats::fresh(const ContextDescriptor& desc) {
  ContextStats s;
  switch (desc.family) {
    case ContextFamily::None:
      break;
    case ContextFamily::Gaussian:
      s.impl_ = desc.make_gaussian();
      break;
    case ContextFamily::Categorical:
      s.impl_ = desc.make_categorical();
      break;
  }
  return s;
}

void ContextStats::add(const ContextObs& obs) {
  if (!has_context(obs)) return;
  if (auto* ng = std::get_if<NormalGamma>(&impl_)) {
    ng->add(std::get<double>(obs));
  } else if (auto* dc = std::get_if<DirichletCategorical>(&impl_)) {
    for (int tag : std::get<std::vector<int>>(obs)) dc->add(tag);
  } else {
    throw StructuralError("ContextStats::add: context observation under family None");
  }
  held_.push_back(obs);
}

void ContextStats::remove(const ContextObs& obs) {
  if (!has_context(obs)) return;
  if (auto* ng = std::get_if<NormalGamma>(&impl_)) {
    ng->remove(std::get<double>(obs));
  } else if (auto* dc = std::get_if<DirichletCategorical>(&impl_)) {
    for (int tag : std::get<std::vector<int>>(obs)) dc->remove(tag);
  } else {
    throw StructuralError("ContextStats::remove: context observation under family None");
  }
  auto it = std::find_if(held_.begin(), held_.end(),
                         [&](const ContextObs& h) { return h == obs; });
  if (it == held_.end()) throw StateCorruptionError("ContextStats::remove: observation not held");
  held_.erase(it);
}

double ContextStats::log_predictive(const ContextObs& obs) const {
  if (!has_context(obs)) return 0.0;
  if (const auto* ng = std::get_if<NormalGamma>(&impl_)) {
    return ng->log_predictive(std::get<double>(obs));
  }
  if (const auto* dc = std::get_if<DirichletCategorical>(&impl_)) {
    const auto& tags = std::get<std::vector<int>>(obs);
    return dc->log_block_marginal(tags);
  }
  throw StructuralError("ContextStats::log_predictive: context observation under family None");
}

double ContextStats::log_marginal_of_held(const ContextDescriptor& desc) const {
  ContextStats scratch = fresh(desc);
  double log_p = 0.0;
  for (const auto& obs : held_) {
    log_p += scratch.log_predictive(obs);
    scratch.add(obs);
  }
  return log_p;
}

bool ContextStats::empty() const { return held_.empty(); }

ModelState make_initial_state(const GroupedCorpus& corpus, const Hyperparameters& hyper,
                              std::uint64_t seed) {
  hyper.validate();
  corpus.validate();
  ModelState state;
  state.corpus = &corpus;
  state.hyper = hyper;
  state.rng = Rng(seed);
  const std::size_t J = corpus.num_groups();
  state.z.assign(J, 0);
  state.l.resize(J);
  bool any_token = false;
  for (std::size_t j = 0; j < J; ++j) {
    state.l[j].assign(corpus.groups[j].tokens.size(), 0);
    any_token = any_token || !corpus.groups[j].tokens.empty();
  }
  if (J > 0) {
    state.cluster_ctx.push_back(ContextStats::fresh(corpus.context));
    for (std::size_t j = 0; j < J; ++j) state.cluster_ctx[0].add(corpus.groups[j].context);
  }
  if (any_token) {
    state.topic_words.push_back(state.fresh_topic());
    for (std::size_t j = 0; j < J; ++j) {
      for (int w : corpus.groups[j].tokens) state.topic_words[0].add(w);
    }
    state.epsilon = {0.5, 0.5};
  } else {
    state.epsilon = {1.0};
    for (auto& lj : state.l) lj.clear();
  }
  state.counts = rebuild_counts(corpus, state.z, state.l);
  if (J == 0) {
    state.z.clear();
    state.cluster_ctx.clear();
  }
  return state;
}

void compact_labels(ModelState& state) {
  const int K = state.counts.K();
  const int M = state.counts.M();
  std::vector<int> cluster_map(K, -1), topic_map(M, -1);
  int newK = 0, newM = 0;
  for (int k = 0; k < K; ++k) {
    if (state.counts.n_k[k] > 0) cluster_map[k] = newK++;
  }
  double folded = 0.0;
  for (int m = 0; m < M; ++m) {
    if (state.counts.m_count[m] > 0) {
      topic_map[m] = newM++;
    } else {
      folded += state.epsilon[m];
    }
  }
  if (newK == K && newM == M) return;

  for (auto& zj : state.z) {
    zj = cluster_map[zj];
    if (zj < 0) throw StateCorruptionError("compact_labels: group assigned to empty cluster");
  }
  for (auto& lj : state.l) {
    for (auto& m : lj) {
      m = topic_map[m];
      if (m < 0) throw StateCorruptionError("compact_labels: token assigned to empty topic");
    }
  }

  std::vector<double> new_eps(newM + 1);
  for (int m = 0; m < M; ++m) {
    if (topic_map[m] >= 0) new_eps[topic_map[m]] = state.epsilon[m];
  }
  new_eps[newM] = state.epsilon[M] + folded;
  state.epsilon = std::move(new_eps);

  std::vector<ContextStats> new_ctx(newK);
  for (int k = 0; k < K; ++k) {
    if (cluster_map[k] >= 0) new_ctx[cluster_map[k]] = std::move(state.cluster_ctx[k]);
  }
  state.cluster_ctx = std::move(new_ctx);

  std::vector<DirichletCategorical> new_topics(newM);
  for (int m = 0; m < M; ++m) {
    if (topic_map[m] >= 0) new_topics[topic_map[m]] = std::move(state.topic_words[m]);
  }
  state.topic_words = std::move(new_topics);

  CountTables t;
  t.n_k.assign(newK, 0);
  t.n_km.assign(newK, std::vector<std::int64_t>(newM, 0));
  t.m_count.assign(newM, 0);
  for (int k = 0; k < K; ++k) {
    if (cluster_map[k] < 0) continue;
    t.n_k[cluster_map[k]] = state.counts.n_k[k];
    for (int m = 0; m < M; ++m) {
      if (topic_map[m] >= 0) t.n_km[cluster_map[k]][topic_map[m]] = state.counts.n_km[k][m];
    }
  }
  for (int m = 0; m < M; ++m) {
    if (topic_map[m] >= 0) t.m_count[topic_map[m]] = state.counts.m_count[m];
  }
  state.counts = std::move(t);
}

void ModelState::check_invariants() const {
  const CountTables rebuilt = rebuild_counts(*corpus, z, l);
  if (!(rebuilt == counts)) throw StateCorruptionError("invariants: counts diverged from rebuild");
  for (std::int64_t n : counts.n_k) {
    if (n <= 0) throw StateCorruptionError("invariants: empty cluster label");
  }
  for (std::int64_t n : counts.m_count) {
    if (n <= 0) throw StateCorruptionError("invariants: empty topic label");
  }
  if (static_cast<int>(epsilon.size()) != M() + 1) {
    throw StateCorruptionError("invariants: epsilon dimension mismatch");
  }
  double total = 0.0;
  for (double e : epsilon) {
    if (!(e > 0.0)) throw StateCorruptionError("invariants: non-positive epsilon entry");
    total += e;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw StateCorruptionError("invariants: epsilon does not sum to one");
  }
  if (static_cast<int>(topic_words.size()) != M() ||
      static_cast<int>(cluster_ctx.size()) != K()) {
    throw StateCorruptionError("invariants: stats array size mismatch");
  }
}

}  // namespace mcclust
