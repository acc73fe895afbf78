#include "mcclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mcclust {

namespace {

void check_universe(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw DomainError("partition metric: label vectors must be non-empty and equal length");
  }
}

// Contingency counts |c(pred) ∩ t(true)|.
std::map<std::pair<int, int>, std::int64_t> contingency(const std::vector<int>& pred,
                                                        const std::vector<int>& truth) {
  std::map<std::pair<int, int>, std::int64_t> table;
  for (std::size_t i = 0; i < pred.size(); ++i) ++table[{pred[i], truth[i]}];
  return table;
}

std::map<int, std::int64_t> sizes(const std::vector<int>& labels) {
  std::map<int, std::int64_t> s;
  for (int l : labels) ++s[l];
  return s;
}

double pairs(std::int64_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

}  // namespace

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_universe(pred, truth);
  std::map<int, std::map<int, std::int64_t>> per_cluster;
  for (std::size_t i = 0; i < pred.size(); ++i) ++per_cluster[pred[i]][truth[i]];
  std::int64_t hits = 0;
  for (const auto& [c, row] : per_cluster) {
    std::int64_t best = 0;
    for (const auto& [t, n] : row) best = std::max(best, n);
    hits += best;
  }
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_universe(pred, truth);
  const double n = static_cast<double>(pred.size());
  const auto table = contingency(pred, truth);
  const auto ps = sizes(pred);
  const auto ts = sizes(truth);
  double mi = 0.0;
  for (const auto& [key, nij] : table) {
    const double pij = static_cast<double>(nij) / n;
    const double pi = static_cast<double>(ps.at(key.first)) / n;
    const double pj = static_cast<double>(ts.at(key.second)) / n;
    mi += pij * std::log(pij / (pi * pj));
  }
  double h_pred = 0.0, h_true = 0.0;
  for (const auto& [c, cn] : ps) {
    const double p = static_cast<double>(cn) / n;
    h_pred -= p * std::log(p);
  }
  for (const auto& [t, tn] : ts) {
    const double p = static_cast<double>(tn) / n;
    h_true -= p * std::log(p);
  }
  const double denom = 0.5 * (h_pred + h_true);  // arithmetic-mean normalization
  if (denom <= 0.0) return 1.0;                  // both partitions trivial, hence identical
  return std::max(0.0, mi / denom);
}

namespace {

struct PairCounts {
  double tp = 0.0, fp = 0.0, fn = 0.0, tn = 0.0;
};

PairCounts pair_counts(const std::vector<int>& pred, const std::vector<int>& truth) {
  const auto table = contingency(pred, truth);
  const auto ps = sizes(pred);
  const auto ts = sizes(truth);
  const double all = pairs(static_cast<std::int64_t>(pred.size()));
  double same_both = 0.0, same_pred = 0.0, same_true = 0.0;
  for (const auto& [key, nij] : table) same_both += pairs(nij);
  for (const auto& [c, cn] : ps) same_pred += pairs(cn);
  for (const auto& [t, tn] : ts) same_true += pairs(tn);
  PairCounts pc;
  pc.tp = same_both;
  pc.fp = same_pred - same_both;
  pc.fn = same_true - same_both;
  pc.tn = all - pc.tp - pc.fp - pc.fn;
  return pc;
}

}  // namespace

double rand_index(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_universe(pred, truth);
  if (pred.size() == 1) return 1.0;
  const PairCounts pc = pair_counts(pred, truth);
  return (pc.tp + pc.tn) / (pc.tp + pc.fp + pc.fn + pc.tn);
}

double f_score(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_universe(pred, truth);
  const PairCounts pc = pair_counts(pred, truth);
  const double precision = (pc.tp + pc.fp > 0.0) ? pc.tp / (pc.tp + pc.fp) : 0.0;
  const double recall = (pc.tp + pc.fn > 0.0) ? pc.tp / (pc.tp + pc.fn) : 0.0;
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

namespace {

struct SampleEstimates {
  std::vector<std::vector<double>> psi;  // [M][V] smoothed topic-word estimates
  std::vector<std::vector<double>> tau;  // [K][M] cluster-topic estimates
  std::vector<double> log_nk;            // log cluster sizes
  std::vector<ContextStats> ctx;         // per-cluster context stats
};

SampleEstimates build_estimates(const SampleTrace& sample, const GroupedCorpus& train,
                                int vocab_size, double smooth) {
  const CountTables counts = rebuild_counts(train, sample.z, sample.l);
  const int K = counts.K();
  const int M = counts.M();
  SampleEstimates est;

  std::vector<std::vector<std::int64_t>> n_mw(static_cast<std::size_t>(M),
                                              std::vector<std::int64_t>(vocab_size, 0));
  for (std::size_t j = 0; j < train.groups.size(); ++j) {
    for (std::size_t i = 0; i < train.groups[j].tokens.size(); ++i) {
      ++n_mw[static_cast<std::size_t>(sample.l[j][i])]
            [static_cast<std::size_t>(train.groups[j].tokens[i])];
    }
  }
  est.psi.assign(static_cast<std::size_t>(M), std::vector<double>(vocab_size, 0.0));
  for (int m = 0; m < M; ++m) {
    const double denom = static_cast<double>(counts.m_count[m]) +
                         static_cast<double>(vocab_size) * smooth;
    for (int w = 0; w < vocab_size; ++w) {
      est.psi[m][w] = (static_cast<double>(n_mw[m][w]) + smooth) / denom;
    }
  }

  est.tau.assign(static_cast<std::size_t>(K), std::vector<double>(M, 0.0));
  for (int k = 0; k < K; ++k) {
    double denom = 0.0;
    for (int m = 0; m < M; ++m) {
      denom += static_cast<double>(counts.n_km[k][m]) + sample.v * sample.epsilon[m];
    }
    for (int m = 0; m < M; ++m) {
      est.tau[k][m] =
          (static_cast<double>(counts.n_km[k][m]) + sample.v * sample.epsilon[m]) / denom;
    }
  }

  est.log_nk.resize(static_cast<std::size_t>(K));
  est.ctx.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    est.log_nk[k] = std::log(static_cast<double>(counts.n_k[k]));
    est.ctx[k] = ContextStats::fresh(train.context);
  }
  for (std::size_t j = 0; j < train.groups.size(); ++j) {
    est.ctx[static_cast<std::size_t>(sample.z[j])].add(train.groups[j].context);
  }
  return est;
}

double log_predictive_from_estimates(const SampleEstimates& est, const Group& test_group,
                                     bool use_context) {
  const int K = static_cast<int>(est.tau.size());
  std::vector<double> log_weights(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    log_weights[k] = est.log_nk[k];
    if (use_context && has_context(test_group.context)) {
      log_weights[k] += est.ctx[k].log_predictive(test_group.context);
    }
  }
  const double log_norm = log_sum_exp(log_weights);
  std::vector<double> log_doc(static_cast<std::size_t>(K), 0.0);
  for (int k = 0; k < K; ++k) {
    double token_sum = 0.0;
    for (int w : test_group.tokens) {
      double p = 0.0;
      for (std::size_t m = 0; m < est.tau[k].size(); ++m) {
        p += est.tau[k][m] * est.psi[m][static_cast<std::size_t>(w)];
      }
      token_sum += std::log(std::max(p, 1e-300));
    }
    log_doc[k] = log_weights[k] - log_norm + token_sum;
  }
  return log_sum_exp(log_doc);
}

}  // namespace

double log_predictive_document(const SampleTrace& sample, const GroupedCorpus& train,
                               const Group& test_group, const ContextDescriptor& /*ctx_desc*/,
                               int vocab_size, double /*content_concentration*/,
                               const PerplexityOptions& opts) {
  const SampleEstimates est = build_estimates(sample, train, vocab_size, opts.smooth);
  return log_predictive_from_estimates(est, test_group, opts.use_context);
}

double perplexity(const std::vector<SampleTrace>& trace, const GroupedCorpus& train,
                  const GroupedCorpus& test, const PerplexityOptions& opts) {
  if (trace.empty()) throw DomainError("perplexity: need at least one retained sample");
  std::size_t total_tokens = test.total_tokens();
  if (test.groups.empty() || total_tokens == 0) {
    throw DomainError("perplexity: empty test set");
  }
  std::vector<SampleEstimates> estimates;
  estimates.reserve(trace.size());
  for (const auto& sample : trace) {
    estimates.push_back(build_estimates(sample, train, train.content_vocab_size, opts.smooth));
  }
  double total_log_p = 0.0;
  std::vector<double> per_sample(trace.size());
  for (const auto& group : test.groups) {
    for (std::size_t t = 0; t < estimates.size(); ++t) {
      per_sample[t] = log_predictive_from_estimates(estimates[t], group, opts.use_context);
    }
    total_log_p += log_sum_exp(per_sample) - std::log(static_cast<double>(trace.size()));
  }
  return std::exp(-total_log_p / static_cast<double>(total_tokens));
}

}  // namespace mcclust
