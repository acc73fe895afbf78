#pragma once

#include <cstdint>
#include <vector>

#include "mcclust/corpus.hpp"
#include "mcclust/state.hpp"

namespace mcclust {

// External clustering agreement metrics. Both arguments are label vectors
// over the same element universe; labels are compared only by equality.
double purity(const std::vector<int>& pred, const std::vector<int>& truth);
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);
double rand_index(const std::vector<int>& pred, const std::vector<int>& truth);
double f_score(const std::vector<int>& pred, const std::vector<int>& truth);

/// A retained posterior sample, as needed for held-out prediction: the point
/// estimates are rebuilt from assignments against the training corpus.
struct SampleTrace {
  int iteration = 0;
  std::vector<int> z;
  std::vector<std::vector<int>> l;
  std::vector<double> epsilon;
  double alpha = 0.0, v = 0.0, eta = 0.0;
};

struct PerplexityOptions {
  double smooth = 0.1;           // additive smoothing for topic-word estimates
  bool use_context = true;       // use test contexts in the cluster weights
};

/// Held-out perplexity: exp(-sum_j log p(w_j) / sum_j N_j) where p(w_j) is
/// the average over retained samples of the per-sample predictive
/// sum_k p(k) prod_i sum_m tau_km psi_m(w). Cluster weights p(k) are
/// proportional to cluster sizes times the context predictive when a test
/// context is available.
double perplexity(const std::vector<SampleTrace>& trace, const GroupedCorpus& train,
                  const GroupedCorpus& test, const PerplexityOptions& opts = {});

/// Per-sample per-document log predictive; exposed for the averaging-rule
/// consistency check.
double log_predictive_document(const SampleTrace& sample, const GroupedCorpus& train,
                               const Group& test_group, const ContextDescriptor& ctx_desc,
                               int vocab_size, double content_concentration,
                               const PerplexityOptions& opts);

}  // namespace mcclust
