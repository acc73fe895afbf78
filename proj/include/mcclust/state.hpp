#pragma once

#include <cstdint>
#include <vector>

#include "mcclust/conjugate.hpp"
#include "mcclust/corpus.hpp"
#include "mcclust/rng.hpp"

namespace mcclust {

struct GammaPrior {
  double shape = 1.0;
  double rate = 1.0;
};

struct Hyperparameters {
  double alpha = 1.0;  // group-cluster concentration
  double v = 1.0;      // cluster-content concentration
  double eta = 1.0;    // global topic concentration
  GammaPrior alpha_prior, v_prior, eta_prior;

  void validate() const {
    if (alpha <= 0.0 || v <= 0.0 || eta <= 0.0) {
      throw DomainError("hyperparameters: concentrations must be strictly positive");
    }
  }
};

/// Count tables every conditional reads. Maintained incrementally; always
/// equal to a from-scratch rebuild.
struct CountTables {
  std::vector<std::int64_t> n_k;                // groups per cluster
  std::vector<std::vector<std::int64_t>> n_km;  // tokens per (cluster, topic)
  std::vector<std::int64_t> m_count;            // tokens per topic

  int K() const { return static_cast<int>(n_k.size()); }
  int M() const { return static_cast<int>(m_count.size()); }

  bool operator==(const CountTables&) const = default;
};

CountTables rebuild_counts(const GroupedCorpus& corpus, const std::vector<int>& z,
                           const std::vector<std::vector<int>>& l);

/// Conjugate statistics for one cluster's context observations. Wraps either
/// family behind the operations the sampler needs.
class ContextStats {
 public:
  ContextStats() = default;
  static ContextStats fresh(const ContextDescriptor& desc);

  void add(const ContextObs& obs);
  void remove(const ContextObs& obs);
  /// Log posterior predictive of the observation (block marginal for tag
  /// bags); 0 for an absent observation.
  double log_predictive(const ContextObs& obs) const;
  /// Log marginal likelihood of everything currently absorbed, relative to
  /// the empty prior.
  double log_marginal_of_held(const ContextDescriptor& desc) const;

  bool empty() const;

 private:
  std::variant<std::monostate, DirichletCategorical, NormalGamma> impl_;
  std::vector<ContextObs> held_;  // needed only for log_marginal_of_held
};

/// Full latent state of the collapsed sampler: assignments, global topic
/// weights, hyperparameters, count tables, and the conjugate statistics.
struct ModelState {
  const GroupedCorpus* corpus = nullptr;
  std::vector<int> z;               // per-group cluster index in [0,K)
  std::vector<std::vector<int>> l;  // per-token topic index in [0,M)
  std::vector<double> epsilon;      // M active weights, then eps_new
  Hyperparameters hyper;
  CountTables counts;
  std::vector<DirichletCategorical> topic_words;  // content stats per topic
  std::vector<ContextStats> cluster_ctx;          // context stats per cluster
  Rng rng;

  int K() const { return counts.K(); }
  int M() const { return counts.M(); }
  double eps_new() const { return epsilon.back(); }

  DirichletCategorical fresh_topic() const {
    return DirichletCategorical(corpus->content_vocab_size, corpus->content_concentration);
  }

  /// Throws if any invariant is violated (counts vs rebuild, simplex, dense
  /// labels).
  void check_invariants() const;
};

/// Everything assigned to a single cluster and a single topic.
ModelState make_initial_state(const GroupedCorpus& corpus, const Hyperparameters& hyper,
                              std::uint64_t seed);

/// Renumber cluster/topic labels to dense ranges, dropping empty ones.
/// Epsilon mass of removed topics folds into eps_new.
void compact_labels(ModelState& state);

}  // namespace mcclust
