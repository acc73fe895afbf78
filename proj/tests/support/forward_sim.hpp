#pragma once

// Test-side machinery kept independent of the library's sampler code paths:
// a forward simulator of the prior over assignments, a data regenerator given
// assignments, an assignment-state builder, and a from-scratch evaluator of
// the collapsed joint density.

#include <cstdint>
#include <vector>

#include "mcclust/corpus.hpp"
#include "mcclust/rng.hpp"
#include "mcclust/state.hpp"

namespace mcclust::testsupport {

struct ForwardAssignments {
  std::vector<int> z;
  std::vector<std::vector<int>> l;
  std::vector<double> epsilon;  // M active weights then the residual
};

/// Ancestral draw of (z, epsilon, l): clusters by CRP(alpha), global topic
/// weights by a lazily broken GEM(eta) stick, token topics per cluster with
/// weights c_km + v eps_m (existing) and v eps_rest (new).
ForwardAssignments forward_assignments(int num_groups, const std::vector<int>& token_counts,
                                       const Hyperparameters& hyper, Rng& rng);

/// Replace the corpus observations with a fresh draw given the assignments:
/// explicit per-topic word distributions from the symmetric Dirichlet and
/// explicit per-cluster context parameters from the context prior.
void regenerate_data(GroupedCorpus& corpus, const std::vector<int>& z,
                     const std::vector<std::vector<int>>& l, Rng& rng);

/// Build a full ModelState (counts + conjugate stats) from assignments.
ModelState state_from_assignments(const GroupedCorpus& corpus, const std::vector<int>& z,
                                  const std::vector<std::vector<int>>& l,
                                  const std::vector<double>& epsilon,
                                  const Hyperparameters& hyper, std::uint64_t seed,
                                  bool check = true);

/// Collapsed joint log density of (z, l, data) given epsilon, up to terms
/// constant in the assignments: CRP partition weight, context marginals,
/// per-cluster topic-count marginals, per-topic content marginals. Written
/// from the closed forms directly, not via the library's stat objects.
double joint_log_prob(const GroupedCorpus& corpus, const std::vector<int>& z,
                      const std::vector<std::vector<int>>& l, const std::vector<double>& epsilon,
                      const Hyperparameters& hyper);

}  // namespace mcclust::testsupport
