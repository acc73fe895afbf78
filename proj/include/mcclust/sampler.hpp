#pragma once

#include <cstdint>
#include <vector>

#include "mcclust/state.hpp"
#include "mcclust/stirling.hpp"

namespace mcclust {

struct SweepReport {
  int iteration = 0;
  int K = 0;
  int M = 0;
  double alpha = 0.0;
  double v = 0.0;
  double eta = 0.0;
  double log_joint = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

/// Auxiliary table counts o_km linking the cluster-topic counts to the
/// Dirichlet update of epsilon.
struct TableCounts {
  std::vector<std::vector<int>> o_km;   // [K][M]
  std::vector<std::int64_t> o_kstar;    // per-cluster row sums
  std::vector<std::int64_t> u_m;        // per-topic column sums
  std::int64_t total = 0;
};

// --- decrement/increment discipline -------------------------------------
// Group and token moves follow remove-first: detach, score, draw, attach.

/// Remove group j's context observation and topic-count block from its
/// cluster; deletes the cluster if it empties. l labels stay fixed.
void detach_group(ModelState& state, int j);
/// Attach group j to cluster k; k == K() instantiates a new cluster with
/// fresh prior context stats.
void attach_group(ModelState& state, int j, int k);

/// Remove token (j,i) from its topic's stats and counts; deletes the topic
/// (folding its epsilon into eps_new) if it empties globally.
void detach_token(ModelState& state, int j, int i);
/// Attach token (j,i) to topic m; m == M() instantiates a new topic and
/// splits eps_new via a Beta(1, eta) stick break.
void attach_token(ModelState& state, int j, int i, int m);

/// Unnormalized log conditional over clusters 0..K-1 plus "new" at index K.
/// Requires group j detached.
std::vector<double> z_logits(const ModelState& state, int j);
/// Unnormalized log conditional over topics 0..M-1 plus "new" at index M.
/// Requires token (j,i) detached.
std::vector<double> l_logits(const ModelState& state, int j, int i);

/// Draw a cluster for group j from the three-term conditional (CRP x context
/// predictive x Dirichlet-multinomial content marginal). Requires detached.
int sample_z(ModelState& state, int j, Rng& rng);
/// Draw a topic for token (j,i). Requires detached.
int sample_l(ModelState& state, int j, int i, Rng& rng);

/// Antoniak draw: h in {0..n} with p(h) proportional to Stirl(h,n) (v eps)^h.
int sample_o_km(std::int64_t n_km, double v_eps, LogStirlingTable& table, Rng& rng);

/// Draw all o_km for the current counts.
TableCounts sample_table_counts(ModelState& state, LogStirlingTable& table);

/// epsilon ~ Dirichlet(u_1, ..., u_M, eta).
void sample_epsilon(ModelState& state, const TableCounts& aux);

/// Escobar-West style moves. Each returns the accepted value and updates the
/// state; degenerate preconditions leave the value unchanged.
double sample_eta(ModelState& state, std::int64_t u_total, Rng& rng);
double sample_alpha(ModelState& state, Rng& rng);
double sample_v(ModelState& state, const TableCounts& aux, Rng& rng);

/// Monitoring quantity: CRP partition log-probabilities plus all context,
/// content, and topic-count block marginals given epsilon.
double log_joint_surrogate(const ModelState& state);

class GibbsSampler {
 public:
  explicit GibbsSampler(ModelState state) : state_(std::move(state)) {}

  /// One full pass: z for every group, l for every token, (o, epsilon), then
  /// eta, alpha, v.
  SweepReport sweep();

  /// Initialization: groups are seated sequentially from the CRP-times-
  /// context conditional; tokens from the full topic conditional, with the
  /// topic concentration temporarily inflated to v_boost so a generous,
  /// data-driven topic pool is created for later sweeps to prune.  Single-
  /// site moves split established topics only very slowly, so starting wide
  /// and shrinking mixes far better than starting narrow.
  void init_seeded(double v_boost = 20.0, double eta_boost = 20.0);

  ModelState& state() { return state_; }
  const ModelState& state() const { return state_; }
  LogStirlingTable& stirling() { return stirling_; }

  /// Toggle individual hyperparameter moves (all on by default).
  bool resample_alpha = true;
  bool resample_v = true;
  bool resample_eta = true;

 private:
  ModelState state_;
  LogStirlingTable stirling_;
  int iteration_ = 0;
};

}  // namespace mcclust
