#pragma once

#include <cstdint>
#include <vector>

#include "mcclust/metrics.hpp"
#include "mcclust/sampler.hpp"
#include "mcclust/serialize.hpp"

namespace mcclust {

/// Seeded by-group train/test split. Group order inside each part follows the
/// original corpus order.
struct CorpusSplit {
  GroupedCorpus train;
  GroupedCorpus test;
  std::vector<int> train_indices;
  std::vector<int> test_indices;
};

CorpusSplit split_corpus(const GroupedCorpus& corpus, double test_frac, std::uint64_t seed);

/// Copy with the contexts of a seeded random fraction of groups removed
/// (the missing-context ablation).
GroupedCorpus mask_contexts(const GroupedCorpus& corpus, double missing_frac, std::uint64_t seed);

/// Copy with every context removed.
GroupedCorpus drop_contexts(const GroupedCorpus& corpus);

SampleTrace snapshot_of(const ModelState& state, int iteration);

struct FitResult {
  std::vector<SweepReport> reports;
  std::vector<SampleTrace> samples;  // retained after burn-in, thinned
  ModelState final_state;
};

/// Seeded initialization followed by config.sweeps full sweeps.
FitResult run_fit(const GroupedCorpus& corpus, const RunConfig& config, std::uint64_t seed);

/// Continue a restored state for the given number of sweeps (checkpoint
/// resume path; no re-initialization).
FitResult continue_fit(ModelState state, const RunConfig& config, int sweeps_done);

}  // namespace mcclust
