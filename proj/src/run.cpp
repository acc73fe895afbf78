#include "mcclust/run.hpp"

#include <algorithm>
#include <numeric>

namespace mcclust {

CorpusSplit split_corpus(const GroupedCorpus& corpus, double test_frac, std::uint64_t seed) {
  if (test_frac < 0.0 || test_frac >= 1.0) throw DomainError("split: test fraction out of range");
  const auto J = static_cast<int>(corpus.num_groups());
  std::vector<int> order(static_cast<std::size_t>(J));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int i = J - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.integer(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  const int n_test = static_cast<int>(std::floor(test_frac * static_cast<double>(J)));
  std::vector<bool> is_test(static_cast<std::size_t>(J), false);
  for (int i = 0; i < n_test; ++i) is_test[static_cast<std::size_t>(order[i])] = true;

  CorpusSplit split;
  split.train = corpus;
  split.test = corpus;
  split.train.groups.clear();
  split.test.groups.clear();
  for (int j = 0; j < J; ++j) {
    if (is_test[static_cast<std::size_t>(j)]) {
      split.test.groups.push_back(corpus.groups[static_cast<std::size_t>(j)]);
      split.test_indices.push_back(j);
    } else {
      split.train.groups.push_back(corpus.groups[static_cast<std::size_t>(j)]);
      split.train_indices.push_back(j);
    }
  }
  return split;
}

GroupedCorpus mask_contexts(const GroupedCorpus& corpus, double missing_frac, std::uint64_t seed) {
  if (missing_frac < 0.0 || missing_frac > 1.0) {
    throw DomainError("mask_contexts: fraction out of range");
  }
  GroupedCorpus masked = corpus;
  const auto J = static_cast<int>(corpus.num_groups());
  std::vector<int> order(static_cast<std::size_t>(J));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int i = J - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.integer(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  const int n_masked = static_cast<int>(std::lround(missing_frac * static_cast<double>(J)));
  for (int i = 0; i < n_masked; ++i) {
    masked.groups[static_cast<std::size_t>(order[i])].context = std::monostate{};
  }
  return masked;
}

GroupedCorpus drop_contexts(const GroupedCorpus& corpus) {
  GroupedCorpus stripped = corpus;
  for (auto& g : stripped.groups) g.context = std::monostate{};
  return stripped;
}

SampleTrace snapshot_of(const ModelState& state, int iteration) {
  SampleTrace s;
  s.iteration = iteration;
  s.z = state.z;
  s.l = state.l;
  s.epsilon = state.epsilon;
  s.alpha = state.hyper.alpha;
  s.v = state.hyper.v;
  s.eta = state.hyper.eta;
  return s;
}

namespace {

FitResult drive(GibbsSampler sampler, const RunConfig& config, int sweeps_done) {
  FitResult result;
  for (int it = sweeps_done + 1; it <= config.sweeps; ++it) {
    SweepReport report = sampler.sweep();
    report.iteration = it;
    if (it > config.burnin && (it - config.burnin) % config.thinning == 0) {
      result.samples.push_back(snapshot_of(sampler.state(), it));
    }
    result.reports.push_back(report);
  }
  result.final_state = std::move(sampler.state());
  return result;
}

}  // namespace

FitResult run_fit(const GroupedCorpus& corpus, const RunConfig& config, std::uint64_t seed) {
  config.validate();
  ModelState state = make_initial_state(corpus, config.hyper, seed);
  GibbsSampler sampler(std::move(state));
  sampler.init_seeded();
  return drive(std::move(sampler), config, 0);
}

FitResult continue_fit(ModelState state, const RunConfig& config, int sweeps_done) {
  config.validate();
  return drive(GibbsSampler(std::move(state)), config, sweeps_done);
}

}  // namespace mcclust
