#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mcclust/corpus.hpp"
#include "mcclust/metrics.hpp"
#include "mcclust/prior_sim.hpp"
#include "mcclust/sampler.hpp"
#include "mcclust/state.hpp"
#include "mcclust/synthgen.hpp"

namespace mcclust {

// Corpus files are JSON lines: a header object declaring the vocabulary and
// context family, then one object per group:
//   {"id": "...", "tokens": [ints], "context": number | [ints] | null}

void write_corpus(std::ostream& out, const GroupedCorpus& corpus);
GroupedCorpus read_corpus(std::istream& in, const std::string& source_name = "<corpus>");

void write_ground_truth(std::ostream& out, const GroundTruth& truth);
GroundTruth read_ground_truth(std::istream& in);

/// Full checkpoint: assignments, epsilon, hyperparameters, and the engine
/// state, with deterministic field ordering. Counts and conjugate stats are
/// rebuilt on restore.
void write_checkpoint(std::ostream& out, const ModelState& state);
ModelState read_checkpoint(std::istream& in, const GroupedCorpus& corpus);

struct RunConfig {
  std::vector<std::uint64_t> seeds = {1};
  int sweeps = 600;
  int burnin = 100;
  int thinning = 5;
  Hyperparameters hyper;
  double content_concentration = 0.5;
  double missing_context_frac = 0.0;
  double test_frac = 0.1;
  double smooth = 0.1;
  std::string out_dir = ".";

  void validate() const {
    if (burnin >= sweeps) throw DomainError("config: burn-in must be below sweep count");
    if (thinning < 1) throw DomainError("config: thinning must be >= 1");
    if (missing_context_frac < 0.0 || missing_context_frac > 1.0) {
      throw DomainError("config: missing-context fraction must be in [0,1]");
    }
    if (test_frac < 0.0 || test_frac >= 1.0) {
      throw DomainError("config: test fraction must be in [0,1)");
    }
    hyper.validate();
  }
};

RunConfig read_config(std::istream& in);
void write_config(std::ostream& out, const RunConfig& config);

void write_trace_csv(std::ostream& out, const std::vector<SweepReport>& reports);
/// Thinned snapshots, one JSON object per line.
void write_snapshots(std::ostream& out, const std::vector<SampleTrace>& samples);
std::vector<SampleTrace> read_snapshots(std::istream& in);

void write_marginalization_report(std::ostream& out,
                                  const std::vector<MarginalizationReport>& reports);

struct MetricsReport {
  std::vector<std::pair<std::string, double>> values;
};
void write_metrics_json(std::ostream& out, const MetricsReport& report);
void write_metrics_csv(std::ostream& out, const MetricsReport& report);

}  // namespace mcclust
