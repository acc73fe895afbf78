// Python bindings for the main operations: corpus generation, fitting,
// evaluation metrics, held-out perplexity, and prior checks. Structured data
// crosses the boundary in the same JSON formats the CLI uses.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mcclust/prior_sim.hpp"
#include "mcclust/run.hpp"
#include "mcclust/synthgen.hpp"

namespace py = pybind11;
using namespace mcclust;

namespace {

std::string corpus_to_jsonl(const GroupedCorpus& corpus) {
  std::ostringstream out;
  write_corpus(out, corpus);
  return out.str();
}

GroupedCorpus corpus_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  return read_corpus(in, "<python>");
}

py::tuple make_icml(std::uint64_t seed, int groups_per_cluster, int tokens_per_group) {
  Rng rng(seed);
  IcmlOptions opts;
  opts.groups_per_cluster = groups_per_cluster;
  opts.tokens_per_group = tokens_per_group;
  const auto [corpus, truth] = make_icml_corpus(rng, opts);
  std::ostringstream truth_out;
  write_ground_truth(truth_out, truth);
  return py::make_tuple(corpus_to_jsonl(corpus), truth_out.str());
}

py::tuple make_generic(int num_groups, int tokens_per_group, int num_clusters, int num_topics,
                       int vocab_size, double context_separation, std::uint64_t seed) {
  GenericSpec spec;
  spec.num_groups = num_groups;
  spec.tokens_per_group = tokens_per_group;
  spec.num_clusters = num_clusters;
  spec.num_topics = num_topics;
  spec.vocab_size = vocab_size;
  spec.context_separation = context_separation;
  spec.seed = seed;
  const auto [corpus, truth] = make_generic_corpus(spec);
  std::ostringstream truth_out;
  write_ground_truth(truth_out, truth);
  return py::make_tuple(corpus_to_jsonl(corpus), truth_out.str());
}

py::dict fit(const std::string& corpus_jsonl, std::uint64_t seed, int sweeps, int burnin,
             int thin) {
  const GroupedCorpus corpus = corpus_from_jsonl(corpus_jsonl);
  RunConfig config;
  config.sweeps = sweeps;
  config.burnin = burnin;
  config.thinning = thin;
  config.test_frac = 0.0;
  const FitResult result = run_fit(corpus, config, seed);

  std::ostringstream trace, snapshots, checkpoint;
  write_trace_csv(trace, result.reports);
  write_snapshots(snapshots, result.samples);
  write_checkpoint(checkpoint, result.final_state);

  py::dict out;
  out["trace_csv"] = trace.str();
  out["snapshots_jsonl"] = snapshots.str();
  out["checkpoint_json"] = checkpoint.str();
  out["z"] = result.final_state.z;
  out["K"] = result.final_state.K();
  out["M"] = result.final_state.M();
  out["alpha"] = result.final_state.hyper.alpha;
  out["v"] = result.final_state.hyper.v;
  out["eta"] = result.final_state.hyper.eta;
  return out;
}

double perplexity_py(const std::string& snapshots_jsonl, const std::string& train_jsonl,
                     const std::string& test_jsonl, double smooth, bool use_context) {
  std::istringstream snaps(snapshots_jsonl);
  const std::vector<SampleTrace> samples = read_snapshots(snaps);
  PerplexityOptions opts;
  opts.smooth = smooth;
  opts.use_context = use_context;
  return perplexity(samples, corpus_from_jsonl(train_jsonl), corpus_from_jsonl(test_jsonl), opts);
}

double pair_probability(bool same_group, double s1, double s2, double s12, double alpha,
                        double v, double eta) {
  Hyperparameters hyper;
  hyper.alpha = alpha;
  hyper.v = v;
  hyper.eta = eta;
  return ndpm_pair_probability(same_group, s1, s2, s12, hyper);
}

py::dict marginal_check(double alpha, double v, double eta, std::int64_t draws,
                        std::uint64_t seed) {
  Hyperparameters hyper;
  hyper.alpha = alpha;
  hyper.v = v;
  hyper.eta = eta;
  Rng rng(seed);
  const MarginalizationReport r =
      check_marginalization(hyper, 2, {2, 1}, draws, rng, {0.5, 0.3, 0.2}, {0.4, 0.35, 0.25});
  py::dict out;
  out["all_pass"] = r.all_pass;
  out["max_abs_deviation"] = r.max_abs_deviation;
  py::list checks;
  for (const StatCheck& c : r.checks) {
    py::dict d;
    d["statistic"] = c.name;
    d["closed_form"] = c.closed_form;
    d["mc_estimate"] = c.mc2_estimate;
    d["pass"] = c.pass;
    checks.append(d);
  }
  out["checks"] = checks;
  return out;
}

}  // namespace

PYBIND11_MODULE(_mcclust, m) {
  m.doc() = "Joint multilevel clustering of grouped content with group-level contexts";

  m.def("make_icml_corpus", &make_icml, py::arg("seed") = 1,
        py::arg("groups_per_cluster") = 100, py::arg("tokens_per_group") = 50,
        "Four-cluster letters corpus; returns (corpus_jsonl, truth_json).");
  m.def("make_generic_corpus", &make_generic, py::arg("num_groups") = 40,
        py::arg("tokens_per_group") = 30, py::arg("num_clusters") = 3,
        py::arg("num_topics") = 6, py::arg("vocab_size") = 20,
        py::arg("context_separation") = 3.0, py::arg("seed") = 0,
        "Generic synthetic corpus; returns (corpus_jsonl, truth_json).");
  m.def("fit", &fit, py::arg("corpus_jsonl"), py::arg("seed") = 1, py::arg("sweeps") = 100,
        py::arg("burnin") = 50, py::arg("thin") = 5,
        "Collapsed Gibbs fit; returns trace, snapshots, checkpoint, and the final state summary.");
  m.def("perplexity", &perplexity_py, py::arg("snapshots_jsonl"), py::arg("train_jsonl"),
        py::arg("test_jsonl"), py::arg("smooth") = 0.1, py::arg("use_context") = true,
        "Held-out perplexity from retained samples.");
  m.def("purity", &purity, py::arg("pred"), py::arg("truth"));
  m.def("nmi", &nmi, py::arg("pred"), py::arg("truth"));
  m.def("rand_index", &rand_index, py::arg("pred"), py::arg("truth"));
  m.def("f_score", &f_score, py::arg("pred"), py::arg("truth"));
  m.def("pair_probability", &pair_probability, py::arg("same_group"), py::arg("s1"),
        py::arg("s2"), py::arg("s12"), py::arg("alpha") = 1.0, py::arg("v") = 1.0,
        py::arg("eta") = 1.0,
        "Closed-form probability that two content draws land in sets of the given masses.");
  m.def("marginal_check", &marginal_check, py::arg("alpha") = 1.0, py::arg("v") = 1.0,
        py::arg("eta") = 1.0, py::arg("draws") = 20000, py::arg("seed") = 1,
        "Monte-Carlo marginalization check against closed forms.");
}
