// Command-line surface: corpus generation, fitting, evaluation, and prior
// simulation checks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcclust/prior_sim.hpp"
#include "mcclust/run.hpp"
#include "mcclust/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitInputError = 2;
constexpr int kExitNumericalError = 3;

void atomic_write(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw mcclust::DomainError("cannot open output file: " + tmp.string());
    out << contents;
  }
  fs::rename(tmp, path);
}

template <typename Fn>
void atomic_write_with(const fs::path& path, Fn&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  atomic_write(path, buffer.str());
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mcclust::DomainError("cannot open input file: " + path);
  return in;
}

int cmd_generate(const std::string& spec_path, const std::string& out_dir) {
  auto in = open_input(spec_path);
  ordered_json spec;
  try {
    spec = ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw mcclust::DomainError(spec_path + ": JSON parse error at byte " +
                               std::to_string(e.byte) + ": " + e.what());
  }
  const std::string kind = spec.value("kind", "icml");
  const auto seed = spec.value("seed", std::uint64_t{1});
  mcclust::GroupedCorpus corpus;
  mcclust::GroundTruth truth;
  if (kind == "icml") {
    mcclust::Rng rng(seed);
    mcclust::IcmlOptions opts;
    opts.groups_per_cluster = spec.value("groups_per_cluster", opts.groups_per_cluster);
    opts.tokens_per_group = spec.value("tokens_per_group", opts.tokens_per_group);
    std::tie(corpus, truth) = mcclust::make_icml_corpus(rng, opts);
  } else if (kind == "generic") {
    mcclust::GenericSpec gspec;
    gspec.seed = seed;
    gspec.num_groups = spec.value("num_groups", gspec.num_groups);
    gspec.tokens_per_group = spec.value("tokens_per_group", gspec.tokens_per_group);
    gspec.num_clusters = spec.value("num_clusters", gspec.num_clusters);
    gspec.num_topics = spec.value("num_topics", gspec.num_topics);
    gspec.vocab_size = spec.value("vocab_size", gspec.vocab_size);
    gspec.topics_per_cluster = spec.value("topics_per_cluster", gspec.topics_per_cluster);
    gspec.context_separation = spec.value("context_separation", gspec.context_separation);
    gspec.context_variance = spec.value("context_variance", gspec.context_variance);
    if (spec.value("context_family", "gaussian") == std::string("none")) {
      gspec.context_family = mcclust::ContextFamily::None;
    }
    std::tie(corpus, truth) = mcclust::make_generic_corpus(gspec);
  } else {
    throw mcclust::DomainError(spec_path + ": unknown corpus kind '" + kind + "'");
  }
  fs::create_directories(out_dir);
  atomic_write_with(fs::path(out_dir) / "corpus.jsonl",
                    [&](std::ostream& o) { mcclust::write_corpus(o, corpus); });
  atomic_write_with(fs::path(out_dir) / "truth.json",
                    [&](std::ostream& o) { mcclust::write_ground_truth(o, truth); });
  std::cout << "wrote " << (fs::path(out_dir) / "corpus.jsonl").string() << " (J="
            << corpus.num_groups() << ", V=" << corpus.content_vocab_size << ")\n";
  return 0;
}

struct FitFlags {
  std::string corpus_path;
  std::string config_path;
  std::string restore_path;
  std::string out_dir = ".";
  std::int64_t seed = -1;
  int sweeps = -1;
  int burnin = -1;
  int thin = -1;
  double missing_context_frac = -1.0;
  double test_frac = -1.0;
};

int cmd_fit(const FitFlags& flags) {
  mcclust::RunConfig config;
  if (!flags.config_path.empty()) {
    auto in = open_input(flags.config_path);
    config = mcclust::read_config(in);
  }
  if (flags.seed >= 0) config.seeds = {static_cast<std::uint64_t>(flags.seed)};
  if (flags.sweeps >= 0) config.sweeps = flags.sweeps;
  if (flags.burnin >= 0) config.burnin = flags.burnin;
  if (flags.thin >= 0) config.thinning = flags.thin;
  if (flags.missing_context_frac >= 0.0) config.missing_context_frac = flags.missing_context_frac;
  if (flags.test_frac >= 0.0) config.test_frac = flags.test_frac;
  config.out_dir = flags.out_dir;
  config.validate();

  auto corpus_in = open_input(flags.corpus_path);
  mcclust::GroupedCorpus corpus = mcclust::read_corpus(corpus_in, flags.corpus_path);
  corpus.content_concentration = config.content_concentration;
  fs::create_directories(config.out_dir);

  for (const std::uint64_t seed : config.seeds) {
    const mcclust::CorpusSplit split = mcclust::split_corpus(corpus, config.test_frac, seed);
    const mcclust::GroupedCorpus train =
        mcclust::mask_contexts(split.train, config.missing_context_frac, seed);

    mcclust::FitResult result;
    if (!flags.restore_path.empty()) {
      auto ckpt_in = open_input(flags.restore_path);
      mcclust::ModelState state = mcclust::read_checkpoint(ckpt_in, train);
      result = mcclust::continue_fit(std::move(state), config, 0);
    } else {
      result = mcclust::run_fit(train, config, seed);
    }

    const std::string tag = std::to_string(seed);
    atomic_write_with(fs::path(config.out_dir) / ("train_" + tag + ".jsonl"),
                      [&](std::ostream& o) { mcclust::write_corpus(o, train); });
    if (!split.test.groups.empty()) {
      atomic_write_with(fs::path(config.out_dir) / ("test_" + tag + ".jsonl"),
                        [&](std::ostream& o) { mcclust::write_corpus(o, split.test); });
    }
    atomic_write_with(fs::path(config.out_dir) / ("trace_" + tag + ".csv"),
                      [&](std::ostream& o) { mcclust::write_trace_csv(o, result.reports); });
    atomic_write_with(fs::path(config.out_dir) / ("snapshots_" + tag + ".jsonl"),
                      [&](std::ostream& o) { mcclust::write_snapshots(o, result.samples); });
    atomic_write_with(fs::path(config.out_dir) / ("checkpoint_" + tag + ".json"),
                      [&](std::ostream& o) { mcclust::write_checkpoint(o, result.final_state); });
    ordered_json split_doc{{"seed", seed},
                           {"train_indices", split.train_indices},
                           {"test_indices", split.test_indices}};
    atomic_write(fs::path(config.out_dir) / ("split_" + tag + ".json"), split_doc.dump(2) + "\n");
    const auto& last = result.reports.back();
    std::cout << "seed " << seed << ": K=" << last.K << " M=" << last.M
              << " alpha=" << last.alpha << " v=" << last.v << " eta=" << last.eta << "\n";
  }
  return 0;
}

struct EvalFlags {
  std::string snapshots_path;
  std::string train_path;
  std::string test_path;
  std::string truth_path;
  std::string split_path;
  std::string out_dir;
  double smooth = 0.1;
  bool ignore_context = false;
};

int cmd_evaluate(const EvalFlags& flags) {
  auto snaps_in = open_input(flags.snapshots_path);
  const std::vector<mcclust::SampleTrace> samples = mcclust::read_snapshots(snaps_in);
  if (samples.empty()) throw mcclust::DomainError("evaluate: no snapshots in trace");
  auto train_in = open_input(flags.train_path);
  const mcclust::GroupedCorpus train = mcclust::read_corpus(train_in, flags.train_path);

  mcclust::MetricsReport report;

  if (!flags.truth_path.empty()) {
    auto truth_in = open_input(flags.truth_path);
    const mcclust::GroundTruth truth = mcclust::read_ground_truth(truth_in);
    std::vector<int> true_z_train = truth.true_z;
    if (!flags.split_path.empty()) {
      auto split_in = open_input(flags.split_path);
      const auto split_doc = ordered_json::parse(split_in);
      true_z_train.clear();
      for (const int idx : split_doc.at("train_indices").get<std::vector<int>>()) {
        true_z_train.push_back(truth.true_z.at(static_cast<std::size_t>(idx)));
      }
    }
    const std::vector<int>& pred = samples.back().z;
    if (pred.size() != true_z_train.size()) {
      throw mcclust::DomainError(
          "evaluate: ground truth size does not match the fitted corpus; pass --split for a "
          "split run");
    }
    report.values.emplace_back("purity", mcclust::purity(pred, true_z_train));
    report.values.emplace_back("nmi", mcclust::nmi(pred, true_z_train));
    report.values.emplace_back("rand_index", mcclust::rand_index(pred, true_z_train));
    report.values.emplace_back("f_score", mcclust::f_score(pred, true_z_train));
  }

  if (!flags.test_path.empty()) {
    auto test_in = open_input(flags.test_path);
    const mcclust::GroupedCorpus test = mcclust::read_corpus(test_in, flags.test_path);
    mcclust::PerplexityOptions opts;
    opts.smooth = flags.smooth;
    opts.use_context = !flags.ignore_context;
    report.values.emplace_back("perplexity", mcclust::perplexity(samples, train, test, opts));
  }

  mcclust::write_metrics_csv(std::cout, report);
  if (!flags.out_dir.empty()) {
    fs::create_directories(flags.out_dir);
    atomic_write_with(fs::path(flags.out_dir) / "metrics.json",
                      [&](std::ostream& o) { mcclust::write_metrics_json(o, report); });
    atomic_write_with(fs::path(flags.out_dir) / "metrics.csv",
                      [&](std::ostream& o) { mcclust::write_metrics_csv(o, report); });
  }
  return 0;
}

int cmd_simulate_prior(std::int64_t draws, std::uint64_t seed, const std::string& out_dir) {
  mcclust::Rng rng(seed);
  const std::vector<double> grid = {0.5, 1.0, 2.0};
  const std::vector<double> context_base = {0.5, 0.3, 0.2};
  const std::vector<double> content_base = {0.4, 0.35, 0.25};
  std::vector<mcclust::MarginalizationReport> reports;
  bool all_pass = true;
  for (double alpha : grid) {
    for (double v : grid) {
      for (double eta : grid) {
        mcclust::Hyperparameters hyper;
        hyper.alpha = alpha;
        hyper.v = v;
        hyper.eta = eta;
        reports.push_back(mcclust::check_marginalization(hyper, 2, {2, 1}, draws, rng,
                                                         context_base, content_base));
        all_pass = all_pass && reports.back().all_pass;
        std::cout << "alpha=" << alpha << " v=" << v << " eta=" << eta << " "
                  << (reports.back().all_pass ? "pass" : "FAIL")
                  << " (max dev " << reports.back().max_abs_deviation << ")\n";
      }
    }
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    atomic_write_with(fs::path(out_dir) / "prior_checks.json", [&](std::ostream& o) {
      mcclust::write_marginalization_report(o, reports);
    });
  }
  std::cout << (all_pass ? "all prior checks passed" : "prior checks FAILED") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilevel clustering of grouped data with group-level context"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "Generate a synthetic corpus + ground truth");
  std::string gen_spec, gen_out = ".";
  generate->add_option("--spec", gen_spec, "Corpus spec JSON file")->required()->envname("MCC_SPEC");
  generate->add_option("--out", gen_out, "Output directory")->envname("MCC_OUT");

  auto* fit = app.add_subcommand("fit", "Fit the model with collapsed Gibbs sweeps");
  FitFlags fit_flags;
  fit->add_option("--corpus", fit_flags.corpus_path, "Corpus JSONL file")
      ->required()
      ->envname("MCC_CORPUS");
  fit->add_option("--config", fit_flags.config_path, "Run config JSON")->envname("MCC_CONFIG");
  fit->add_option("--restore", fit_flags.restore_path, "Checkpoint to resume from");
  fit->add_option("--seed", fit_flags.seed, "Override: single chain seed")->envname("MCC_SEED");
  fit->add_option("--sweeps", fit_flags.sweeps, "Override: sweep count")->envname("MCC_SWEEPS");
  fit->add_option("--burnin", fit_flags.burnin, "Override: burn-in sweeps")->envname("MCC_BURNIN");
  fit->add_option("--thin", fit_flags.thin, "Override: thinning interval")->envname("MCC_THIN");
  fit->add_option("--out", fit_flags.out_dir, "Output directory")->envname("MCC_OUT");
  fit->add_option("--missing-context-frac", fit_flags.missing_context_frac,
                  "Fraction of groups with context removed")
      ->envname("MCC_MISSING_CONTEXT_FRAC");
  fit->add_option("--test-frac", fit_flags.test_frac, "Held-out group fraction")
      ->envname("MCC_TEST_FRAC");

  auto* evaluate = app.add_subcommand("evaluate", "Clustering metrics and held-out perplexity");
  EvalFlags eval_flags;
  evaluate->add_option("--snapshots", eval_flags.snapshots_path, "Snapshots JSONL from fit")
      ->required()
      ->envname("MCC_SNAPSHOTS");
  evaluate->add_option("--train", eval_flags.train_path, "Training corpus JSONL")
      ->required()
      ->envname("MCC_TRAIN");
  evaluate->add_option("--test", eval_flags.test_path, "Held-out corpus JSONL")
      ->envname("MCC_TEST");
  evaluate->add_option("--truth", eval_flags.truth_path, "Ground truth JSON")
      ->envname("MCC_TRUTH");
  evaluate->add_option("--split", eval_flags.split_path, "split_<seed>.json from fit");
  evaluate->add_option("--smooth", eval_flags.smooth, "Perplexity smoothing constant");
  evaluate->add_flag("--ignore-context", eval_flags.ignore_context,
                     "Ignore test contexts in prediction");
  evaluate->add_option("--out", eval_flags.out_dir, "Output directory")->envname("MCC_OUT");

  auto* simulate = app.add_subcommand("simulate-prior",
                                      "Verify marginalization and correlation properties");
  std::int64_t sim_draws = 100000;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  simulate->add_option("--draws", sim_draws, "Monte-Carlo draws per grid cell");
  simulate->add_option("--seed", sim_seed, "RNG seed")->envname("MCC_SEED");
  simulate->add_option("--out", sim_out, "Output directory")->envname("MCC_OUT");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(gen_spec, gen_out);
    if (fit->parsed()) return cmd_fit(fit_flags);
    if (evaluate->parsed()) return cmd_evaluate(eval_flags);
    if (simulate->parsed()) return cmd_simulate_prior(sim_draws, sim_seed, sim_out);
  } catch (const mcclust::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalError;
  } catch (const mcclust::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const mcclust::StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return 0;
}
