#include "mcclust/serialize.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

namespace mcclust {

using json = nlohmann::ordered_json;

namespace {

std::string family_name(ContextFamily f) {
  switch (f) {
    case ContextFamily::None: return "none";
    case ContextFamily::Gaussian: return "gaussian";
    case ContextFamily::Categorical: return "categorical";
  }
  return "none";
}

ContextFamily family_from(const std::string& s) {
  if (s == "none") return ContextFamily::None;
  if (s == "gaussian") return ContextFamily::Gaussian;
  if (s == "categorical") return ContextFamily::Categorical;
  throw DomainError("corpus header: unknown context family '" + s + "'");
}

json context_to_json(const ContextObs& c) {
  if (const auto* x = std::get_if<double>(&c)) return *x;
  if (const auto* tags = std::get_if<std::vector<int>>(&c)) return *tags;
  return nullptr;
}

ContextObs context_from_json(const json& j) {
  if (j.is_null()) return std::monostate{};
  if (j.is_number()) return j.get<double>();
  if (j.is_array()) return j.get<std::vector<int>>();
  throw DomainError("corpus: context must be a number, an int array, or null");
}

json hyper_to_json(const Hyperparameters& h) {
  return json{{"alpha", h.alpha},
              {"v", h.v},
              {"eta", h.eta},
              {"alpha_prior", {h.alpha_prior.shape, h.alpha_prior.rate}},
              {"v_prior", {h.v_prior.shape, h.v_prior.rate}},
              {"eta_prior", {h.eta_prior.shape, h.eta_prior.rate}}};
}

Hyperparameters hyper_from_json(const json& j) {
  Hyperparameters h;
  h.alpha = j.value("alpha", 1.0);
  h.v = j.value("v", 1.0);
  h.eta = j.value("eta", 1.0);
  auto prior = [&](const char* key, GammaPrior& p) {
    if (j.contains(key)) {
      p.shape = j[key][0].get<double>();
      p.rate = j[key][1].get<double>();
    }
  };
  prior("alpha_prior", h.alpha_prior);
  prior("v_prior", h.v_prior);
  prior("eta_prior", h.eta_prior);
  return h;
}

}  // namespace

void write_corpus(std::ostream& out, const GroupedCorpus& corpus) {
  json header{{"type", "header"},
              {"content_vocab_size", corpus.content_vocab_size},
              {"content_concentration", corpus.content_concentration},
              {"context_family", family_name(corpus.context.family)}};
  if (corpus.context.family == ContextFamily::Gaussian) {
    header["context_prior"] = {corpus.context.m0, corpus.context.kappa0, corpus.context.a0,
                               corpus.context.b0};
  } else if (corpus.context.family == ContextFamily::Categorical) {
    header["context_vocab_size"] = corpus.context.vocab_size;
    header["context_concentration"] = corpus.context.concentration;
  }
  out << header.dump() << '\n';
  for (const auto& g : corpus.groups) {
    json line{{"id", g.id}, {"tokens", g.tokens}, {"context", context_to_json(g.context)}};
    out << line.dump() << '\n';
  }
}

GroupedCorpus read_corpus(std::istream& in, const std::string& source_name) {
  GroupedCorpus corpus;
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DomainError(source_name + ":" + std::to_string(line_no) + ":" +
                        std::to_string(e.byte) + ": JSON parse error: " + e.what());
    }
    if (!saw_header) {
      if (j.value("type", "") != "header") {
        throw DomainError(source_name + ":" + std::to_string(line_no) +
                          ": first line must be the header object");
      }
      corpus.content_vocab_size = j.at("content_vocab_size").get<int>();
      corpus.content_concentration = j.value("content_concentration", 0.5);
      corpus.context.family = family_from(j.value("context_family", "none"));
      if (j.contains("context_prior")) {
        corpus.context.m0 = j["context_prior"][0].get<double>();
        corpus.context.kappa0 = j["context_prior"][1].get<double>();
        corpus.context.a0 = j["context_prior"][2].get<double>();
        corpus.context.b0 = j["context_prior"][3].get<double>();
      }
      corpus.context.vocab_size = j.value("context_vocab_size", 0);
      corpus.context.concentration = j.value("context_concentration", 0.5);
      saw_header = true;
      continue;
    }
    Group g;
    g.id = j.value("id", "g" + std::to_string(corpus.groups.size()));
    g.tokens = j.at("tokens").get<std::vector<int>>();
    g.context = context_from_json(j.at("context"));
    corpus.groups.push_back(std::move(g));
  }
  if (!saw_header) throw DomainError(source_name + ":1: missing corpus header");
  corpus.validate();
  return corpus;
}

void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
  json j{{"true_z", truth.true_z},
         {"true_topics", truth.true_topics},
         {"cluster_topic_sets", truth.cluster_topic_sets},
         {"context_params", json::array()},
         {"topic_names", truth.topic_names}};
  for (const auto& [mean, var] : truth.context_params) j["context_params"].push_back({mean, var});
  out << j.dump(2) << '\n';
}

GroundTruth read_ground_truth(std::istream& in) {
  json j = json::parse(in);
  GroundTruth truth;
  truth.true_z = j.at("true_z").get<std::vector<int>>();
  if (j.contains("true_topics")) {
    truth.true_topics = j["true_topics"].get<std::vector<std::vector<double>>>();
  }
  if (j.contains("cluster_topic_sets")) {
    truth.cluster_topic_sets = j["cluster_topic_sets"].get<std::vector<std::vector<int>>>();
  }
  if (j.contains("context_params")) {
    for (const auto& p : j["context_params"]) {
      truth.context_params.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  }
  if (j.contains("topic_names")) {
    truth.topic_names = j["topic_names"].get<std::vector<std::string>>();
  }
  return truth;
}

void write_checkpoint(std::ostream& out, const ModelState& state) {
  json j{{"z", state.z},
         {"l", state.l},
         {"epsilon", state.epsilon},
         {"hyper", hyper_to_json(state.hyper)},
         {"rng_seed", state.rng.seed()},
         {"rng_state", state.rng.serialize()}};
  out << j.dump(2) << '\n';
}

ModelState read_checkpoint(std::istream& in, const GroupedCorpus& corpus) {
  json j = json::parse(in);
  ModelState state;
  state.corpus = &corpus;
  state.z = j.at("z").get<std::vector<int>>();
  state.l = j.at("l").get<std::vector<std::vector<int>>>();
  state.epsilon = j.at("epsilon").get<std::vector<double>>();
  state.hyper = hyper_from_json(j.at("hyper"));
  state.rng = Rng(j.value("rng_seed", 0ULL));
  state.rng.restore(j.at("rng_state").get<std::string>());
  state.counts = rebuild_counts(corpus, state.z, state.l);
  state.cluster_ctx.resize(static_cast<std::size_t>(state.K()));
  for (auto& ctx : state.cluster_ctx) ctx = ContextStats::fresh(corpus.context);
  for (std::size_t g = 0; g < corpus.groups.size(); ++g) {
    state.cluster_ctx[static_cast<std::size_t>(state.z[g])].add(corpus.groups[g].context);
  }
  state.topic_words.clear();
  for (int m = 0; m < state.M(); ++m) state.topic_words.push_back(state.fresh_topic());
  for (std::size_t g = 0; g < corpus.groups.size(); ++g) {
    for (std::size_t i = 0; i < corpus.groups[g].tokens.size(); ++i) {
      state.topic_words[static_cast<std::size_t>(state.l[g][i])].add(corpus.groups[g].tokens[i]);
    }
  }
  state.check_invariants();
  return state;
}

RunConfig read_config(std::istream& in) {
  json j = json::parse(in);
  RunConfig c;
  if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  c.sweeps = j.value("sweeps", c.sweeps);
  c.burnin = j.value("burnin", c.burnin);
  c.thinning = j.value("thinning", c.thinning);
  if (j.contains("hyper")) c.hyper = hyper_from_json(j["hyper"]);
  c.content_concentration = j.value("content_concentration", c.content_concentration);
  c.missing_context_frac = j.value("missing_context_frac", c.missing_context_frac);
  c.test_frac = j.value("test_frac", c.test_frac);
  c.smooth = j.value("smooth", c.smooth);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.validate();
  return c;
}

void write_config(std::ostream& out, const RunConfig& c) {
  json j{{"seeds", c.seeds},
         {"sweeps", c.sweeps},
         {"burnin", c.burnin},
         {"thinning", c.thinning},
         {"hyper", hyper_to_json(c.hyper)},
         {"content_concentration", c.content_concentration},
         {"missing_context_frac", c.missing_context_frac},
         {"test_frac", c.test_frac},
         {"smooth", c.smooth},
         {"out_dir", c.out_dir}};
  out << j.dump(2) << '\n';
}

void write_trace_csv(std::ostream& out, const std::vector<SweepReport>& reports) {
  out << "iter,K,M,alpha,v,eta,logjoint\n";
  for (const auto& r : reports) {
    json row = {r.alpha, r.v, r.eta, r.log_joint};  // shortest round-trip doubles
    out << r.iteration << ',' << r.K << ',' << r.M << ',' << row[0].dump() << ','
        << row[1].dump() << ',' << row[2].dump() << ',' << row[3].dump() << '\n';
  }
}

void write_snapshots(std::ostream& out, const std::vector<SampleTrace>& samples) {
  for (const auto& s : samples) {
    json j{{"iter", s.iteration}, {"z", s.z},     {"l", s.l},
           {"epsilon", s.epsilon}, {"alpha", s.alpha}, {"v", s.v},
           {"eta", s.eta}};
    out << j.dump() << '\n';
  }
}

std::vector<SampleTrace> read_snapshots(std::istream& in) {
  std::vector<SampleTrace> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DomainError("snapshots:" + std::to_string(line_no) + ": " + e.what());
    }
    SampleTrace s;
    s.iteration = j.value("iter", 0);
    s.z = j.at("z").get<std::vector<int>>();
    s.l = j.at("l").get<std::vector<std::vector<int>>>();
    s.epsilon = j.at("epsilon").get<std::vector<double>>();
    s.alpha = j.value("alpha", 1.0);
    s.v = j.value("v", 1.0);
    s.eta = j.value("eta", 1.0);
    samples.push_back(std::move(s));
  }
  return samples;
}

void write_marginalization_report(std::ostream& out,
                                  const std::vector<MarginalizationReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json cell{{"alpha", r.hyper.alpha}, {"v", r.hyper.v},   {"eta", r.hyper.eta},
              {"draws", r.draws},       {"all_pass", r.all_pass},
              {"max_abs_deviation", r.max_abs_deviation},
              {"checks", json::array()}};
    for (const auto& c : r.checks) {
      cell["checks"].push_back(json{{"statistic", c.name},
                                    {"closed_form", c.closed_form},
                                    {"mc_estimate", c.mc2_estimate},
                                    {"reference_estimate", c.reference_estimate},
                                    {"sigma", c.sigma},
                                    {"pass", c.pass}});
    }
    arr.push_back(std::move(cell));
  }
  out << arr.dump(2) << '\n';
}

void write_metrics_json(std::ostream& out, const MetricsReport& report) {
  json j = json::object();
  for (const auto& [name, value] : report.values) j[name] = value;
  out << j.dump(2) << '\n';
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report) {
  out << "metric,value\n";
  for (const auto& [name, value] : report.values) {
    out << name << ',' << json(value).dump() << '\n';
  }
}

}  // namespace mcclust
