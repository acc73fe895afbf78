#include "mcclust/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mcclust/font_data.hpp"

namespace mcclust {

std::map<char, std::vector<int>> letter_pixel_masks() {
  std::istringstream in(detail::kFont7x5);
  std::map<char, std::vector<int>> masks;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.size() == 1 && std::isalpha(static_cast<unsigned char>(line[0]))) {
      const char letter = line[0];
      std::vector<int> pixels;
      for (int row = 0; row < 7; ++row) {
        if (!std::getline(in, line) || line.size() < 5) {
          throw DomainError("font data: malformed mask for letter");
        }
        for (int col = 0; col < 5; ++col) {
          if (line[static_cast<std::size_t>(col)] == '#') pixels.push_back(row * 5 + col);
        }
      }
      masks[letter] = std::move(pixels);
    }
  }
  return masks;
}

namespace {

std::vector<double> uniform_over(const std::vector<int>& support, int vocab) {
  std::vector<double> dist(static_cast<std::size_t>(vocab), 0.0);
  for (int p : support) dist[static_cast<std::size_t>(p)] = 1.0 / static_cast<double>(support.size());
  return dist;
}

int draw_from(const std::vector<double>& dist, Rng& rng) {
  return static_cast<int>(rng.categorical_from_weights(dist));
}

}  // namespace

std::pair<GroupedCorpus, GroundTruth> make_icml_corpus(Rng& rng, const IcmlOptions& opts) {
  const std::vector<std::string> words = {"INTERNATIONAL", "CONFERENCE", "MACHINE", "LEARNING"};
  const auto masks = letter_pixel_masks();

  // Topic index per unique letter, in first-appearance order over the string.
  std::vector<char> letters;
  for (const auto& word : words) {
    for (char c : word) {
      if (std::find(letters.begin(), letters.end(), c) == letters.end()) letters.push_back(c);
    }
  }

  GroundTruth truth;
  constexpr int kVocab = 35;
  for (char c : letters) {
    truth.true_topics.push_back(uniform_over(masks.at(c), kVocab));
    truth.topic_names.push_back(std::string(1, c));
  }
  for (const auto& word : words) {
    std::set<char> uniq(word.begin(), word.end());
    std::vector<int> topic_set;
    for (char c : uniq) {
      topic_set.push_back(static_cast<int>(
          std::find(letters.begin(), letters.end(), c) - letters.begin()));
    }
    truth.cluster_topic_sets.push_back(std::move(topic_set));
  }
  for (std::size_t k = 0; k < words.size(); ++k) {
    truth.context_params.emplace_back(opts.context_means.at(k), opts.context_variances.at(k));
  }

  GroupedCorpus corpus;
  corpus.content_vocab_size = kVocab;
  corpus.context.family = ContextFamily::Gaussian;
  for (std::size_t k = 0; k < words.size(); ++k) {
    for (int g = 0; g < opts.groups_per_cluster; ++g) {
      Group group;
      group.id = "c" + std::to_string(k) + "_g" + std::to_string(g);
      const auto& topic_set = truth.cluster_topic_sets[k];
      for (int i = 0; i < opts.tokens_per_group; ++i) {
        const int topic = topic_set[rng.integer(topic_set.size())];
        group.tokens.push_back(draw_from(truth.true_topics[static_cast<std::size_t>(topic)], rng));
      }
      group.context = rng.normal(truth.context_params[k].first,
                                 std::sqrt(truth.context_params[k].second));
      corpus.groups.push_back(std::move(group));
      truth.true_z.push_back(static_cast<int>(k));
    }
  }
  // Weakly-informative Gaussian context prior anchored at the data scale.
  double mean = 0.0, var = 0.0;
  for (const auto& g : corpus.groups) mean += std::get<double>(g.context);
  mean /= static_cast<double>(corpus.groups.size());
  for (const auto& g : corpus.groups) {
    const double d = std::get<double>(g.context) - mean;
    var += d * d;
  }
  var /= static_cast<double>(corpus.groups.size());
  corpus.context.m0 = mean;
  corpus.context.kappa0 = 1.0;
  corpus.context.a0 = 1.0;
  corpus.context.b0 = var;
  corpus.validate();
  return {std::move(corpus), std::move(truth)};
}

std::pair<GroupedCorpus, GroundTruth> make_generic_corpus(const GenericSpec& spec) {
  if (spec.num_clusters < 1 || spec.num_topics < spec.topics_per_cluster ||
      spec.vocab_size < spec.num_topics || spec.num_groups < spec.num_clusters) {
    throw DomainError("make_generic_corpus: inconsistent spec");
  }
  Rng rng(spec.seed);
  GroundTruth truth;
  // Sparse random topics: each topic puts mass on a random third of the vocab.
  for (int m = 0; m < spec.num_topics; ++m) {
    std::vector<int> support;
    for (int w = 0; w < spec.vocab_size; ++w) {
      if (rng.uniform() < 0.34) support.push_back(w);
    }
    if (support.empty()) support.push_back(static_cast<int>(rng.integer(spec.vocab_size)));
    truth.true_topics.push_back(uniform_over(support, spec.vocab_size));
  }
  for (int k = 0; k < spec.num_clusters; ++k) {
    std::vector<int> all_topics(static_cast<std::size_t>(spec.num_topics));
    for (int m = 0; m < spec.num_topics; ++m) all_topics[static_cast<std::size_t>(m)] = m;
    std::vector<int> chosen;
    for (int pick = 0; pick < spec.topics_per_cluster; ++pick) {
      const auto idx = rng.integer(all_topics.size());
      chosen.push_back(all_topics[idx]);
      all_topics.erase(all_topics.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    std::sort(chosen.begin(), chosen.end());
    truth.cluster_topic_sets.push_back(std::move(chosen));
    truth.context_params.emplace_back(spec.context_separation * static_cast<double>(k + 1),
                                      spec.context_variance);
  }

  GroupedCorpus corpus;
  corpus.content_vocab_size = spec.vocab_size;
  corpus.context.family = spec.context_family;
  for (int j = 0; j < spec.num_groups; ++j) {
    const int k = j % spec.num_clusters;  // balanced cluster sizes
    Group group;
    group.id = "g" + std::to_string(j);
    const auto& topic_set = truth.cluster_topic_sets[static_cast<std::size_t>(k)];
    for (int i = 0; i < spec.tokens_per_group; ++i) {
      const int topic = topic_set[rng.integer(topic_set.size())];
      group.tokens.push_back(draw_from(truth.true_topics[static_cast<std::size_t>(topic)], rng));
    }
    if (spec.context_family == ContextFamily::Gaussian) {
      group.context = rng.normal(truth.context_params[static_cast<std::size_t>(k)].first,
                                 std::sqrt(truth.context_params[static_cast<std::size_t>(k)].second));
    }
    corpus.groups.push_back(std::move(group));
    truth.true_z.push_back(k);
  }
  if (spec.context_family == ContextFamily::Gaussian && !corpus.groups.empty()) {
    double mean = 0.0, var = 0.0;
    for (const auto& g : corpus.groups) mean += std::get<double>(g.context);
    mean /= static_cast<double>(corpus.groups.size());
    for (const auto& g : corpus.groups) {
      const double d = std::get<double>(g.context) - mean;
      var += d * d;
    }
    var = std::max(var / static_cast<double>(corpus.groups.size()), 1e-6);
    corpus.context.m0 = mean;
    corpus.context.b0 = var;
  }
  corpus.validate();
  return {std::move(corpus), std::move(truth)};
}

}  // namespace mcclust
