#include <doctest.h>

#include <set>

#include "mcclust/synthgen.hpp"

using namespace mcclust;

TEST_CASE("font table has thirteen letters with plausible masks") {
  const auto masks = letter_pixel_masks();
  CHECK(masks.size() == 13);
  const std::string letters = "ACEFGHILMNORT";
  for (char c : letters) {
    REQUIRE(masks.count(c) == 1);
    const auto& mask = masks.at(c);
    CHECK(!mask.empty());
    CHECK(mask.size() < 35);
    for (int px : mask) {
      CHECK(px >= 0);
      CHECK(px < 35);
    }
  }
  // Distinct letters have distinct masks.
  std::set<std::vector<int>> seen;
  for (const auto& [c, mask] : masks) seen.insert(mask);
  CHECK(seen.size() == 13);
}

TEST_CASE("letters corpus has the documented shape") {
  Rng rng(1);
  IcmlOptions opts;
  opts.groups_per_cluster = 6;
  opts.tokens_per_group = 12;
  const auto [corpus, truth] = make_icml_corpus(rng, opts);
  CHECK(corpus.num_groups() == 24);
  CHECK(corpus.content_vocab_size == 35);
  CHECK(truth.true_topics.size() == 13);
  REQUIRE(truth.cluster_topic_sets.size() == 4);
  // Unique letters per word of the phrase.
  CHECK(truth.cluster_topic_sets[0].size() == 8);   // INTERNATIONAL
  CHECK(truth.cluster_topic_sets[1].size() == 6);   // CONFERENCE
  CHECK(truth.cluster_topic_sets[2].size() == 7);   // MACHINE
  CHECK(truth.cluster_topic_sets[3].size() == 7);   // LEARNING
  CHECK(truth.context_params.size() == 4);
  CHECK(truth.context_params[0].first == doctest::Approx(2.0));
  CHECK(truth.context_params[3].first == doctest::Approx(8.0));

  // Every token lies in the union support of its cluster's topics.
  for (std::size_t j = 0; j < corpus.num_groups(); ++j) {
    const int k = truth.true_z[j];
    std::set<int> support;
    for (int m : truth.cluster_topic_sets[static_cast<std::size_t>(k)]) {
      const auto& topic = truth.true_topics[static_cast<std::size_t>(m)];
      for (std::size_t w = 0; w < topic.size(); ++w) {
        if (topic[w] > 0.0) support.insert(static_cast<int>(w));
      }
    }
    for (int w : corpus.groups[j].tokens) CHECK(support.count(w) == 1);
    CHECK(std::holds_alternative<double>(corpus.groups[j].context));
  }
}

TEST_CASE("letters corpus is reproducible from the seed") {
  IcmlOptions opts;
  opts.groups_per_cluster = 3;
  opts.tokens_per_group = 10;
  Rng r1(42), r2(42);
  const auto [c1, t1] = make_icml_corpus(r1, opts);
  const auto [c2, t2] = make_icml_corpus(r2, opts);
  REQUIRE(c1.num_groups() == c2.num_groups());
  for (std::size_t j = 0; j < c1.num_groups(); ++j) {
    CHECK(c1.groups[j].tokens == c2.groups[j].tokens);
    CHECK(std::get<double>(c1.groups[j].context) == std::get<double>(c2.groups[j].context));
  }
  CHECK(t1.true_z == t2.true_z);
}

TEST_CASE("topic draws follow the uniform pixel-mask distribution") {
  Rng rng(5);
  IcmlOptions opts;
  opts.groups_per_cluster = 40;
  opts.tokens_per_group = 60;
  const auto [corpus, truth] = make_icml_corpus(rng, opts);
  // Aggregate token frequencies over the whole corpus and compare against
  // the mixture implied by the ground truth (topics uniform over masks,
  // topics uniform within a cluster's set, clusters balanced).
  std::vector<double> expected(35, 0.0);
  for (std::size_t k = 0; k < truth.cluster_topic_sets.size(); ++k) {
    const auto& set = truth.cluster_topic_sets[k];
    for (int m : set) {
      const auto& topic = truth.true_topics[static_cast<std::size_t>(m)];
      for (std::size_t w = 0; w < topic.size(); ++w) {
        expected[w] += 0.25 * topic[w] / static_cast<double>(set.size());
      }
    }
  }
  std::vector<double> observed(35, 0.0);
  double total = 0.0;
  for (const auto& g : corpus.groups) {
    for (int w : g.tokens) {
      observed[static_cast<std::size_t>(w)] += 1.0;
      total += 1.0;
    }
  }
  for (std::size_t w = 0; w < 35; ++w) {
    const double sigma = std::sqrt(std::max(expected[w] * (1.0 - expected[w]), 1e-9) / total);
    CHECK(std::abs(observed[w] / total - expected[w]) < 5.0 * sigma + 1e-9);
  }
}

TEST_CASE("generic corpus respects its spec") {
  GenericSpec spec;
  spec.num_groups = 24;
  spec.tokens_per_group = 15;
  spec.num_clusters = 4;
  spec.num_topics = 6;
  spec.vocab_size = 12;
  spec.seed = 77;
  const auto [corpus, truth] = make_generic_corpus(spec);
  CHECK(corpus.num_groups() == 24);
  CHECK(corpus.content_vocab_size == 12);
  CHECK(truth.true_topics.size() == 6);
  std::set<int> clusters(truth.true_z.begin(), truth.true_z.end());
  CHECK(static_cast<int>(clusters.size()) == 4);
  for (const auto& g : corpus.groups) {
    CHECK(g.tokens.size() == 15);
    CHECK(std::holds_alternative<double>(g.context));
  }
  // Bit-identical regeneration.
  const auto [again, truth2] = make_generic_corpus(spec);
  for (std::size_t j = 0; j < corpus.num_groups(); ++j) {
    CHECK(corpus.groups[j].tokens == again.groups[j].tokens);
  }
}
