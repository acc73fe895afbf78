#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mcclust/corpus.hpp"
#include "mcclust/rng.hpp"

namespace mcclust {

struct GroundTruth {
  std::vector<int> true_z;                          // per-group cluster id
  std::vector<std::vector<double>> true_topics;     // topic -> distribution over V
  std::vector<std::vector<int>> cluster_topic_sets; // per-cluster admissible topics
  std::vector<std::pair<double, double>> context_params;  // per-cluster (mean, variance)
  std::vector<std::string> topic_names;             // optional labels (letters)
};

/// 7x5 pixel masks parsed from the shipped font data; key is the letter.
std::map<char, std::vector<int>> letter_pixel_masks();

/// The four-cluster letters corpus: each cluster's admissible topics are the
/// unique letters of one word of "INTERNATIONAL CONFERENCE MACHINE LEARNING",
/// topics are uniform over a letter's pixel mask (V = 35), 100 groups of 50
/// tokens per cluster, contexts from per-cluster Gaussians at 2, 4, 6, 8.
struct IcmlOptions {
  int groups_per_cluster = 100;
  int tokens_per_group = 50;
  std::vector<double> context_means = {2.0, 4.0, 6.0, 8.0};
  std::vector<double> context_variances = {0.25, 0.5, 0.75, 1.0};
};

std::pair<GroupedCorpus, GroundTruth> make_icml_corpus(Rng& rng, const IcmlOptions& opts = {});

struct GenericSpec {
  int num_groups = 40;
  int tokens_per_group = 30;
  int num_clusters = 3;
  int num_topics = 6;
  int vocab_size = 20;
  int topics_per_cluster = 3;
  ContextFamily context_family = ContextFamily::Gaussian;
  double context_separation = 3.0;  // spacing of cluster context means
  double context_variance = 0.5;
  std::uint64_t seed = 0;
};

std::pair<GroupedCorpus, GroundTruth> make_generic_corpus(const GenericSpec& spec);

}  // namespace mcclust
