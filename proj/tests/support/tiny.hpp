#pragma once

// Small corpus builders shared across test files.

#include <string>
#include <vector>

#include "mcclust/corpus.hpp"

namespace mcclust::testsupport {

inline GroupedCorpus tiny_gaussian_corpus(std::vector<std::vector<int>> tokens,
                                          std::vector<double> contexts, int vocab_size,
                                          double concentration = 0.5) {
  GroupedCorpus corpus;
  corpus.content_vocab_size = vocab_size;
  corpus.content_concentration = concentration;
  corpus.context.family = ContextFamily::Gaussian;
  corpus.context.m0 = 0.0;
  corpus.context.kappa0 = 1.0;
  corpus.context.a0 = 1.0;
  corpus.context.b0 = 1.0;
  for (std::size_t j = 0; j < tokens.size(); ++j) {
    Group g;
    g.id = "g" + std::to_string(j);
    g.tokens = std::move(tokens[j]);
    if (j < contexts.size()) g.context = contexts[j];
    corpus.groups.push_back(std::move(g));
  }
  corpus.validate();
  return corpus;
}

inline GroupedCorpus tiny_plain_corpus(std::vector<std::vector<int>> tokens, int vocab_size) {
  GroupedCorpus corpus;
  corpus.content_vocab_size = vocab_size;
  corpus.content_concentration = 0.5;
  corpus.context.family = ContextFamily::None;
  for (std::size_t j = 0; j < tokens.size(); ++j) {
    Group g;
    g.id = "g" + std::to_string(j);
    g.tokens = std::move(tokens[j]);
    corpus.groups.push_back(std::move(g));
  }
  corpus.validate();
  return corpus;
}

}  // namespace mcclust::testsupport
