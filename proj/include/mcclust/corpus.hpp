#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mcclust/conjugate.hpp"
#include "mcclust/errors.hpp"

namespace mcclust {

/// A group-level context observation: absent, a real value (Gaussian kernel),
/// or a bag of categorical ids (Dirichlet-categorical kernel).
using ContextObs = std::variant<std::monostate, double, std::vector<int>>;

inline bool has_context(const ContextObs& c) {
  return !std::holds_alternative<std::monostate>(c);
}

enum class ContextFamily { None, Gaussian, Categorical };

/// Which conjugate family governs contexts, with its prior parameters.
struct ContextDescriptor {
  ContextFamily family = ContextFamily::None;
  // Gaussian (Normal-Gamma prior)
  double m0 = 0.0;
  double kappa0 = 1.0;
  double a0 = 1.0;
  double b0 = 1.0;
  // Categorical
  int vocab_size = 0;
  double concentration = 0.5;

  DirichletCategorical make_categorical() const {
    return DirichletCategorical(vocab_size, concentration);
  }
  NormalGamma make_gaussian() const { return NormalGamma(m0, kappa0, a0, b0); }
};

struct Group {
  std::string id;
  std::vector<int> tokens;
  ContextObs context;
};

struct GroupedCorpus {
  std::vector<Group> groups;
  int content_vocab_size = 0;
  double content_concentration = 0.5;  // symmetric Dirichlet over words
  ContextDescriptor context;

  std::size_t num_groups() const { return groups.size(); }
  std::size_t total_tokens() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.tokens.size();
    return n;
  }

  void validate() const {
    for (const auto& g : groups) {
      for (int w : g.tokens) {
        if (w < 0 || w >= content_vocab_size) {
          throw StructuralError("corpus: token id out of range in group '" + g.id + "'");
        }
      }
      if (context.family == ContextFamily::Categorical) {
        if (const auto* tags = std::get_if<std::vector<int>>(&g.context)) {
          for (int t : *tags) {
            if (t < 0 || t >= context.vocab_size) {
              throw StructuralError("corpus: context tag out of range in group '" + g.id + "'");
            }
          }
        } else if (std::holds_alternative<double>(g.context)) {
          throw StructuralError("corpus: numeric context under categorical family in group '" +
                                g.id + "'");
        }
      } else if (context.family == ContextFamily::Gaussian) {
        if (std::holds_alternative<std::vector<int>>(g.context)) {
          throw StructuralError("corpus: tag context under gaussian family in group '" + g.id +
                                "'");
        }
      }
    }
  }
};

}  // namespace mcclust
