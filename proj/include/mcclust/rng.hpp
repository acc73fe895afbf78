#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mcclust/errors.hpp"

namespace mcclust {

/// Deterministic random engine. All stochastic operations in the library go
/// through this wrapper so that a 64-bit seed fully reproduces a run.
/// Distribution objects are constructed per call; none keeps hidden state
/// across calls, which keeps checkpoint/restore bit-identical.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double normal(double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }

  /// Gamma with shape/rate parameterization (mean = shape/rate).
  double gamma(double shape, double rate) {
    return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
  }

  double beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t integer(std::uint64_t upper_exclusive) {
    return std::uniform_int_distribution<std::uint64_t>(0, upper_exclusive - 1)(engine_);
  }

  std::vector<double> dirichlet(std::span<const double> concentration) {
    std::vector<double> draw(concentration.size());
    double total = 0.0;
    for (std::size_t i = 0; i < concentration.size(); ++i) {
      draw[i] = gamma(concentration[i], 1.0);
      total += draw[i];
    }
    if (total <= 0.0) {
      // All shapes tiny; fall back to the normalized shapes themselves.
      double c = 0.0;
      for (double a : concentration) c += a;
      for (std::size_t i = 0; i < draw.size(); ++i) draw[i] = concentration[i] / c;
      return draw;
    }
    for (double& d : draw) d /= total;
    return draw;
  }

  /// Draw an index proportional to exp(logit_i). Shift by the max before
  /// exponentiating.
  std::size_t categorical_from_logits(std::span<const double> logits) {
    double max_logit = -std::numeric_limits<double>::infinity();
    for (double w : logits) max_logit = std::max(max_logit, w);
    if (!std::isfinite(max_logit)) {
      throw NumericalError("categorical_from_logits: all weights are -inf");
    }
    double total = 0.0;
    std::vector<double> probs(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
      probs[i] = std::exp(logits[i] - max_logit);
      total += probs[i];
    }
    const double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.size() - 1;
  }

  std::size_t categorical_from_weights(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw NumericalError("categorical_from_weights: zero total mass");
    const double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.size() - 1;
  }

  /// Engine state as text, for checkpoints.
  std::string serialize() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
  }

  void restore(const std::string& text) {
    std::istringstream is(text);
    is >> engine_;
    if (is.fail()) throw DomainError("Rng::restore: malformed engine state");
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

inline double log_sum_exp(std::span<const double> logs) {
  double max_log = -std::numeric_limits<double>::infinity();
  for (double v : logs) max_log = std::max(max_log, v);
  if (!std::isfinite(max_log)) return max_log;
  double total = 0.0;
  for (double v : logs) total += std::exp(v - max_log);
  return max_log + std::log(total);
}

inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace mcclust
