#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "mcclust/errors.hpp"

namespace mcclust {

/// Categorical likelihood with a Dirichlet prior. Posterior predictive is the
/// Polya urn rule (count + gamma) / (total + sum gamma).
class DirichletCategorical {
 public:
  DirichletCategorical() = default;
  DirichletCategorical(int dim, double concentration)
      : concentration_(dim, concentration), counts_(dim, 0), total_(0) {
    if (dim <= 0) throw DomainError("DirichletCategorical: dim must be positive");
    if (concentration <= 0.0) throw DomainError("DirichletCategorical: concentration must be positive");
  }
  explicit DirichletCategorical(std::vector<double> concentration)
      : concentration_(std::move(concentration)), counts_(concentration_.size(), 0), total_(0) {
    for (double g : concentration_) {
      if (g <= 0.0) throw DomainError("DirichletCategorical: concentration must be positive");
    }
  }

  int dim() const { return static_cast<int>(concentration_.size()); }
  std::int64_t total() const { return total_; }
  std::int64_t count(int v) const { return counts_.at(static_cast<std::size_t>(v)); }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  double log_predictive(int v) const {
    check(v);
    const double num = static_cast<double>(counts_[static_cast<std::size_t>(v)]) +
                       concentration_[static_cast<std::size_t>(v)];
    return std::log(num) - std::log(static_cast<double>(total_) + concentration_sum());
  }

  double log_block_marginal(std::span<const int> block) const {
    // Sequential Polya products collapse to Gamma ratios over the counts of
    // each symbol in the block.
    std::vector<std::int64_t> extra(concentration_.size(), 0);
    for (int v : block) {
      check(v);
      ++extra[static_cast<std::size_t>(v)];
    }
    double log_p = std::lgamma(static_cast<double>(total_) + concentration_sum()) -
                   std::lgamma(static_cast<double>(total_) + static_cast<double>(block.size()) +
                               concentration_sum());
    for (std::size_t v = 0; v < extra.size(); ++v) {
      if (extra[v] == 0) continue;
      const double base = static_cast<double>(counts_[v]) + concentration_[v];
      log_p += std::lgamma(base + static_cast<double>(extra[v])) - std::lgamma(base);
    }
    return log_p;
  }

  void add(int v) {
    check(v);
    ++counts_[static_cast<std::size_t>(v)];
    ++total_;
  }

  void remove(int v) {
    check(v);
    if (counts_[static_cast<std::size_t>(v)] <= 0) {
      throw StateCorruptionError("DirichletCategorical: removing unrepresented observation");
    }
    --counts_[static_cast<std::size_t>(v)];
    --total_;
  }

  double concentration_sum() const {
    double s = 0.0;
    for (double g : concentration_) s += g;
    return s;
  }
  const std::vector<double>& concentration() const { return concentration_; }

 private:
  void check(int v) const {
    if (v < 0 || v >= dim()) throw StructuralError("DirichletCategorical: observation out of range");
  }

  std::vector<double> concentration_;
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// Gaussian likelihood with unknown mean and precision under a Normal-Gamma
/// prior; predictive is Student-t. Sufficient statistics are (n, sum, sum of
/// squares) with removal by subtraction.
class NormalGamma {
 public:
  NormalGamma() = default;
  NormalGamma(double m0, double kappa0, double a0, double b0)
      : m0_(m0), kappa0_(kappa0), a0_(a0), b0_(b0) {
    if (kappa0 <= 0.0 || a0 <= 0.0 || b0 <= 0.0) {
      throw DomainError("NormalGamma: kappa0, a0, b0 must be positive");
    }
  }

  std::int64_t n() const { return n_; }
  double m0() const { return m0_; }
  double kappa0() const { return kappa0_; }
  double a0() const { return a0_; }
  double b0() const { return b0_; }
  double sum() const { return sum_; }
  double sum_sq() const { return sum_sq_; }

  void add(double x) {
    ++n_;
    sum_ += x;
    sum_sq_ += x * x;
  }

  void remove(double x) {
    if (n_ <= 0) throw StateCorruptionError("NormalGamma: removing from empty stats");
    --n_;
    sum_ -= x;
    sum_sq_ -= x * x;
    if (n_ == 0) {
      // Reset accumulated rounding once the component empties.
      sum_ = 0.0;
      sum_sq_ = 0.0;
    }
  }

  struct Posterior {
    double m, kappa, a, b;
  };

  Posterior posterior() const {
    const double nn = static_cast<double>(n_);
    Posterior p;
    p.kappa = kappa0_ + nn;
    p.m = (kappa0_ * m0_ + sum_) / p.kappa;
    p.a = a0_ + 0.5 * nn;
    double ss = 0.0;
    if (n_ > 0) {
      const double mean = sum_ / nn;
      ss = sum_sq_ - nn * mean * mean;
      ss = std::max(ss, 0.0);
      p.b = b0_ + 0.5 * ss + 0.5 * (kappa0_ * nn * (mean - m0_) * (mean - m0_)) / p.kappa;
    } else {
      p.b = b0_;
    }
    return p;
  }

  /// Student-t predictive: df = 2a, location m, scale^2 = b(kappa+1)/(a kappa).
  double log_predictive(double x) const {
    const Posterior p = posterior();
    const double df = 2.0 * p.a;
    const double scale_sq = p.b * (p.kappa + 1.0) / (p.a * p.kappa);
    const double z = (x - p.m);
    return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
           0.5 * std::log(df * M_PI * scale_sq) -
           0.5 * (df + 1.0) * std::log1p(z * z / (df * scale_sq));
  }

  double log_block_marginal(std::span<const double> block) const {
    NormalGamma scratch = *this;
    double log_p = 0.0;
    for (double x : block) {
      log_p += scratch.log_predictive(x);
      scratch.add(x);
    }
    return log_p;
  }

 private:
  double m0_ = 0.0;
  double kappa0_ = 1.0;
  double a0_ = 1.0;
  double b0_ = 1.0;
  std::int64_t n_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

}  // namespace mcclust
