#pragma once

#include <cstdint>
#include <vector>

#include "mcclust/rng.hpp"

namespace mcclust {

/// Rows of log unsigned Stirling numbers of the first kind, max-normalized
/// per row so that raw magnitudes never overflow. Row n holds
/// log Stirl(h, n) - max_h log Stirl(h, n) for h = 0..n.
class LogStirlingTable {
 public:
  explicit LogStirlingTable(int n_max = 64) { extend(n_max); }

  int n_max() const { return static_cast<int>(rows_.size()) - 1; }

  /// Max-normalized log row for n customers; index h in [0, n].
  const std::vector<double>& row(int n) {
    if (n > n_max()) extend(n);
    return rows_[static_cast<std::size_t>(n)];
  }

  /// Draw h with p(h) proportional to Stirl(h, n) * w^h (the Antoniak table
  /// count law with weight w = v * epsilon_m).
  int sample_table_count(int n, double log_weight, Rng& rng);

 private:
  void extend(int n_max);
  std::vector<std::vector<double>> rows_;
};

}  // namespace mcclust
