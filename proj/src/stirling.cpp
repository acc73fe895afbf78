#include "mcclust/stirling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcclust {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void LogStirlingTable::extend(int n_max) {
  if (rows_.empty()) {
    rows_.push_back({0.0});  // Stirl(0,0) = 1
  }
  // Recurrence: Stirl(h, n+1) = Stirl(h-1, n) + n * Stirl(h, n).
  // Rows are stored shifted by their max; the recurrence only needs ratios
  // within one row, so we carry the shift of the previous row and renormalize.
  while (n_max > this->n_max()) {
    const int n = this->n_max();
    const std::vector<double>& prev = rows_.back();
    std::vector<double> next(static_cast<std::size_t>(n) + 2, kNegInf);
    const double log_n = std::log(static_cast<double>(n));
    for (int h = 0; h <= n + 1; ++h) {
      double a = (h >= 1 && h - 1 <= n) ? prev[static_cast<std::size_t>(h - 1)] : kNegInf;
      double b = (h <= n && n >= 1) ? log_n + prev[static_cast<std::size_t>(h)] : kNegInf;
      if (n == 0) b = kNegInf;  // 0 * Stirl(h, 0)
      next[static_cast<std::size_t>(h)] = log_add_exp(a, b);
    }
    const double mx = *std::max_element(next.begin(), next.end());
    for (double& v : next) v -= mx;
    rows_.push_back(std::move(next));
  }
}

int LogStirlingTable::sample_table_count(int n, double log_weight, Rng& rng) {
  if (n < 0) throw DomainError("sample_table_count: negative count");
  if (n == 0) return 0;
  const std::vector<double>& r = row(n);
  std::vector<double> logits(r.size());
  for (std::size_t h = 0; h < r.size(); ++h) {
    logits[h] = r[h] + static_cast<double>(h) * log_weight;
  }
  return static_cast<int>(rng.categorical_from_logits(logits));
}

}  // namespace mcclust
