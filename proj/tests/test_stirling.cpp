#include <doctest.h>

#include <cmath>
#include <vector>

#include "mcclust/stirling.hpp"

using namespace mcclust;

namespace {

// Exact unsigned Stirling numbers of the first kind for small n.
std::vector<std::vector<double>> exact_stirling(int n_max) {
  std::vector<std::vector<double>> s(static_cast<std::size_t>(n_max) + 1);
  s[0] = {1.0};
  for (int n = 1; n <= n_max; ++n) {
    s[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (int h = 1; h <= n; ++h) {
      const double carry = (h <= n - 1) ? s[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(h)] : 0.0;
      s[static_cast<std::size_t>(n)][static_cast<std::size_t>(h)] =
          s[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(h - 1)] +
          static_cast<double>(n - 1) * carry;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("log rows match exact stirling numbers up to n = 12") {
  LogStirlingTable table(4);  // forces extension
  const auto exact = exact_stirling(12);
  for (int n = 1; n <= 12; ++n) {
    const auto& row = table.row(n);
    REQUIRE(static_cast<int>(row.size()) == n + 1);
    // Rows are max-normalized; compare ratios against the exact values.
    int h_max = 1;
    for (int h = 1; h <= n; ++h) {
      if (exact[static_cast<std::size_t>(n)][static_cast<std::size_t>(h)] >
          exact[static_cast<std::size_t>(n)][static_cast<std::size_t>(h_max)]) {
        h_max = h;
      }
    }
    for (int h = 1; h <= n; ++h) {
      const double expected = std::log(exact[static_cast<std::size_t>(n)][static_cast<std::size_t>(h)]) -
                              std::log(exact[static_cast<std::size_t>(n)][static_cast<std::size_t>(h_max)]);
      CHECK(row[static_cast<std::size_t>(h)] == doctest::Approx(expected).epsilon(1e-10));
    }
    CHECK(row[0] == -std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("table count law for n = 3 at unit weight is (2/6, 3/6, 1/6)") {
  LogStirlingTable table;
  Rng rng(11);
  const int draws = 200000;
  std::vector<int> hist(4, 0);
  for (int d = 0; d < draws; ++d) ++hist[static_cast<std::size_t>(table.sample_table_count(3, 0.0, rng))];
  CHECK(hist[0] == 0);
  CHECK(static_cast<double>(hist[1]) / draws == doctest::Approx(2.0 / 6.0).epsilon(0.02));
  CHECK(static_cast<double>(hist[2]) / draws == doctest::Approx(3.0 / 6.0).epsilon(0.02));
  CHECK(static_cast<double>(hist[3]) / draws == doctest::Approx(1.0 / 6.0).epsilon(0.05));
}

TEST_CASE("degenerate counts") {
  LogStirlingTable table;
  Rng rng(3);
  CHECK(table.sample_table_count(0, 0.0, rng) == 0);
  for (int d = 0; d < 50; ++d) CHECK(table.sample_table_count(1, std::log(0.37), rng) == 1);
}
