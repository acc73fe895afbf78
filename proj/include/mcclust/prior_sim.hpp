#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcclust/rng.hpp"
#include "mcclust/state.hpp"

namespace mcclust {

/// One forward draw from the model prior in its urn representation: buses
/// (groups) seated by CRP(alpha), customers (tokens) by per-restaurant
/// CRP(v) over shared tables, tables served dishes by a franchise CRP(eta),
/// and one dessert (context atom) per restaurant.
struct PriorDraw {
  std::vector<int> z;                     // group -> restaurant
  std::vector<std::vector<int>> tables;   // group -> per-token table id (within its restaurant)
  std::vector<std::vector<int>> dishes;   // restaurant -> table -> dish id (global)
  std::vector<int> dessert_atom;          // restaurant -> context atom id
  std::vector<int> dish_atom;             // dish -> content atom id

  int num_restaurants() const { return static_cast<int>(dishes.size()); }
  int num_dishes() const { return static_cast<int>(dish_atom.size()); }

  /// Content atom of token (j,i).
  int content_atom(int j, int i) const {
    return dish_atom[static_cast<std::size_t>(
        dishes[static_cast<std::size_t>(z[static_cast<std::size_t>(j)])]
              [static_cast<std::size_t>(tables[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])])];
  }
  /// Context atom of group j.
  int context_atom(int j) const {
    return dessert_atom[static_cast<std::size_t>(z[static_cast<std::size_t>(j)])];
  }
};

/// Finite categorical base measures make every atom-coincidence probability
/// computable in closed form. When absent, every base draw is a fresh atom.
struct UrnBases {
  std::optional<std::vector<double>> context;  // H over a finite atom set
  std::optional<std::vector<double>> content;  // S over a finite atom set
};

PriorDraw simulate_urn(int num_groups, const std::vector<int>& token_counts,
                       const Hyperparameters& hyper, Rng& rng, const UrnBases& bases = {});

/// Truncated stick-breaking draw of the weight structure.
struct SticksDraw {
  std::vector<double> pi;                // GEM(alpha), truncated
  std::vector<double> epsilon;           // GEM(eta), truncated
  std::vector<std::vector<double>> tau;  // per cluster, Dirichlet(v * epsilon)
};

SticksDraw simulate_sticks(int truncation, const Hyperparameters& hyper, Rng& rng);

/// Truncation giving expected residual GEM mass below 1e-8.
int default_truncation(double concentration);

/// Closed-form P(phi in A1, phi' in A2) for two content draws under the
/// nested-DP prior, given base-measure masses s1 = S(A1), s2 = S(A2),
/// s12 = S(A1 and A2). Both branches evaluate to 1 at s1 = s2 = s12 = 1.
double ndpm_pair_probability(bool same_group, double s1, double s2, double s12,
                             const Hyperparameters& hyper);

/// Monte-Carlo estimate of P(phi in A1, phi' in A2) for two content draws,
/// with A1 and A2 given as atom-membership masks over the finite base S.
double ndpm_pair_mc(bool same_group, const std::vector<bool>& in_a1,
                    const std::vector<bool>& in_a2, const std::vector<double>& content_base,
                    const Hyperparameters& hyper, std::int64_t draws, Rng& rng);

struct StatCheck {
  std::string name;
  double closed_form = 0.0;
  double mc2_estimate = 0.0;
  double reference_estimate = 0.0;  // matching pure DPM / nDPM simulator
  double sigma = 0.0;               // std error of the estimate difference
  bool pass = false;
};

struct MarginalizationReport {
  Hyperparameters hyper;
  std::int64_t draws = 0;
  std::vector<StatCheck> checks;
  double max_abs_deviation = 0.0;
  bool all_pass = true;
};

/// Monte-Carlo check that integrating out content gives a DPM over contexts
/// and integrating out context gives a nested-DPM over content. Uses finite
/// categorical H and S so each statistic has a closed form.
MarginalizationReport check_marginalization(const Hyperparameters& hyper, int num_groups,
                                            const std::vector<int>& token_counts,
                                            std::int64_t draws, Rng& rng,
                                            const std::vector<double>& context_base,
                                            const std::vector<double>& content_base);

}  // namespace mcclust
