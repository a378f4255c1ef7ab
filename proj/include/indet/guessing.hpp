#pragma once

// Guessing ("spy") problem: a guesser who observes V = v proposes messages in
// some order until hitting U. Performance is the rho-moment of the number of
// guesses, or the one-shot probability of succeeding at the first try.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "indet/matrix.hpp"

namespace indet {

enum class StrategyRule {
  /// Per observation, guess in decreasing posterior probability (ties by index).
  SortedByPosterior,
  /// Per observation, draw guesses without replacement proportionally to the posterior.
  RandomByPosterior,
  /// Explicit permutation per observation.
  Deterministic,
};

class Strategy {
 public:
  static Strategy sorted_by_posterior() { return Strategy(StrategyRule::SortedByPosterior, {}); }
  static Strategy random_by_posterior() { return Strategy(StrategyRule::RandomByPosterior, {}); }
  /// One order per observed value; each must be a permutation of [0, p).
  static Strategy deterministic(std::vector<std::vector<std::size_t>> orders);

  StrategyRule rule() const noexcept { return rule_; }
  const std::vector<std::vector<std::size_t>>& orders() const noexcept { return orders_; }

 private:
  Strategy(StrategyRule rule, std::vector<std::vector<std::size_t>> orders)
      : rule_(rule), orders_(std::move(orders)) {}
  StrategyRule rule_;
  std::vector<std::vector<std::size_t>> orders_;
};

/// Joint law of (message, observation) and the moment order.
struct GuessingInstance {
  GuessingInstance(JointDistribution joint, double rho);
  JointDistribution pi;
  double rho;
};

bool is_permutation_of_range(std::span<const std::size_t> order);

/// 1-based position of u in the order.
std::size_t gain(std::span<const std::size_t> order, std::size_t u);

/// Indices by decreasing weight, ties by ascending index.
std::vector<std::size_t> optimal_order(std::span<const double> weights);
inline std::vector<std::size_t> optimal_order(const Margin& posterior) { return optimal_order(posterior.values()); }

/// rank(u, k) = P(u is proposed at try k+1) when guesses are drawn without
/// replacement proportionally to `weights`. Exact, O(2^p p); p <= 20.
Matrix random_order_rank_distribution(std::span<const double> weights);

/// E[G(S,U|V)^rho], computed exactly by summation.
double rho_moment(const GuessingInstance& instance, const Strategy& strategy);

/// Seeded Monte-Carlo estimate of rho_moment, for cross-validating the exact path.
double rho_moment_monte_carlo(const GuessingInstance& instance, const Strategy& strategy, std::size_t samples,
                              std::uint64_t seed, std::uint64_t stream = 0);

/// (1 + ln p)^-rho [sum_u mu_u^(1/(1+rho))]^(1+rho)
double lower_bound_original(const Margin& mu, double rho);
/// (1 + ln p)^-rho sum_v [sum_u pi(u,v)^(1/(1+rho))]^(1+rho)
double lower_bound_generalized(const JointDistribution& pi, double rho);

/// Probability that the first guess is right.
double one_shot(const GuessingInstance& instance, const Strategy& strategy);

/// Probability of success within the first k guesses. Natural extension of
/// one_shot (k = 1); not backed by a published bound.
double k_shot(const GuessingInstance& instance, const Strategy& strategy, std::size_t k);

struct OneShotBounds {
  /// ||pi||^2 / max nu
  double lower = 0.0;
  /// ||pi||^2 / min nu over columns with positive mass
  double upper = 0.0;
  /// Zero-mass columns left out of the minimum.
  std::size_t dropped_columns = 0;
};

/// Bounds on the one-shot probability of the RandomByPosterior strategy.
OneShotBounds one_shot_bounds_margin_strategy(const JointDistribution& pi);

/// The coupling that minimizes ||pi||^2 under fixed margins: the indetermination
/// coupling. Throws ConditionHViolation when it is not a probability.
JointDistribution sender_optimal_coupling(const Margin& mu, const Margin& nu);

}  // namespace indet
