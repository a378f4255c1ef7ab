#include "indet/guessing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "indet/coupling.hpp"
#include "indet/errors.hpp"
#include "indet/rng.hpp"

namespace indet {
namespace {

constexpr std::size_t kMaxExactRandomOrder = 20;

std::vector<double> column(const Matrix& m, std::size_t v) {
  std::vector<double> out(m.rows());
  for (std::size_t u = 0; u < m.rows(); ++u) out[u] = m(u, v);
  return out;
}

void check_strategy_shape(const Strategy& s, std::size_t p, std::size_t q) {
  if (s.rule() != StrategyRule::Deterministic) return;
  if (s.orders().size() != q) throw InvalidInput("deterministic strategy needs one order per observed value");
  for (const auto& order : s.orders())
    if (order.size() != p) throw InvalidInput("deterministic order length differs from the message alphabet");
}

std::vector<std::size_t> order_for(const Strategy& s, const std::vector<double>& col, std::size_t v) {
  if (s.rule() == StrategyRule::Deterministic) return s.orders()[v];
  return optimal_order(col);
}

double rank_power(std::size_t rank, double rho) { return std::pow(static_cast<double>(rank), rho); }

}  // namespace

Strategy Strategy::deterministic(std::vector<std::vector<std::size_t>> orders) {
  for (const auto& order : orders)
    if (!is_permutation_of_range(order)) throw InvalidInput("strategy order is not a permutation");
  return Strategy(StrategyRule::Deterministic, std::move(orders));
}

GuessingInstance::GuessingInstance(JointDistribution joint, double r) : pi(std::move(joint)), rho(r) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidInput("rho must be a positive real");
}

bool is_permutation_of_range(std::span<const std::size_t> order) {
  std::vector<bool> seen(order.size(), false);
  for (std::size_t x : order) {
    if (x >= order.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

std::size_t gain(std::span<const std::size_t> order, std::size_t u) {
  const auto it = std::find(order.begin(), order.end(), u);
  if (it == order.end()) throw InvalidInput("message is not in the order");
  return static_cast<std::size_t>(it - order.begin()) + 1;
}

std::vector<std::size_t> optimal_order(std::span<const double> weights) {
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  return order;
}

Matrix random_order_rank_distribution(std::span<const double> weights) {
  const std::size_t p = weights.size();
  if (p == 0) throw InvalidInput("empty weight vector");
  if (p > kMaxExactRandomOrder)
    throw SizeExceeded("exact random-order ranks limited to p <= 20; use the Monte-Carlo estimate");
  for (double w : weights)
    if (!(w >= 0.0)) throw InvalidInput("weights must be nonnegative");

  const std::size_t full = (std::size_t{1} << p) - 1;
  std::vector<double> mass(full + 1, 0.0);  // sum of weights in the subset
  for (std::size_t m = 1; m <= full; ++m)
    mass[m] = mass[m & (m - 1)] + weights[static_cast<std::size_t>(std::countr_zero(m))];

  std::vector<double> reach(full + 1, 0.0);  // P(first |m| guesses are exactly m)
  reach[0] = 1.0;
  Matrix rank(p, p);
  for (std::size_t m = 0; m < full; ++m) {
    if (reach[m] == 0.0) continue;
    const std::size_t taken = static_cast<std::size_t>(std::popcount(m));
    const double remaining = mass[full & ~m];
    for (std::size_t j = 0; j < p; ++j) {
      const std::size_t bit = std::size_t{1} << j;
      if (m & bit) continue;
      const double pick = remaining > 0.0 ? weights[j] / remaining : 1.0 / static_cast<double>(p - taken);
      if (pick == 0.0) continue;
      const double pr = reach[m] * pick;
      rank(j, taken) += pr;
      reach[m | bit] += pr;
    }
  }
  return rank;
}

double rho_moment(const GuessingInstance& instance, const Strategy& strategy) {
  const Matrix& pi = instance.pi.cells();
  const std::size_t p = pi.rows();
  const std::size_t q = pi.cols();
  check_strategy_shape(strategy, p, q);
  const auto& nu = instance.pi.col_margin();

  double total = 0.0;
  for (std::size_t v = 0; v < q; ++v) {
    if (nu[v] == 0.0) continue;
    const std::vector<double> col = column(pi, v);
    if (strategy.rule() == StrategyRule::RandomByPosterior) {
      const Matrix rank = random_order_rank_distribution(col);
      for (std::size_t u = 0; u < p; ++u) {
        if (col[u] == 0.0) continue;
        double e = 0.0;
        for (std::size_t k = 0; k < p; ++k) e += rank(u, k) * rank_power(k + 1, instance.rho);
        total += col[u] * e;
      }
    } else {
      const auto order = order_for(strategy, col, v);
      for (std::size_t i = 0; i < p; ++i) total += col[order[i]] * rank_power(i + 1, instance.rho);
    }
  }
  return total;
}

double rho_moment_monte_carlo(const GuessingInstance& instance, const Strategy& strategy, std::size_t samples,
                              std::uint64_t seed, std::uint64_t stream) {
  if (samples == 0) throw InvalidInput("Monte-Carlo estimate needs at least one sample");
  const Matrix& pi = instance.pi.cells();
  const std::size_t p = pi.rows();
  const std::size_t q = pi.cols();
  check_strategy_shape(strategy, p, q);

  std::vector<double> cdf(pi.size());
  std::partial_sum(pi.values().begin(), pi.values().end(), cdf.begin());
  std::vector<std::vector<std::size_t>> fixed(q);
  std::vector<std::vector<double>> cols(q);
  for (std::size_t v = 0; v < q; ++v) {
    cols[v] = column(pi, v);
    if (strategy.rule() != StrategyRule::RandomByPosterior) fixed[v] = order_for(strategy, cols[v], v);
  }

  Rng rng(seed, stream);
  double acc = 0.0;
  std::vector<double> remaining;
  for (std::size_t s = 0; s < samples; ++s) {
    const double x = rng.uniform01() * cdf.back();
    auto cell = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
    cell = std::min(cell, cdf.size() - 1);
    const std::size_t u = cell / q;
    const std::size_t v = cell % q;
    std::size_t rank = 0;
    if (strategy.rule() == StrategyRule::RandomByPosterior) {
      remaining = cols[v];
      for (rank = 1;; ++rank) {
        const double total = std::accumulate(remaining.begin(), remaining.end(), 0.0);
        const double y = rng.uniform01() * total;
        std::size_t pick = p;
        std::size_t last = p;
        double run = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
          if (remaining[j] <= 0.0) continue;
          run += remaining[j];
          last = j;
          if (y < run) {
            pick = j;
            break;
          }
        }
        if (pick == p) pick = last;
        if (pick == u) break;
        remaining[pick] = 0.0;
      }
    } else {
      rank = gain(fixed[v], u);
    }
    acc += rank_power(rank, instance.rho);
  }
  return acc / static_cast<double>(samples);
}

double lower_bound_original(const Margin& mu, double rho) {
  if (!(rho > 0.0)) throw InvalidInput("rho must be positive");
  double s = 0.0;
  for (double m : mu.values()) s += std::pow(m, 1.0 / (1.0 + rho));
  return std::pow(1.0 + std::log(static_cast<double>(mu.size())), -rho) * std::pow(s, 1.0 + rho);
}

double lower_bound_generalized(const JointDistribution& pi, double rho) {
  if (!(rho > 0.0)) throw InvalidInput("rho must be positive");
  double total = 0.0;
  for (std::size_t v = 0; v < pi.cols(); ++v) {
    double s = 0.0;
    for (std::size_t u = 0; u < pi.rows(); ++u) s += std::pow(pi(u, v), 1.0 / (1.0 + rho));
    total += std::pow(s, 1.0 + rho);
  }
  return std::pow(1.0 + std::log(static_cast<double>(pi.rows())), -rho) * total;
}

double one_shot(const GuessingInstance& instance, const Strategy& strategy) { return k_shot(instance, strategy, 1); }

double k_shot(const GuessingInstance& instance, const Strategy& strategy, std::size_t k) {
  const Matrix& pi = instance.pi.cells();
  const std::size_t p = pi.rows();
  const std::size_t q = pi.cols();
  check_strategy_shape(strategy, p, q);
  const auto& nu = instance.pi.col_margin();
  if (k == 0) return 0.0;
  k = std::min(k, p);

  // Success mass is divided by the column mass summed in the same order, so a
  // certain guess (posterior 1 everywhere) scores exactly 1.
  double total = 0.0;
  double mass = 0.0;
  for (std::size_t v = 0; v < q; ++v) {
    if (nu[v] == 0.0) continue;
    mass += nu[v];
    const std::vector<double> col = column(pi, v);
    if (strategy.rule() == StrategyRule::RandomByPosterior) {
      if (k == 1) {
        // First pick is the posterior itself: nu_v * sum_u (pi(u,v) / nu_v)^2.
        double s = 0.0;
        for (double x : col) s += (x / nu[v]) * (x / nu[v]);
        total += nu[v] * s;
      } else {
        const Matrix rank = random_order_rank_distribution(col);
        for (std::size_t u = 0; u < p; ++u)
          for (std::size_t r = 0; r < k; ++r) total += col[u] * rank(u, r);
      }
    } else {
      const auto order = order_for(strategy, col, v);
      for (std::size_t i = 0; i < k; ++i) total += col[order[i]];
    }
  }
  return total / mass;
}

OneShotBounds one_shot_bounds_margin_strategy(const JointDistribution& pi) {
  const auto& nu = pi.col_margin();
  double lo = 0.0;
  double hi = 0.0;
  OneShotBounds out;
  for (double x : nu.values()) {
    if (x == 0.0) {
      ++out.dropped_columns;
      continue;
    }
    lo = std::max(lo, x);
    hi = hi == 0.0 ? x : std::min(hi, x);
  }
  const double norm2 = couple_matching_probability(pi);
  out.lower = norm2 / lo;
  out.upper = norm2 / hi;
  return out;
}

JointDistribution sender_optimal_coupling(const Margin& mu, const Margin& nu) {
  return indetermination_coupling(mu, nu);
}

}  // namespace indet
