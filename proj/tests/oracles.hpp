#pragma once

// Independent reference computations for the tests: direct loops in long
// double, brute-force enumerations, and the worked example margins.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "indet/matrix.hpp"

namespace oracle {

inline indet::Margin example27_mu() { return indet::Margin{9.0 / 27, 6.0 / 27, 3.0 / 27, 9.0 / 27}; }
inline indet::Margin example27_nu() { return indet::Margin{9.0 / 27, 13.0 / 27, 5.0 / 27}; }

inline indet::Matrix example27_counts() { return indet::Matrix{{3, 4, 2}, {2, 3, 1}, {1, 2, 0}, {3, 4, 2}}; }

inline indet::Matrix example27_cells() { return example27_counts().scaled(1.0 / 27.0); }

/// Cell formula evaluated term by term in extended precision.
inline long double indet_cell(const indet::Margin& mu, const indet::Margin& nu, std::size_t u, std::size_t v) {
  const long double p = mu.size(), q = nu.size();
  return static_cast<long double>(mu[u]) / q + static_cast<long double>(nu[v]) / p - 1.0L / (p * q);
}

inline long double sum_squares(const indet::Matrix& m) {
  long double s = 0;
  for (double x : m.values()) s += static_cast<long double>(x) * x;
  return s;
}

/// Random probability vector with entries bounded away from zero when `floor` > 0.
inline indet::Margin random_margin(std::mt19937_64& gen, std::size_t n, double floor = 0.0) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> w(n);
  for (auto& x : w) x = floor + d(gen);
  return indet::Margin::normalized(w);
}

/// A random Full-Monge matrix: first row plus per-row constant shifts.
/// With a nonnegative first row summing to m and shifts >= 0, entries stay nonnegative.
inline indet::Matrix random_first_line_matrix(std::mt19937_64& gen, std::size_t p, std::size_t q) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> first(q), delta(p);
  for (auto& x : first) x = d(gen);
  for (auto& x : delta) x = d(gen);
  delta[0] = 0.0;
  indet::Matrix m(p, q);
  double total = 0.0;
  for (std::size_t u = 0; u < p; ++u)
    for (std::size_t v = 0; v < q; ++v) total += m(u, v) = first[v] + delta[u];
  return m.scaled(1.0 / total);
}

}  // namespace oracle
