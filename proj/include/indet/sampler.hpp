#pragma once

// Exact sampling from the indetermination coupling by the three-step
// loaded-dice procedure:
//   1. draw u from mu;
//   2. flip a coin that lands "uniform" with probability (mu_u - mu_min) / mu_u;
//   3. draw v uniformly on the q columns on "uniform", else from the
//      normalized minimal-margin row of the coupling.
//
// Indices are zero-based in the library; the CLI reports them one-based.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "indet/matrix.hpp"

namespace indet {

/// First line plus row increments: pi_+(u,v) = first_line[v] + deltas[rank(u)] / q.
struct IndetDecomposition {
  /// sort_permutation[k] is the original index of the k-th smallest margin entry.
  std::vector<std::size_t> sort_permutation;
  /// Row of the coupling for the smallest margin entry; sums to min(mu).
  std::vector<double> first_line;
  /// mu[sort_permutation[k]] - min(mu), in sorted order; deltas[0] == 0.
  std::vector<double> deltas;

  std::size_t rows() const noexcept { return deltas.size(); }
  std::size_t cols() const noexcept { return first_line.size(); }
};

/// Throws ConditionHViolation when the coupling is not a probability.
IndetDecomposition decompose(const Margin& mu, const Margin& nu);

/// Rebuilds the coupling (original labels) from the decomposition.
Matrix reconstruct(const IndetDecomposition& dec);

/// P(U=u, V=v) implied by the three sampling steps, evaluated from their
/// individual probabilities (margin draw, coin, conditional draw).
Matrix sampling_mixture_probabilities(const IndetDecomposition& dec, const Margin& mu);

struct SampleBatch {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::size_t count() const noexcept { return pairs.size(); }
};

/// Draws n pairs. Identical (dec, mu, n, seed, stream) give identical batches.
SampleBatch draw(const IndetDecomposition& dec, const Margin& mu, std::size_t n, std::uint64_t seed,
                 std::uint64_t stream = 0);

/// Occurrence counts of each (u, v) in the batch.
Matrix histogram(const SampleBatch& batch, std::size_t p, std::size_t q);

/// Counts divided by n. Throws DegenerateInput on an empty batch.
JointDistribution empirical_joint(const SampleBatch& batch, std::size_t p, std::size_t q);

}  // namespace indet
