#include "indet/sampler.hpp"

#include <algorithm>
#include <numeric>

#include "indet/coupling.hpp"
#include "indet/errors.hpp"
#include "indet/rng.hpp"

namespace indet {
namespace {

/// Inverse-CDF table over nonnegative weights.
class CumulativeTable {
 public:
  explicit CumulativeTable(std::span<const double> weights) : cdf_(weights.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      cdf_[i] = acc;
    }
    total_ = acc;
  }

  std::size_t sample(Rng& rng) const {
    const double x = rng.uniform01() * total_;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), x);
    if (it == cdf_.end()) --it;
    auto idx = static_cast<std::size_t>(it - cdf_.begin());
    // Skip zero-width bins that upper_bound can land on at the top edge.
    while (idx > 0 && cdf_[idx] == cdf_[idx - 1]) --idx;
    return idx;
  }

 private:
  std::vector<double> cdf_;
  double total_ = 0.0;
};

/// Conditional law of V when the coin says "first line".
std::vector<double> first_line_conditional(const IndetDecomposition& dec, const Margin& mu) {
  const double mu_min = mu[dec.sort_permutation.front()];
  const std::size_t q = dec.cols();
  std::vector<double> cond(q);
  if (mu_min > 0.0) {
    for (std::size_t v = 0; v < q; ++v) cond[v] = dec.first_line[v] / mu_min;
  } else {
    // The row is identically zero and never sampled; any law keeps the procedure total.
    std::fill(cond.begin(), cond.end(), 1.0 / static_cast<double>(q));
  }
  return cond;
}

void check_compatible(const IndetDecomposition& dec, const Margin& mu) {
  if (dec.rows() != mu.size() || dec.sort_permutation.size() != mu.size() || dec.cols() == 0)
    throw InvalidInput("decomposition does not match the margin");
}

}  // namespace

IndetDecomposition decompose(const Margin& mu, const Margin& nu) {
  const JointDistribution pi = indetermination_coupling(mu, nu);
  const std::size_t p = mu.size();
  IndetDecomposition dec;
  dec.sort_permutation.resize(p);
  std::iota(dec.sort_permutation.begin(), dec.sort_permutation.end(), std::size_t{0});
  std::stable_sort(dec.sort_permutation.begin(), dec.sort_permutation.end(),
                   [&](std::size_t a, std::size_t b) { return mu[a] < mu[b]; });
  const std::size_t first = dec.sort_permutation.front();
  const auto line = pi.cells().row(first);
  dec.first_line.assign(line.begin(), line.end());
  dec.deltas.resize(p);
  for (std::size_t k = 0; k < p; ++k) dec.deltas[k] = mu[dec.sort_permutation[k]] - mu[first];
  return dec;
}

Matrix reconstruct(const IndetDecomposition& dec) {
  const std::size_t p = dec.rows();
  const std::size_t q = dec.cols();
  Matrix out(p, q);
  for (std::size_t k = 0; k < p; ++k) {
    const std::size_t u = dec.sort_permutation[k];
    const double inc = dec.deltas[k] / static_cast<double>(q);
    for (std::size_t v = 0; v < q; ++v) out(u, v) = dec.first_line[v] + inc;
  }
  return out;
}

Matrix sampling_mixture_probabilities(const IndetDecomposition& dec, const Margin& mu) {
  check_compatible(dec, mu);
  const std::size_t p = dec.rows();
  const std::size_t q = dec.cols();
  const std::vector<double> cond = first_line_conditional(dec, mu);
  Matrix out(p, q);
  for (std::size_t k = 0; k < p; ++k) {
    const std::size_t u = dec.sort_permutation[k];
    const double mass = mu[u];
    if (mass == 0.0) continue;
    const double to_uniform = dec.deltas[k] / mass;
    for (std::size_t v = 0; v < q; ++v)
      out(u, v) = mass * ((1.0 - to_uniform) * cond[v] + to_uniform / static_cast<double>(q));
  }
  return out;
}

SampleBatch draw(const IndetDecomposition& dec, const Margin& mu, std::size_t n, std::uint64_t seed,
                 std::uint64_t stream) {
  check_compatible(dec, mu);
  const std::size_t q = dec.cols();
  std::vector<std::size_t> rank_of(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) rank_of[dec.sort_permutation[k]] = k;

  const CumulativeTable rows(mu.values());
  const std::vector<double> cond = first_line_conditional(dec, mu);
  const CumulativeTable first_line(cond);

  SampleBatch batch;
  batch.seed = seed;
  batch.stream = stream;
  batch.pairs.reserve(n);
  Rng rng(seed, stream);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t u = rows.sample(rng);
    const double to_uniform = dec.deltas[rank_of[u]] / mu[u];
    const bool uniform = rng.uniform01() < to_uniform;
    const std::size_t v = uniform ? static_cast<std::size_t>(rng.below(q)) : first_line.sample(rng);
    batch.pairs.emplace_back(u, v);
  }
  return batch;
}

Matrix histogram(const SampleBatch& batch, std::size_t p, std::size_t q) {
  Matrix counts(p, q);
  for (const auto& [u, v] : batch.pairs) {
    if (u >= p || v >= q) throw InvalidInput("sample index outside the declared table shape");
    counts(u, v) += 1.0;
  }
  return counts;
}

JointDistribution empirical_joint(const SampleBatch& batch, std::size_t p, std::size_t q) {
  if (batch.count() == 0) throw DegenerateInput("empirical joint of an empty batch");
  return JointDistribution(histogram(batch, p, q).scaled(1.0 / static_cast<double>(batch.count())));
}

}  // namespace indet
