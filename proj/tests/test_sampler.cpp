#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "indet/coupling.hpp"
#include "indet/errors.hpp"
#include "indet/sampler.hpp"
#include "oracles.hpp"

using namespace indet;

namespace {

double chi_square_gof(const Matrix& counts, const Matrix& probs, double n) {
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = n * probs.values()[i];
    if (e > 0) stat += (counts.values()[i] - e) * (counts.values()[i] - e) / e;
  }
  return stat;
}

}  // namespace

TEST(Decompose, Example27) {
  const auto dec = decompose(oracle::example27_mu(), oracle::example27_nu());
  ASSERT_EQ(dec.rows(), 4u);
  ASSERT_EQ(dec.cols(), 3u);
  EXPECT_EQ(dec.sort_permutation, (std::vector<std::size_t>{2, 1, 0, 3}));
  const double expected_deltas[] = {0.0, 1.0 / 9, 2.0 / 9, 2.0 / 9};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(dec.deltas[k], expected_deltas[k], 1e-16);
  EXPECT_NEAR(dec.first_line[0], 1.0 / 27, 1e-16);
  EXPECT_NEAR(dec.first_line[1], 2.0 / 27, 1e-16);
  EXPECT_EQ(dec.first_line[2], 0.0);
  EXPECT_LE(max_abs_diff(reconstruct(dec), oracle::example27_cells()), 1e-12);
}

TEST(Decompose, UniformRowMargin) {
  const Margin nu{0.2, 0.3, 0.5};
  const auto dec = decompose(Margin::uniform(4), nu);
  for (double d : dec.deltas) EXPECT_EQ(d, 0.0);
  for (std::size_t v = 0; v < 3; ++v) EXPECT_NEAR(dec.first_line[v], nu[v] / 4, 1e-16);
}

TEST(Decompose, InvariantsOnRandomFeasibleMargins) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t p = 1 + gen() % 7, q = 1 + gen() % 7;
    const auto [mu, nu] = generate_feasible_margins(d(gen), oracle::random_margin(gen, p), oracle::random_margin(gen, q));
    const auto dec = decompose(mu, nu);
    EXPECT_EQ(dec.deltas[0], 0.0);
    double line = 0.0;
    for (double x : dec.first_line) {
      EXPECT_GE(x, 0.0);
      line += x;
    }
    EXPECT_NEAR(line, mu.min(), 1e-12);
    for (std::size_t k = 1; k < p; ++k) EXPECT_GE(dec.deltas[k], dec.deltas[k - 1]);
    const auto plus = indetermination_coupling(mu, nu);
    EXPECT_LE(max_abs_diff(reconstruct(dec), plus.cells()), 1e-12);
    EXPECT_LE(max_abs_diff(sampling_mixture_probabilities(dec, mu), plus.cells()), 1e-12);
  }
  EXPECT_THROW(decompose(Margin{0.9, 0.1}, Margin{0.9, 0.1}), ConditionHViolation);
}

// Total variation between V | U=u and uniform shrinks as mu_u grows.
TEST(Decompose, ConditionalApproachesUniformAsMarginGrows) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t p = 2 + gen() % 5, q = 2 + gen() % 5;
    const auto [mu, nu] = generate_feasible_margins(d(gen), oracle::random_margin(gen, p), oracle::random_margin(gen, q));
    const auto plus = indetermination_coupling(mu, nu);
    const auto dec = decompose(mu, nu);
    double previous = 2.0;
    for (std::size_t k = 0; k < p; ++k) {
      const std::size_t u = dec.sort_permutation[k];
      if (mu[u] == 0.0) continue;
      double tv = 0.0;
      for (std::size_t v = 0; v < q; ++v) tv += std::abs(plus(u, v) / mu[u] - 1.0 / static_cast<double>(q));
      EXPECT_LE(tv, previous + 1e-12);
      previous = tv;
    }
  }
}

TEST(Draw, EmptyAndDeterministic) {
  const auto mu = oracle::example27_mu();
  const auto dec = decompose(mu, oracle::example27_nu());
  EXPECT_EQ(draw(dec, mu, 0, 1).count(), 0u);
  const auto a = draw(dec, mu, 1000, 99);
  const auto b = draw(dec, mu, 1000, 99);
  EXPECT_EQ(a.pairs, b.pairs);
  const auto c = draw(dec, mu, 1000, 99, 1);
  EXPECT_NE(a.pairs, c.pairs);
  for (auto [u, v] : a.pairs) {
    EXPECT_LT(u, 4u);
    EXPECT_LT(v, 3u);
  }
}

TEST(Draw, GoodnessOfFitExample27) {
  const auto mu = oracle::example27_mu();
  const auto dec = decompose(mu, oracle::example27_nu());
  const std::size_t n = 100000;
  const auto batch = draw(dec, mu, n, 20240601);
  const Matrix counts = histogram(batch, 4, 3);
  EXPECT_EQ(counts(2, 2), 0.0);
  EXPECT_EQ(counts.total(), static_cast<double>(n));
  EXPECT_LT(chi_square_gof(counts, oracle::example27_cells(), static_cast<double>(n)), 31.264);
}

TEST(Draw, ConcentrationOfEmpiricalJoint) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t p = 2 + gen() % 4, q = 2 + gen() % 4;
    const auto [mu, nu] = generate_feasible_margins(d(gen), oracle::random_margin(gen, p), oracle::random_margin(gen, q));
    const auto dec = decompose(mu, nu);
    const std::size_t n = 20000;
    const auto emp = empirical_joint(draw(dec, mu, n, gen()), p, q);
    const double bound = 5.0 * std::sqrt(std::log(static_cast<double>(p * q)) / static_cast<double>(n));
    EXPECT_LE(max_abs_diff(emp.cells(), indetermination_coupling(mu, nu).cells()), bound);
  }
}

TEST(Draw, ZeroMinimalMarginUsesUniformConditional) {
  // mu_min = 0 forces nu uniform under condition (H); the zero row is never drawn.
  const Margin mu{0.0, 0.5, 0.5}, nu = Margin::uniform(3);
  const auto dec = decompose(mu, nu);
  const auto batch = draw(dec, mu, 5000, 8);
  for (auto [u, v] : batch.pairs) EXPECT_NE(u, 0u);
}

TEST(EmpiricalJoint, Examples) {
  SampleBatch one;
  one.pairs = {{0, 0}};
  const auto single = empirical_joint(one, 2, 2);
  EXPECT_EQ(single(0, 0), 1.0);
  EXPECT_EQ(single(1, 1), 0.0);
  SampleBatch all;
  all.pairs = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const auto flat = empirical_joint(all, 2, 2);
  for (double x : flat.cells().values()) EXPECT_EQ(x, 0.25);
  EXPECT_THROW(empirical_joint(SampleBatch{}, 2, 2), DegenerateInput);
}
