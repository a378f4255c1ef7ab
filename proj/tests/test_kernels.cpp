#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "indet/kernels.hpp"

using namespace indet::simd;

namespace {

std::vector<double> random_doubles(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(gen);
  return v;
}

std::vector<std::uint64_t> random_words(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = gen();
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Lengths straddling every vector width and remainder.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 100, 1023};

class KernelEquivalence : public ::testing::TestWithParam<Isa> {
 protected:
  const KernelTable& ref() const { return detail::scalar_table(); }
  const KernelTable& vec() const { return *table_for(GetParam()); }
};

void expect_close(double expected, double actual, double scale) {
  EXPECT_NEAR(expected, actual, 1e-12 * std::max(1.0, scale));
}

}  // namespace

TEST(Kernels, ScalarIsAlwaysAvailable) {
  const auto isas = available();
  ASSERT_FALSE(isas.empty());
  EXPECT_EQ(isas.front(), Isa::Scalar);
  ASSERT_NE(table_for(Isa::Scalar), nullptr);
  EXPECT_EQ(table_for(Isa::Scalar)->isa, Isa::Scalar);
}

TEST(Kernels, ScalarReferenceValues) {
  const auto& k = detail::scalar_table();
  const double x[] = {1.0, -2.0, 3.0};
  const double y[] = {0.5, 0.5, 1.0};
  EXPECT_EQ(k.sum(x, 3), 2.0);
  EXPECT_EQ(k.sum_squares(x, 3), 14.0);
  EXPECT_EQ(k.dot(x, y, 3), 2.5);
  EXPECT_EQ(k.sum_sq_diff(x, y, 3), 0.25 + 6.25 + 4.0);
  EXPECT_EQ(k.max_abs(x, 3), 3.0);
  const double e[] = {1.0, 0.0, 2.0};
  EXPECT_EQ(k.chi_sq_terms(x, e, 3), 0.0 + 0.5);
  const std::uint64_t w[] = {0xFFu, 0x1u};
  const std::uint64_t m[] = {0x0Fu, 0x1u};
  EXPECT_EQ(k.popcount(w, 2), 9u);
  EXPECT_EQ(k.popcount_and(w, m, 2), 5u);
  const double a[] = {1.0, 2.0, 4.0};
  const double b[] = {1.0, 3.0, 4.0};
  EXPECT_EQ(k.adjacent_residual(a, b, 3), 1.0);
}

TEST_P(KernelEquivalence, Reductions) {
  for (std::size_t n : kLengths) {
    const auto x = random_doubles(n, 11 + n);
    const auto y = random_doubles(n, 97 + n);
    const auto e = random_doubles(n, 5 + n, -0.2, 1.0);  // some nonpositive expectations
    SCOPED_TRACE(n);
    expect_close(ref().sum(x.data(), n), vec().sum(x.data(), n), static_cast<double>(n));
    expect_close(ref().sum_squares(x.data(), n), vec().sum_squares(x.data(), n), static_cast<double>(n));
    expect_close(ref().dot(x.data(), y.data(), n), vec().dot(x.data(), y.data(), n), static_cast<double>(n));
    expect_close(ref().sum_sq_diff(x.data(), y.data(), n), vec().sum_sq_diff(x.data(), y.data(), n),
                 static_cast<double>(n));
    const double chi = ref().chi_sq_terms(x.data(), e.data(), n);
    expect_close(chi, vec().chi_sq_terms(x.data(), e.data(), n), std::abs(chi));
    EXPECT_EQ(ref().max_abs(x.data(), n), vec().max_abs(x.data(), n));
    EXPECT_EQ(ref().adjacent_residual(x.data(), y.data(), n), vec().adjacent_residual(x.data(), y.data(), n));
  }
}

TEST_P(KernelEquivalence, Popcounts) {
  for (std::size_t n : kLengths) {
    const auto x = random_words(n, 3 + n);
    const auto y = random_words(n, 4 + n);
    std::uint64_t expected = 0, expected_and = 0;
    for (std::size_t i = 0; i < n; ++i) {
      expected += static_cast<std::uint64_t>(std::popcount(x[i]));
      expected_and += static_cast<std::uint64_t>(std::popcount(x[i] & y[i]));
    }
    EXPECT_EQ(vec().popcount(x.data(), n), expected) << n;
    EXPECT_EQ(vec().popcount_and(x.data(), y.data(), n), expected_and) << n;
  }
}

TEST_P(KernelEquivalence, ElementwiseIsBitIdentical) {
  for (std::size_t n : kLengths) {
    const auto a = random_doubles(n, 21 + n);
    const auto b = random_doubles(n, 22 + n);
    std::vector<double> r(n), v(n);
    SCOPED_TRACE(n);
    ref().add_outer(r.data(), 0.1, a.data(), 1.0 / 12.0, n);
    vec().add_outer(v.data(), 0.1, a.data(), 1.0 / 12.0, n);
    EXPECT_TRUE(bitwise_equal(r, v));
    ref().mul_outer(r.data(), 1.0 / 3.0, a.data(), n);
    vec().mul_outer(v.data(), 1.0 / 3.0, a.data(), n);
    EXPECT_TRUE(bitwise_equal(r, v));
    ref().affine_combine(r.data(), 0.7, a.data(), 1.0 / 7.0, b.data(), 0.03, n);
    vec().affine_combine(v.data(), 0.7, a.data(), 1.0 / 7.0, b.data(), 0.03, n);
    EXPECT_TRUE(bitwise_equal(r, v));
  }
}

TEST_P(KernelEquivalence, SpecialValues) {
  const std::vector<double> x = {0.0, -0.0, 1e-300, -1e300, 5.0, -7.0, 0.25, 1e-17, 3.0};
  const std::size_t n = x.size();
  EXPECT_EQ(ref().max_abs(x.data(), n), vec().max_abs(x.data(), n));
  std::vector<double> zeros(n, 0.0);
  EXPECT_EQ(vec().chi_sq_terms(x.data(), zeros.data(), n), 0.0);
}

INSTANTIATE_TEST_SUITE_P(AllIsas, KernelEquivalence, ::testing::ValuesIn(available()),
                         [](const ::testing::TestParamInfo<Isa>& info) { return std::string(isa_name(info.param)); });
