#include <gtest/gtest.h>

#include "indet/errors.hpp"
#include "indet/matrix.hpp"

using namespace indet;

TEST(Matrix, ShapeAndAccess) {
  Matrix m{{1, 2, 3}, {4, 5, 6}};
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m(1, 2), 6.0);
  EXPECT_EQ(m.row_sums(), (std::vector<double>{6, 15}));
  EXPECT_EQ(m.col_sums(), (std::vector<double>{5, 7, 9}));
  EXPECT_EQ(m.total(), 21.0);
  EXPECT_EQ(m.transposed()(2, 1), 6.0);
  EXPECT_EQ(m.max_abs(), 6.0);
  EXPECT_THROW((Matrix{{1, 2}, {3}}), InvalidInput);
  EXPECT_THROW(Matrix(2, 2, std::vector<double>{1, 2, 3}), InvalidInput);
}

TEST(Matrix, CompensatedTotal) {
  std::vector<double> v(1000, 0.1);
  v.push_back(1e16);
  v.push_back(-1e16);
  Matrix m(1, v.size(), v);
  EXPECT_NEAR(m.total(), 100.0, 1e-9);
}

TEST(Margin, Validation) {
  EXPECT_NO_THROW((Margin{0.5, 0.5}));
  EXPECT_THROW((Margin{0.5, 0.6}), InvalidInput);
  EXPECT_THROW((Margin{1.5, -0.5}), InvalidInput);
  EXPECT_THROW(Margin(std::vector<double>{}), InvalidInput);
  EXPECT_NO_THROW((Margin{0.5, 0.5 + 5e-13}));
  EXPECT_TRUE(Margin::uniform(4).is_uniform());
  EXPECT_FALSE((Margin{0.25, 0.75}).is_uniform());
  const Margin m = Margin::normalized({1, 3});
  EXPECT_EQ(m[1], 0.75);
  EXPECT_THROW(Margin::normalized({0, 0}), InvalidInput);
  EXPECT_THROW(Margin::normalized({1, -1, 2}), InvalidInput);
}

TEST(JointDistribution, MarginsAndValidation) {
  JointDistribution pi(Matrix{{0.1, 0.2}, {0.3, 0.4}});
  EXPECT_NEAR(pi.row_margin()[0], 0.3, 1e-15);
  EXPECT_NEAR(pi.col_margin()[1], 0.6, 1e-15);
  EXPECT_THROW(JointDistribution(Matrix{{0.5, 0.6}, {0.0, -0.1}}), InvalidInput);
  EXPECT_THROW(JointDistribution(Matrix{{0.5, 0.6}}), InvalidInput);
}
