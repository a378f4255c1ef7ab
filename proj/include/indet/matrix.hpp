#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace indet {

/// Tolerances shared by every validating constructor.
namespace tol {
inline constexpr double kSumToOne = 1e-12;
inline constexpr double kMargin = 1e-10;
inline constexpr double kFullMongeRelative = 1e-9;
inline constexpr double kNegativeSlack = 1e-12;
}  // namespace tol

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
  /// Compensated sum of every cell.
  double total() const;
  double min() const;
  double max_abs() const;

  Matrix scaled(double factor) const;
  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Largest |a - b| over all cells. Shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// A discrete probability vector: entries in [0,1] summing to one within tol::kSumToOne.
class Margin {
 public:
  explicit Margin(std::vector<double> weights);
  Margin(std::initializer_list<double> weights) : Margin(std::vector<double>(weights)) {}

  static Margin uniform(std::size_t size);
  /// Rescales nonnegative weights (counts, unnormalized masses) to a probability vector.
  static Margin normalized(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> values() const noexcept { return weights_; }
  double min() const;
  double max() const;
  bool is_uniform(double tolerance = tol::kSumToOne) const;
  double sum_squares() const;

 private:
  std::vector<double> weights_;
};

/// Nonnegative p x q matrix of total mass one, with its margins cached.
class JointDistribution {
 public:
  explicit JointDistribution(Matrix cells);

  const Matrix& cells() const noexcept { return cells_; }
  const Margin& row_margin() const noexcept { return row_margin_; }
  const Margin& col_margin() const noexcept { return col_margin_; }
  std::size_t rows() const noexcept { return cells_.rows(); }
  std::size_t cols() const noexcept { return cells_.cols(); }
  double operator()(std::size_t u, std::size_t v) const { return cells_(u, v); }

 private:
  Matrix cells_;
  Margin row_margin_;
  Margin col_margin_;
};

/// A coupling closed form that may carry negative cells when it is not a probability.
struct SignedCouplingMatrix {
  Matrix cells;
  /// min cell >= -tol::kNegativeSlack
  bool feasible = false;
};

}  // namespace indet
