#include "indet/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "indet/errors.hpp"
#include "indet/kernels.hpp"

namespace indet {
namespace {

// Neumaier compensated summation; validation must not drift with size.
double compensated_sum(std::span<const double> xs) {
  double s = 0.0;
  double c = 0.0;
  for (double x : xs) {
    const double t = s + x;
    c += std::fabs(s) >= std::fabs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidInput("matrix data has " + std::to_string(data_.size()) + " cells, expected " +
                       std::to_string(rows_ * cols_));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidInput("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

std::vector<double> Matrix::row_sums() const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = compensated_sum(row(r));
  return out;
}

std::vector<double> Matrix::col_sums() const {
  std::vector<double> out(cols_, 0.0);
  std::vector<double> comp(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto cells = row(r);
    for (std::size_t c = 0; c < cols_; ++c) {
      const double x = cells[c];
      const double t = out[c] + x;
      comp[c] += std::fabs(out[c]) >= std::fabs(x) ? (out[c] - t) + x : (x - t) + out[c];
      out[c] = t;
    }
  }
  for (std::size_t c = 0; c < cols_; ++c) out[c] += comp[c];
  return out;
}

double Matrix::total() const { return compensated_sum(data_); }

double Matrix::min() const {
  if (data_.empty()) return 0.0;
  return *std::min_element(data_.begin(), data_.end());
}

double Matrix::max_abs() const { return simd::active().max_abs(data_.data(), data_.size()); }

Matrix Matrix::scaled(double factor) const {
  Matrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * factor;
  return out;
}

Matrix Matrix::transposed() const {
  Matrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("matrix shapes differ");
  double m = 0.0;
  const auto x = a.values();
  const auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::fabs(x[i] - y[i]));
  return m;
}

Margin::Margin(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidInput("margin must have at least one entry");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
      std::ostringstream msg;
      msg << "margin entry " << i << " = " << w << " is not a probability";
      throw InvalidInput(msg.str());
    }
  }
  const double s = compensated_sum(weights_);
  if (std::fabs(s - 1.0) > tol::kSumToOne) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "margin sums to " << s << ", expected 1";
    throw InvalidInput(msg.str());
  }
}

Margin Margin::uniform(std::size_t size) {
  if (size == 0) throw InvalidInput("margin must have at least one entry");
  return Margin(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

Margin Margin::normalized(std::vector<double> weights) {
  if (weights.empty()) throw InvalidInput("margin must have at least one entry");
  for (double w : weights)
    if (!std::isfinite(w) || w < 0.0) throw InvalidInput("margin weights must be finite and nonnegative");
  const double s = compensated_sum(weights);
  if (!(s > 0.0)) throw InvalidInput("margin weights sum to zero");
  for (double& w : weights) w /= s;
  return Margin(std::move(weights));
}

double Margin::min() const { return *std::min_element(weights_.begin(), weights_.end()); }

double Margin::max() const { return *std::max_element(weights_.begin(), weights_.end()); }

bool Margin::is_uniform(double tolerance) const {
  const double u = 1.0 / static_cast<double>(weights_.size());
  return std::all_of(weights_.begin(), weights_.end(),
                     [&](double w) { return std::fabs(w - u) <= tolerance; });
}

double Margin::sum_squares() const {
  return simd::active().sum_squares(weights_.data(), weights_.size());
}

namespace {

Matrix validated_cells(Matrix cells) {
  if (cells.rows() == 0 || cells.cols() == 0) throw InvalidInput("joint distribution must be non-empty");
  for (double x : cells.values()) {
    if (!std::isfinite(x) || x < 0.0) {
      std::ostringstream msg;
      msg << "joint distribution has a negative or non-finite cell (" << x << ")";
      throw InvalidInput(msg.str());
    }
  }
  const double s = cells.total();
  if (std::fabs(s - 1.0) > tol::kSumToOne) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "joint distribution sums to " << s << ", expected 1";
    throw InvalidInput(msg.str());
  }
  return cells;
}

std::vector<double> clamp_unit(std::vector<double> xs) {
  for (double& x : xs) x = std::clamp(x, 0.0, 1.0);
  return xs;
}

}  // namespace

JointDistribution::JointDistribution(Matrix cells)
    : cells_(validated_cells(std::move(cells))),
      row_margin_(clamp_unit(cells_.row_sums())),
      col_margin_(clamp_unit(cells_.col_sums())) {}

}  // namespace indet
