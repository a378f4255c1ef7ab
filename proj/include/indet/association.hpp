#pragma once

// Association indices on contingency data, read as deviations from a coupling
// of the empirical margins: chi-square (from independence) and Janson-Vegelius
// (from indetermination), plus the relational n x n encoding.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "indet/matrix.hpp"

namespace indet {

class ContingencyTable {
 public:
  ContingencyTable(std::size_t rows, std::size_t cols, std::vector<std::uint64_t> counts);
  /// Accepts nonnegative integral doubles (a matrix read from CSV).
  static ContingencyTable from_matrix(const Matrix& counts);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint64_t n() const noexcept { return n_; }
  std::uint64_t operator()(std::size_t u, std::size_t v) const { return counts_[u * cols_ + v]; }

  /// counts / n, not validated as a JointDistribution (zero rows allowed).
  Matrix frequencies() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_ = 0;
};

/// sum (pi - mu nu)^2 / (mu nu) on frequencies. Throws DegenerateInput on an all-zero row or column.
double chi_square(const ContingencyTable& table);

struct JvContingency {
  /// sum (pi - mu (+) nu)^2
  double numerator = 0.0;
  /// sqrt((p-2)/p (sum mu^2 + 1)) * sqrt((q-2)/q (sum nu^2 + 1)); meaningful only when normalizing.
  double denominator = 0.0;
  /// False when p <= 2 or q <= 2, where the printed normalization is not positive.
  bool normalizing = false;
  /// numerator / denominator when normalizing, else the numerator.
  double value = 0.0;
};

JvContingency jv_contingency(const ContingencyTable& table);

/// Bit-packed symmetric 0/1 matrix with X(i,j) = 1 iff items i and j share a category.
class RelationalMatrix {
 public:
  explicit RelationalMatrix(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool operator()(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U;
  }
  void set(std::size_t i, std::size_t j, bool value);

  std::size_t words_per_row() const noexcept { return words_; }
  std::span<const std::uint64_t> bits() const noexcept { return bits_; }
  /// Number of ones.
  std::uint64_t count() const;

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

RelationalMatrix relational_encode(std::span<const std::size_t> labels);

/// Cosine between X - 1/p and Y - 1/q in the n^2 relational space.
/// Throws DegenerateInput when either centered matrix is identically zero.
double jv_relational(const RelationalMatrix& x, const RelationalMatrix& y, std::size_t p, std::size_t q);

/// Number of distinct values.
std::size_t category_count(std::span<const std::size_t> labels);

}  // namespace indet
