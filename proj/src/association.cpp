#include "indet/association.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "indet/coupling.hpp"
#include "indet/errors.hpp"
#include "indet/kernels.hpp"

namespace indet {

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols, std::vector<std::uint64_t> counts)
    : rows_(rows), cols_(cols), counts_(std::move(counts)) {
  if (rows_ == 0 || cols_ == 0) throw InvalidInput("contingency table must be non-empty");
  if (counts_.size() != rows_ * cols_) throw InvalidInput("contingency table has the wrong number of cells");
  for (auto c : counts_) n_ += c;
  if (n_ == 0) throw InvalidInput("contingency table total count must be >= 1");
}

ContingencyTable ContingencyTable::from_matrix(const Matrix& counts) {
  std::vector<std::uint64_t> out;
  out.reserve(counts.size());
  for (double x : counts.values()) {
    if (!(x >= 0.0) || std::floor(x) != x || x > 9.0e15)
      throw InvalidInput("contingency counts must be nonnegative integers");
    out.push_back(static_cast<std::uint64_t>(x));
  }
  return ContingencyTable(counts.rows(), counts.cols(), std::move(out));
}

Matrix ContingencyTable::frequencies() const {
  Matrix out(rows_, cols_);
  const double inv = 1.0 / static_cast<double>(n_);
  auto o = out.values();
  for (std::size_t i = 0; i < counts_.size(); ++i) o[i] = static_cast<double>(counts_[i]) * inv;
  return out;
}

double chi_square(const ContingencyTable& table) {
  const Matrix pi = table.frequencies();
  const std::vector<double> mu = pi.row_sums();
  const std::vector<double> nu = pi.col_sums();
  for (std::size_t u = 0; u < mu.size(); ++u)
    if (mu[u] == 0.0) throw DegenerateInput("row " + std::to_string(u) + " of the table is empty");
  for (std::size_t v = 0; v < nu.size(); ++v)
    if (nu[v] == 0.0) throw DegenerateInput("column " + std::to_string(v) + " of the table is empty");

  const auto& k = simd::active();
  std::vector<double> expected(table.cols());
  double s = 0.0;
  for (std::size_t u = 0; u < table.rows(); ++u) {
    k.mul_outer(expected.data(), mu[u], nu.data(), nu.size());
    s += k.chi_sq_terms(pi.row(u).data(), expected.data(), expected.size());
  }
  return s;
}

JvContingency jv_contingency(const ContingencyTable& table) {
  const Matrix pi = table.frequencies();
  const Margin mu = Margin::normalized(pi.row_sums());
  const Margin nu = Margin::normalized(pi.col_sums());
  const SignedCouplingMatrix ref = indetermination_closed_form(mu, nu);

  JvContingency out;
  out.numerator = simd::active().sum_sq_diff(pi.values().data(), ref.cells.values().data(), pi.size());
  const double p = static_cast<double>(table.rows());
  const double q = static_cast<double>(table.cols());
  out.normalizing = table.rows() > 2 && table.cols() > 2;
  if (out.normalizing) {
    out.denominator = std::sqrt((p - 2.0) / p * (mu.sum_squares() + 1.0)) *
                      std::sqrt((q - 2.0) / q * (nu.sum_squares() + 1.0));
    out.value = out.numerator / out.denominator;
  } else {
    out.value = out.numerator;
  }
  return out;
}

RelationalMatrix::RelationalMatrix(std::size_t n)
    : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

void RelationalMatrix::set(std::size_t i, std::size_t j, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (j % 64);
  auto& w = bits_[i * words_ + j / 64];
  w = value ? (w | mask) : (w & ~mask);
}

std::uint64_t RelationalMatrix::count() const {
  return simd::active().popcount(bits_.data(), bits_.size());
}

RelationalMatrix relational_encode(std::span<const std::size_t> labels) {
  if (labels.empty()) throw InvalidInput("relational encoding needs at least one item");
  const std::size_t n = labels.size();
  RelationalMatrix x(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (labels[i] == labels[j]) x.set(i, j, true);
  return x;
}

double jv_relational(const RelationalMatrix& x, const RelationalMatrix& y, std::size_t p, std::size_t q) {
  if (x.size() != y.size()) throw InvalidInput("relational matrices differ in size");
  if (p == 0 || q == 0) throw InvalidInput("category counts must be >= 1");
  const auto& k = simd::active();
  const double n2 = static_cast<double>(x.size()) * static_cast<double>(x.size());
  const double sx = static_cast<double>(x.count());
  const double sy = static_cast<double>(y.count());
  const double sxy = static_cast<double>(k.popcount_and(x.bits().data(), y.bits().data(), x.bits().size()));
  const double ip = 1.0 / static_cast<double>(p);
  const double iq = 1.0 / static_cast<double>(q);

  // X is 0/1, so X^2 = X and every sum reduces to counts of ones.
  const double cross = sxy - iq * sx - ip * sy + n2 * ip * iq;
  const double xx = sx * (1.0 - 2.0 * ip) + n2 * ip * ip;
  const double yy = sy * (1.0 - 2.0 * iq) + n2 * iq * iq;
  if (!(xx > 0.0) || !(yy > 0.0)) throw DegenerateInput("a centered relational matrix is identically zero");
  return std::clamp(cross / std::sqrt(xx * yy), -1.0, 1.0);
}

std::size_t category_count(std::span<const std::size_t> labels) {
  return std::set<std::size_t>(labels.begin(), labels.end()).size();
}

}  // namespace indet
