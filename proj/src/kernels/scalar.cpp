#include "indet/kernels.hpp"

#include <bit>
#include <cmath>

namespace indet::simd::detail {
namespace {

double sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double sum_squares(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_sq_diff(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double chi_sq_terms(const double* x, const double* e, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (e[i] > 0.0) {
      const double d = x[i] - e[i];
      s += d * d / e[i];
    }
  }
  return s;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
  return m;
}

double adjacent_residual(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t v = 0; v + 1 < n; ++v) {
    const double r = (a[v] + b[v + 1]) - (b[v] + a[v + 1]);
    m = std::fmax(m, std::fabs(r));
  }
  return m;
}

std::uint64_t popcount(const std::uint64_t* x, std::size_t words) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < words; ++i) c += static_cast<std::uint64_t>(std::popcount(x[i]));
  return c;
}

std::uint64_t popcount_and(const std::uint64_t* x, const std::uint64_t* y, std::size_t words) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < words; ++i) c += static_cast<std::uint64_t>(std::popcount(x[i] & y[i]));
  return c;
}

void add_outer(double* out, double row_term, const double* col, double shift, std::size_t n) {
  for (std::size_t v = 0; v < n; ++v) out[v] = (row_term + col[v]) - shift;
}

void mul_outer(double* out, double row_term, const double* col, std::size_t n) {
  for (std::size_t v = 0; v < n; ++v) out[v] = row_term * col[v];
}

void affine_combine(double* out, double alpha, const double* a, double beta, const double* b,
                    double shift, std::size_t n) {
  for (std::size_t v = 0; v < n; ++v) out[v] = (alpha * a[v] - beta * b[v]) + shift;
}

constexpr KernelTable kTable{
    Isa::Scalar, sum,       sum_squares, dot,       sum_sq_diff, chi_sq_terms,   max_abs,
    adjacent_residual,      popcount,    popcount_and, add_outer, mul_outer, affine_combine,
};

}  // namespace

const KernelTable& scalar_table() { return kTable; }

}  // namespace indet::simd::detail
