#pragma once

// Data-parallel inner loops behind the coupling, association and clustering code.
//
// Every kernel has a scalar reference implementation. Vector variants (AVX2 on
// x86-64, NEON on AArch64) are selected once at runtime. Elementwise kernels
// evaluate the same expression tree as the scalar code and therefore produce
// bit-identical output; reductions reassociate and agree to rounding.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace indet::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  // Reductions.
  double (*sum)(const double* x, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// sum (x - y)^2
  double (*sum_sq_diff)(const double* x, const double* y, std::size_t n);
  /// sum (x - e)^2 / e over entries with e > 0
  double (*chi_sq_terms)(const double* x, const double* e, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  /// max_v |(a[v] + b[v+1]) - (b[v] + a[v+1])| for v < n-1; the 2x2 adjacency residual
  /// between consecutive rows a (upper) and b (lower).
  double (*adjacent_residual)(const double* a, const double* b, std::size_t n);
  std::uint64_t (*popcount)(const std::uint64_t* x, std::size_t words);
  std::uint64_t (*popcount_and)(const std::uint64_t* x, const std::uint64_t* y, std::size_t words);

  // Elementwise.
  /// out[v] = (row_term + col[v]) - shift
  void (*add_outer)(double* out, double row_term, const double* col, double shift, std::size_t n);
  /// out[v] = row_term * col[v]
  void (*mul_outer)(double* out, double row_term, const double* col, std::size_t n);
  /// out[v] = (alpha * a[v] - beta * b[v]) + shift
  void (*affine_combine)(double* out, double alpha, const double* a, double beta, const double* b,
                         double shift, std::size_t n);
};

/// Table chosen for this process. INDET_SIMD=scalar|avx2|neon overrides detection.
const KernelTable& active();

/// Table for a specific ISA, or nullptr when it is not compiled in or the CPU lacks it.
const KernelTable* table_for(Isa isa);

/// Every ISA usable on this machine, scalar first.
std::vector<Isa> available();

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();
const KernelTable* neon_table();
}  // namespace detail

}  // namespace indet::simd
