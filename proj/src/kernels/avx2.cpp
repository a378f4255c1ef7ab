// Compiled with -mavx2; only reached after a runtime CPU check.
#include "indet/kernels.hpp"

#include <immintrin.h>

#include <bit>
#include <cmath>

namespace indet::simd::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  alignas(32) double buf[4];
  _mm256_store_pd(buf, v);
  return std::fmax(std::fmax(buf[0], buf[1]), std::fmax(buf[2], buf[3]));
}

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

double sum(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i];
  return s;
}

double sum_squares(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a = _mm256_loadu_pd(x + i);
    const __m256d b = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(a, a));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(b, b));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(x + i);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(a, a));
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_sq_diff(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double chi_sq_terms(const double* x, const double* e, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ev = _mm256_loadu_pd(e + i);
    const __m256d keep = _mm256_cmp_pd(ev, zero, _CMP_GT_OQ);
    // Masked lanes divide by one and are then zeroed.
    const __m256d denom = _mm256_blendv_pd(one, ev, keep);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), ev);
    const __m256d term = _mm256_div_pd(_mm256_mul_pd(d, d), denom);
    acc = _mm256_add_pd(acc, _mm256_and_pd(term, keep));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    if (e[i] > 0.0) {
      const double d = x[i] - e[i];
      s += d * d / e[i];
    }
  }
  return s;
}

double max_abs(const double* x, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, abs_pd(_mm256_loadu_pd(x + i)));
  double r = hmax(m);
  for (; i < n; ++i) r = std::fmax(r, std::fabs(x[i]));
  return r;
}

double adjacent_residual(const double* a, const double* b, std::size_t n) {
  if (n < 2) return 0.0;
  const std::size_t pairs = n - 1;
  __m256d m = _mm256_setzero_pd();
  std::size_t v = 0;
  for (; v + 4 <= pairs; v += 4) {
    const __m256d a0 = _mm256_loadu_pd(a + v);
    const __m256d a1 = _mm256_loadu_pd(a + v + 1);
    const __m256d b0 = _mm256_loadu_pd(b + v);
    const __m256d b1 = _mm256_loadu_pd(b + v + 1);
    const __m256d r = _mm256_sub_pd(_mm256_add_pd(a0, b1), _mm256_add_pd(b0, a1));
    m = _mm256_max_pd(m, abs_pd(r));
  }
  double out = hmax(m);
  for (; v < pairs; ++v) {
    const double r = (a[v] + b[v + 1]) - (b[v] + a[v + 1]);
    out = std::fmax(out, std::fabs(r));
  }
  return out;
}

// Nibble-lookup population count over 256-bit lanes.
inline __m256i popcount_bytes(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
}

inline std::uint64_t hsum_epi64(__m256i v) {
  alignas(32) std::uint64_t buf[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(buf), v);
  return buf[0] + buf[1] + buf[2] + buf[3];
}

std::uint64_t popcount(const std::uint64_t* x, std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(v), _mm256_setzero_si256()));
  }
  std::uint64_t c = hsum_epi64(acc);
  for (; i < words; ++i) c += static_cast<std::uint64_t>(std::popcount(x[i]));
  return c;
}

std::uint64_t popcount_and(const std::uint64_t* x, const std::uint64_t* y, std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i v = _mm256_and_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i)),
                                       _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y + i)));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(v), _mm256_setzero_si256()));
  }
  std::uint64_t c = hsum_epi64(acc);
  for (; i < words; ++i) c += static_cast<std::uint64_t>(std::popcount(x[i] & y[i]));
  return c;
}

void add_outer(double* out, double row_term, const double* col, double shift, std::size_t n) {
  const __m256d r = _mm256_set1_pd(row_term);
  const __m256d s = _mm256_set1_pd(shift);
  std::size_t v = 0;
  for (; v + 4 <= n; v += 4)
    _mm256_storeu_pd(out + v, _mm256_sub_pd(_mm256_add_pd(r, _mm256_loadu_pd(col + v)), s));
  for (; v < n; ++v) out[v] = (row_term + col[v]) - shift;
}

void mul_outer(double* out, double row_term, const double* col, std::size_t n) {
  const __m256d r = _mm256_set1_pd(row_term);
  std::size_t v = 0;
  for (; v + 4 <= n; v += 4) _mm256_storeu_pd(out + v, _mm256_mul_pd(r, _mm256_loadu_pd(col + v)));
  for (; v < n; ++v) out[v] = row_term * col[v];
}

void affine_combine(double* out, double alpha, const double* a, double beta, const double* b,
                    double shift, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  const __m256d vs = _mm256_set1_pd(shift);
  std::size_t v = 0;
  for (; v + 4 <= n; v += 4) {
    const __m256d t = _mm256_sub_pd(_mm256_mul_pd(va, _mm256_loadu_pd(a + v)),
                                    _mm256_mul_pd(vb, _mm256_loadu_pd(b + v)));
    _mm256_storeu_pd(out + v, _mm256_add_pd(t, vs));
  }
  for (; v < n; ++v) out[v] = (alpha * a[v] - beta * b[v]) + shift;
}

constexpr KernelTable kTable{
    Isa::Avx2, sum,       sum_squares, dot,       sum_sq_diff, chi_sq_terms,   max_abs,
    adjacent_residual,    popcount,    popcount_and, add_outer, mul_outer, affine_combine,
};

}  // namespace

const KernelTable* avx2_table() { return &kTable; }

}  // namespace indet::simd::detail
