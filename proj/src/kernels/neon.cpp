// AArch64 Advanced SIMD variants. NEON is mandatory on AArch64, so no runtime probe is needed.
#include "indet/kernels.hpp"

#include <arm_neon.h>

#include <bit>
#include <cmath>

namespace indet::simd::detail {
namespace {

inline double hsum(float64x2_t v) { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }

double sum(const double* x, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
  }
  double s = hsum(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i];
  return s;
}

double sum_squares(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(x + i);
    acc = vaddq_f64(acc, vmulq_f64(a, a));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_sq_diff(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    acc = vaddq_f64(acc, vmulq_f64(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double chi_sq_terms(const double* x, const double* e, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  float64x2_t acc = zero;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ev = vld1q_f64(e + i);
    const uint64x2_t keep = vcgtq_f64(ev, zero);
    const float64x2_t denom = vbslq_f64(keep, ev, one);
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), ev);
    const float64x2_t term = vdivq_f64(vmulq_f64(d, d), denom);
    acc = vaddq_f64(acc, vbslq_f64(keep, term, zero));
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
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
  double r = std::fmax(vgetq_lane_f64(m, 0), vgetq_lane_f64(m, 1));
  for (; i < n; ++i) r = std::fmax(r, std::fabs(x[i]));
  return r;
}

double adjacent_residual(const double* a, const double* b, std::size_t n) {
  if (n < 2) return 0.0;
  const std::size_t pairs = n - 1;
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t v = 0;
  for (; v + 2 <= pairs; v += 2) {
    const float64x2_t r = vsubq_f64(vaddq_f64(vld1q_f64(a + v), vld1q_f64(b + v + 1)),
                                    vaddq_f64(vld1q_f64(b + v), vld1q_f64(a + v + 1)));
    m = vmaxq_f64(m, vabsq_f64(r));
  }
  double out = std::fmax(vgetq_lane_f64(m, 0), vgetq_lane_f64(m, 1));
  for (; v < pairs; ++v) {
    const double r = (a[v] + b[v + 1]) - (b[v] + a[v + 1]);
    out = std::fmax(out, std::fabs(r));
  }
  return out;
}

std::uint64_t popcount(const std::uint64_t* x, std::size_t words) {
  std::uint64_t c = 0;
  std::size_t i = 0;
  for (; i + 2 <= words; i += 2) {
    const uint8x16_t bytes = vcntq_u8(vreinterpretq_u8_u64(vld1q_u64(x + i)));
    c += vaddlvq_u8(bytes);
  }
  for (; i < words; ++i) c += static_cast<std::uint64_t>(std::popcount(x[i]));
  return c;
}

std::uint64_t popcount_and(const std::uint64_t* x, const std::uint64_t* y, std::size_t words) {
  std::uint64_t c = 0;
  std::size_t i = 0;
  for (; i + 2 <= words; i += 2) {
    const uint64x2_t v = vandq_u64(vld1q_u64(x + i), vld1q_u64(y + i));
    c += vaddlvq_u8(vcntq_u8(vreinterpretq_u8_u64(v)));
  }
  for (; i < words; ++i) c += static_cast<std::uint64_t>(std::popcount(x[i] & y[i]));
  return c;
}

void add_outer(double* out, double row_term, const double* col, double shift, std::size_t n) {
  const float64x2_t r = vdupq_n_f64(row_term);
  const float64x2_t s = vdupq_n_f64(shift);
  std::size_t v = 0;
  for (; v + 2 <= n; v += 2) vst1q_f64(out + v, vsubq_f64(vaddq_f64(r, vld1q_f64(col + v)), s));
  for (; v < n; ++v) out[v] = (row_term + col[v]) - shift;
}

void mul_outer(double* out, double row_term, const double* col, std::size_t n) {
  const float64x2_t r = vdupq_n_f64(row_term);
  std::size_t v = 0;
  for (; v + 2 <= n; v += 2) vst1q_f64(out + v, vmulq_f64(r, vld1q_f64(col + v)));
  for (; v < n; ++v) out[v] = row_term * col[v];
}

void affine_combine(double* out, double alpha, const double* a, double beta, const double* b,
                    double shift, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  const float64x2_t vb = vdupq_n_f64(beta);
  const float64x2_t vs = vdupq_n_f64(shift);
  std::size_t v = 0;
  for (; v + 2 <= n; v += 2) {
    const float64x2_t t = vsubq_f64(vmulq_f64(va, vld1q_f64(a + v)), vmulq_f64(vb, vld1q_f64(b + v)));
    vst1q_f64(out + v, vaddq_f64(t, vs));
  }
  for (; v < n; ++v) out[v] = (alpha * a[v] - beta * b[v]) + shift;
}

constexpr KernelTable kTable{
    Isa::Neon, sum,       sum_squares, dot,       sum_sq_diff, chi_sq_terms,   max_abs,
    adjacent_residual,    popcount,    popcount_and, add_outer, mul_outer, affine_combine,
};

}  // namespace

const KernelTable* neon_table() { return &kTable; }

}  // namespace indet::simd::detail
