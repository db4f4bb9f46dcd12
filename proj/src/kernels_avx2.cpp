// AVX2/FMA variants of the hot loops. This file is compiled with -mavx2
// -mfma; nothing here runs unless the dispatcher saw AVX2 in CPUID. The
// general-exponent branch of sum_abs_pow stays scalar (libm pow); the p=1,2,4
// fast paths are the ones the norm code hits.

#include <cmath>
#include <cstddef>

#include "nscv/kernels.hpp"

#if !defined(NSCV_NO_AVX2)
#include <immintrin.h>

namespace nscv::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

const __m256d kAbsMask =
    _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i];
  return hsum(acc) + tail;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * y[i];
  return hsum(acc) + tail;
}

double max_abs_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), kAbsMask));
  double m = hmax(acc);
  for (; i < n; ++i) {
    double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

double sum_abs_pow_avx2(const double* x, std::size_t n, double p,
                        double center) {
  std::size_t i = 0;
  double tail = 0.0;
  if (p == 2.0) {
    __m256d acc = _mm256_setzero_pd();
    __m256d c = _mm256_set1_pd(center);
    for (; i + 4 <= n; i += 4) {
      __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
      acc = _mm256_fmadd_pd(d, d, acc);
    }
    for (; i < n; ++i) {
      double d = x[i] - center;
      tail += d * d;
    }
    return hsum(acc) + tail;
  }
  if (p == 4.0) {
    __m256d acc = _mm256_setzero_pd();
    __m256d c = _mm256_set1_pd(center);
    for (; i + 4 <= n; i += 4) {
      __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
      __m256d d2 = _mm256_mul_pd(d, d);
      acc = _mm256_fmadd_pd(d2, d2, acc);
    }
    for (; i < n; ++i) {
      double d = x[i] - center;
      double d2 = d * d;
      tail += d2 * d2;
    }
    return hsum(acc) + tail;
  }
  if (p == 1.0) {
    __m256d acc = _mm256_setzero_pd();
    __m256d c = _mm256_set1_pd(center);
    for (; i + 4 <= n; i += 4) {
      __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
      acc = _mm256_add_pd(acc, _mm256_and_pd(d, kAbsMask));
    }
    for (; i < n; ++i) tail += std::fabs(x[i] - center);
    return hsum(acc) + tail;
  }
  double acc = 0.0;
  for (; i < n; ++i) acc += std::pow(std::fabs(x[i] - center), p);
  return acc;
}

void axpby_avx2(double a, const double* x, double b, double* y,
                std::size_t n) {
  __m256d va = _mm256_set1_pd(a);
  __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), r);
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void multiply_avx2(const double* x, const double* y, double* out,
                   std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void caxpy_avx2(double wre, double wim, const double* dre, const double* dim,
                double* out_re, double* out_im, std::size_t n) {
  __m256d vre = _mm256_set1_pd(wre);
  __m256d vim = _mm256_set1_pd(wim);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d dr = _mm256_loadu_pd(dre + i);
    __m256d di = _mm256_loadu_pd(dim + i);
    __m256d orr = _mm256_loadu_pd(out_re + i);
    __m256d oii = _mm256_loadu_pd(out_im + i);
    orr = _mm256_fmadd_pd(vre, dr, orr);
    orr = _mm256_fnmadd_pd(vim, di, orr);
    oii = _mm256_fmadd_pd(vre, di, oii);
    oii = _mm256_fmadd_pd(vim, dr, oii);
    _mm256_storeu_pd(out_re + i, orr);
    _mm256_storeu_pd(out_im + i, oii);
  }
  for (; i < n; ++i) {
    out_re[i] += wre * dre[i] - wim * dim[i];
    out_im[i] += wre * dim[i] + wim * dre[i];
  }
}

}  // namespace

const KernelSet& avx2_set() {
  static const KernelSet set{sum_avx2,     dot_avx2,      max_abs_avx2,
                             sum_abs_pow_avx2, axpby_avx2, multiply_avx2,
                             caxpy_avx2};
  return set;
}

}  // namespace nscv::kernels

#else  // NSCV_NO_AVX2

namespace nscv::kernels {
const KernelSet& avx2_set() { return scalar_set(); }
}  // namespace nscv::kernels

#endif
