#ifndef NSCV_KERNELS_HPP
#define NSCV_KERNELS_HPP

#include <cstddef>

// Hot arithmetic loops used by the field, norm and resampling code. Every
// kernel exists in a scalar reference form and an AVX2 form; the active set
// is chosen once at startup (CPU detection, overridable via the NSCV_SIMD
// environment variable or force_level). For a fixed level the reduction
// order is fixed, so results are bitwise reproducible run to run.
namespace nscv::kernels {

enum class SimdLevel { Scalar, Avx2 };

SimdLevel active_level();
void force_level(SimdLevel level);
const char* level_name(SimdLevel level);
bool avx2_supported();

struct KernelSet {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  // sum_i |x_i - center|^p; p = 1, 2, 4 take fast paths.
  double (*sum_abs_pow)(const double*, std::size_t, double p, double center);
  // y <- a*x + b*y
  void (*axpby)(double a, const double*, double b, double*, std::size_t);
  void (*multiply)(const double*, const double*, double*, std::size_t);
  // (out_re, out_im) += (wre + i*wim) * (dre + i*dim), elementwise.
  void (*caxpy)(double wre, double wim, const double* dre, const double* dim,
                double* out_re, double* out_im, std::size_t);
};

const KernelSet& active();
const KernelSet& scalar_set();
const KernelSet& avx2_set();

inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline double max_abs(const double* x, std::size_t n) {
  return active().max_abs(x, n);
}
inline double sum_abs_pow(const double* x, std::size_t n, double p,
                          double center) {
  return active().sum_abs_pow(x, n, p, center);
}
inline void axpby(double a, const double* x, double b, double* y,
                  std::size_t n) {
  active().axpby(a, x, b, y, n);
}
inline void multiply(const double* x, const double* y, double* out,
                     std::size_t n) {
  active().multiply(x, y, out, n);
}
inline void caxpy(double wre, double wim, const double* dre, const double* dim,
                  double* out_re, double* out_im, std::size_t n) {
  active().caxpy(wre, wim, dre, dim, out_re, out_im, n);
}

}  // namespace nscv::kernels

#endif
