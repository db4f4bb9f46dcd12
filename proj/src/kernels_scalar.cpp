#include <cmath>
#include <cstddef>

#include "nscv/kernels.hpp"

namespace nscv::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

double sum_abs_pow_scalar(const double* x, std::size_t n, double p,
                          double center) {
  double acc = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      double d = x[i] - center;
      acc += d * d;
    }
  } else if (p == 4.0) {
    for (std::size_t i = 0; i < n; ++i) {
      double d = x[i] - center;
      double d2 = d * d;
      acc += d2 * d2;
    }
  } else if (p == 1.0) {
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i] - center);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      acc += std::pow(std::fabs(x[i] - center), p);
  }
  return acc;
}

void axpby_scalar(double a, const double* x, double b, double* y,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void multiply_scalar(const double* x, const double* y, double* out,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void caxpy_scalar(double wre, double wim, const double* dre, const double* dim,
                  double* out_re, double* out_im, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out_re[i] += wre * dre[i] - wim * dim[i];
    out_im[i] += wre * dim[i] + wim * dre[i];
  }
}

}  // namespace

const KernelSet& scalar_set() {
  static const KernelSet set{sum_scalar,     dot_scalar,      max_abs_scalar,
                             sum_abs_pow_scalar, axpby_scalar, multiply_scalar,
                             caxpy_scalar};
  return set;
}

}  // namespace nscv::kernels
