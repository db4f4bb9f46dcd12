#ifndef NSCV_FFT_HPP
#define NSCV_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace nscv {

// Real 3D FFT on an N^3 lattice (FFTW backend, r2c half storage of size
// N*N*(N/2+1)). Plans use FFTW_ESTIMATE so planning is deterministic; one
// engine per N is cached for the process lifetime.
class SpectralTransform {
 public:
  static const SpectralTransform& get(int n);

  int n() const { return n_; }
  std::size_t real_size() const { return std::size_t(n_) * n_ * n_; }
  std::size_t spec_size() const {
    return std::size_t(n_) * n_ * (n_ / 2 + 1);
  }

  // Unnormalized forward transform.
  void forward(const double* in, std::complex<double>* out) const;
  // Inverse including the 1/N^3 normalization.
  void inverse(const std::complex<double>* in, double* out) const;

  std::size_t spec_idx(int m1, int m2, int m3) const {
    return (std::size_t(m1) * n_ + m2) * (n_ / 2 + 1) + m3;
  }
  // Signed integer mode for storage index m in [0, N).
  int signed_mode(int m) const { return m <= n_ / 2 ? m : m - n_; }

 private:
  explicit SpectralTransform(int n);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;

  struct Impl;
  Impl* impl_;
  int n_;
};

using Spectrum = std::vector<std::complex<double>>;

}  // namespace nscv

#endif
