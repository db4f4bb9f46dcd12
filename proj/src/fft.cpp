#include "nscv/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

#include "nscv/errors.hpp"

namespace nscv {

struct SpectralTransform::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  double* real_buf = nullptr;
  fftw_complex* spec_buf = nullptr;
  mutable std::mutex exec_mutex;
};

SpectralTransform::SpectralTransform(int n) : n_(n) {
  impl_ = new Impl;
  impl_->real_buf = fftw_alloc_real(real_size());
  impl_->spec_buf = fftw_alloc_complex(spec_size());
  impl_->fwd = fftw_plan_dft_r2c_3d(n, n, n, impl_->real_buf, impl_->spec_buf,
                                    FFTW_ESTIMATE);
  impl_->inv = fftw_plan_dft_c2r_3d(n, n, n, impl_->spec_buf, impl_->real_buf,
                                    FFTW_ESTIMATE);
  if (!impl_->fwd || !impl_->inv)
    throw NumericalError("fft", "FFTW plan creation failed");
}

SpectralTransform::~SpectralTransform() {
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->inv);
  fftw_free(impl_->real_buf);
  fftw_free(impl_->spec_buf);
  delete impl_;
}

const SpectralTransform& SpectralTransform::get(int n) {
  static std::mutex registry_mutex;
  static std::map<int, SpectralTransform*> registry;
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto it = registry.find(n);
  if (it == registry.end())
    it = registry.emplace(n, new SpectralTransform(n)).first;
  return *it->second;
}

void SpectralTransform::forward(const double* in,
                                std::complex<double>* out) const {
  std::lock_guard<std::mutex> lock(impl_->exec_mutex);
  std::memcpy(impl_->real_buf, in, real_size() * sizeof(double));
  fftw_execute(impl_->fwd);
  std::memcpy(out, impl_->spec_buf, spec_size() * sizeof(fftw_complex));
}

void SpectralTransform::inverse(const std::complex<double>* in,
                                double* out) const {
  std::lock_guard<std::mutex> lock(impl_->exec_mutex);
  std::memcpy(impl_->spec_buf, in, spec_size() * sizeof(fftw_complex));
  fftw_execute(impl_->inv);
  const double scale = 1.0 / double(real_size());
  for (std::size_t i = 0; i < real_size(); ++i)
    out[i] = impl_->real_buf[i] * scale;
}

}  // namespace nscv
