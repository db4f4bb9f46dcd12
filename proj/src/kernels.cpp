#include "nscv/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace nscv::kernels {

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

SimdLevel detect() {
  if (const char* env = std::getenv("NSCV_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return SimdLevel::Scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported())
      return SimdLevel::Avx2;
  }
  return avx2_supported() ? SimdLevel::Avx2 : SimdLevel::Scalar;
}

std::atomic<int> g_level{-1};

}  // namespace

SimdLevel active_level() {
  int v = g_level.load(std::memory_order_acquire);
  if (v < 0) {
    SimdLevel d = detect();
    int expected = -1;
    g_level.compare_exchange_strong(expected, int(d));
    v = g_level.load(std::memory_order_acquire);
  }
  return SimdLevel(v);
}

void force_level(SimdLevel level) { g_level.store(int(level)); }

const char* level_name(SimdLevel level) {
  return level == SimdLevel::Avx2 ? "avx2" : "scalar";
}

const KernelSet& active() {
  return active_level() == SimdLevel::Avx2 ? avx2_set() : scalar_set();
}

}  // namespace nscv::kernels
