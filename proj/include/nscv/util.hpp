#ifndef NSCV_UTIL_HPP
#define NSCV_UTIL_HPP

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nscv {

// Shortest round-trip decimal form of a double. Used for all CSV/JSON output
// so that identical runs produce byte-identical files.
std::string format_double(double v);

// Requested worker count for data-parallel loops. 0 = auto.
void set_thread_count(unsigned n);
unsigned thread_count();

// Splits [0, count) into fixed-size chunks and runs body(chunk_begin,
// chunk_end) on a small worker pool. Chunk boundaries depend only on `count`,
// never on the worker count, so any chunk-ordered reduction done by the
// caller is reproducible across thread settings.
void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& body);

// splitmix64: tiny deterministic generator for test-data seeding.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [-1, 1).
  double next_signed() {
    return 2.0 * (double(next() >> 11) * 0x1.0p-53) - 1.0;
  }

 private:
  std::uint64_t state_;
};

}  // namespace nscv

#endif
