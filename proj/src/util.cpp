#include "nscv/util.hpp"

#include <atomic>
#include <thread>

namespace nscv {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count() {
  unsigned n = g_threads.load();
  if (n == 0) {
    n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
  }
  return n;
}

void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  unsigned workers = thread_count();
  if (workers <= 1 || count < 2) {
    body(0, count);
    return;
  }
  // Chunk size derived from count alone; workers race for chunks but each
  // chunk's work is self-contained.
  std::size_t chunk = (count + 4 * workers - 1) / (4 * workers);
  if (chunk == 0) chunk = 1;
  std::atomic<std::size_t> next{0};
  auto run = [&]() {
    for (;;) {
      std::size_t b = next.fetch_add(chunk);
      if (b >= count) break;
      std::size_t e = b + chunk < count ? b + chunk : count;
      body(b, e);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned i = 0; i + 1 < workers; ++i) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

}  // namespace nscv
