#include <doctest.h>

#include <cmath>
#include <vector>

#include "nscv/kernels.hpp"
#include "nscv/util.hpp"

using namespace nscv;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = 3.0 * rng.next_signed();
  return v;
}

}  // namespace

TEST_CASE("scalar and avx2 kernel sets agree") {
  const auto& sc = kernels::scalar_set();
  const auto& vx = kernels::avx2_set();
  if (!kernels::avx2_supported()) return;  // nothing to compare against

  for (std::size_t n : {std::size_t(1), std::size_t(7), std::size_t(64),
                        std::size_t(1023), std::size_t(4096)}) {
    auto a = random_vec(n, 11 * n + 1);
    auto b = random_vec(n, 17 * n + 3);
    double tol = 1e-13 * double(n + 1);

    CHECK(std::fabs(sc.sum(a.data(), n) - vx.sum(a.data(), n)) <= tol);
    CHECK(std::fabs(sc.dot(a.data(), b.data(), n) -
                    vx.dot(a.data(), b.data(), n)) <= 10 * tol);
    CHECK(sc.max_abs(a.data(), n) == vx.max_abs(a.data(), n));
    for (double p : {1.0, 2.0, 4.0, 3.5}) {
      double s = sc.sum_abs_pow(a.data(), n, p, 0.25);
      double v = vx.sum_abs_pow(a.data(), n, p, 0.25);
      CHECK(std::fabs(s - v) <= 1e-12 * double(n + 1) * (1.0 + s));
    }

    auto y1 = b, y2 = b;
    sc.axpby(1.5, a.data(), -0.5, y1.data(), n);
    vx.axpby(1.5, a.data(), -0.5, y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]));

    std::vector<double> m1(n), m2(n);
    sc.multiply(a.data(), b.data(), m1.data(), n);
    vx.multiply(a.data(), b.data(), m2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(m1[i] == m2[i]);

    std::vector<double> re1(n, 0.1), im1(n, -0.2), re2(n, 0.1), im2(n, -0.2);
    sc.caxpy(0.7, -1.3, a.data(), b.data(), re1.data(), im1.data(), n);
    vx.caxpy(0.7, -1.3, a.data(), b.data(), re2.data(), im2.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(re1[i] == doctest::Approx(re2[i]).epsilon(1e-14));
      CHECK(im1[i] == doctest::Approx(im2[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("kernels are deterministic per level") {
  auto a = random_vec(777, 99);
  const auto& act = kernels::active();
  double s1 = act.sum(a.data(), a.size());
  double s2 = act.sum(a.data(), a.size());
  CHECK(s1 == s2);
  double p1 = act.sum_abs_pow(a.data(), a.size(), 4.0, 0.0);
  double p2 = act.sum_abs_pow(a.data(), a.size(), 4.0, 0.0);
  CHECK(p1 == p2);
}

TEST_CASE("sum_abs_pow fast paths match the pow formula") {
  auto a = random_vec(129, 5);
  const auto& act = kernels::active();
  for (double p : {1.0, 2.0, 4.0}) {
    double got = act.sum_abs_pow(a.data(), a.size(), p, 0.5);
    double want = 0.0;
    for (double x : a) want += std::pow(std::fabs(x - 0.5), p);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("parallel_chunks covers the index range once") {
  std::vector<int> hits(10000, 0);
  parallel_chunks(hits.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) hits[i]++;
  });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, -1.5, 3.141592653589793, 1e-300, 2.4494897427831757}) {
    std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}
