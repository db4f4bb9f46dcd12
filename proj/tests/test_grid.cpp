#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "nscv/errors.hpp"
#include "nscv/grid.hpp"
#include "test_support.hpp"

using namespace nscv;
using namespace nscv::testing;

TEST_CASE("grid construction and geometry") {
  CHECK_THROWS_AS(Grid3::make(12, 1.0), ValidationError);
  CHECK_THROWS_AS(Grid3::make(4, 1.0), ValidationError);
  CHECK_THROWS_AS(Grid3::make(16, -1.0), ValidationError);
  Grid3 g = Grid3::make(16, M_PI);
  CHECK(g.spacing * g.n == 2.0 * g.half_width);
  CHECK(g.coord(g.origin_index()) == 0.0);
  CHECK(g.coord(0) == -g.half_width);
  // periodic distance wraps
  Vec3 a{g.coord(1), 0.0, 0.0};
  Vec3 b{g.coord(g.n - 1), 0.0, 0.0};
  CHECK(g.periodic_distance(a, b) == doctest::Approx(2.0 * g.spacing));
}

TEST_CASE("ball average") {
  Grid3 g = Grid3::make(32, M_PI);
  ScalarField cst = ScalarField::from_function(g, [](const Vec3&) { return 4.25; });
  CHECK(ball_average(cst, Ball{{0, 0, 0}, 1.0}) == 4.25);

  // Linear field: odd part cancels by node symmetry about a node center.
  ScalarField lin = ScalarField::from_function(g, [](const Vec3& x) { return x[0]; });
  double a = g.coord(20);
  double avg = ball_average(lin, Ball{{a, g.coord(14), g.coord(17)}, 0.8});
  CHECK(avg == doctest::Approx(a).epsilon(1e-12));

  // |x|^2 over B(0,r): continuum value 3 r^2 / 5.
  ScalarField sq = ScalarField::from_function(
      g, [](const Vec3& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; });
  for (double r : {0.7, 1.1}) {
    double got = ball_average(sq, Ball{{0, 0, 0}, r});
    double want = 3.0 * r * r / 5.0;
    CHECK(std::fabs(got - want) / want <= 5.0 * g.spacing / r);
  }

  CHECK_THROWS_AS(ball_average(cst, Ball{{0, 0, 0}, 0.5 * g.spacing}),
                  ValidationError);
  CHECK_THROWS_AS(ball_average(cst, Ball{{0, 0, 0}, g.half_width}),
                  ValidationError);
  CHECK_THROWS_AS(ball_average(cst, Ball{{0, 0, 0}, -1.0}), ValidationError);

  // Adding a constant shifts the average exactly (quantized values keep
  // every partial sum representable).
  ScalarField q = random_band_limited(g, 3, 71);
  quantize(q);
  ScalarField qc = q;
  for (std::size_t i = 0; i < qc.size(); ++i) qc[i] += 0.5;
  Ball B{{0, 0, 0}, 1.3};
  CHECK(ball_average(qc, B) == ball_average(q, B) + 0.5);
}

TEST_CASE("sample_balls counting and inclusion") {
  Grid3 g8 = Grid3::make(8, M_PI);
  std::vector<double> radii4 = {2 * g8.spacing, 2.5 * g8.spacing,
                                3 * g8.spacing, 3.5 * g8.spacing};
  auto ex = sample_balls(g8, BallStrategy::exhaustive(radii4));
  CHECK(ex.size() == 8 * 8 * 8 * 4);

  Grid3 g32 = Grid3::make(32, M_PI);
  auto dy = sample_balls(g32, BallStrategy::dyadic(4));
  CHECK(dy.size() == 8 * 8 * 8 * default_dyadic_radii(g32).size());

  // stride-1 dyadic equals exhaustive
  auto d1 = sample_balls(g8, BallStrategy::dyadic(1, radii4));
  CHECK(d1.size() == ex.size());
  for (std::size_t i = 0; i < d1.size(); ++i) {
    CHECK(d1[i].center == ex[i].center);
    CHECK(d1[i].radius == ex[i].radius);
  }

  CHECK_THROWS_AS(sample_balls(g8, BallStrategy::exhaustive({g8.half_width})),
                  ValidationError);
}

TEST_CASE("spectral derivatives are exact on modes") {
  Grid3 g = Grid3::make(32, M_PI);
  double q = M_PI / g.half_width;
  ScalarField f = ScalarField::from_function(
      g, [&](const Vec3& x) { return std::sin(q * x[0]); });
  ScalarField d = derivative(f, 0);
  ScalarField want = ScalarField::from_function(
      g, [&](const Vec3& x) { return q * std::cos(q * x[0]); });
  CHECK(max_abs_diff(d, want) <= 1e-12);

  ScalarField lap = laplacian(f);
  ScalarField lap_want = ScalarField::from_function(
      g, [&](const Vec3& x) { return -q * q * std::sin(q * x[0]); });
  CHECK(max_abs_diff(lap, lap_want) <= 1e-12);

  // curl of a gradient vanishes
  ScalarField s = random_band_limited(g, 4, 3);
  VectorField3 cg = curl(gradient(s));
  CHECK(cg.max_norm() <= 1e-12 * s.max_abs());
}

TEST_CASE("finite differences converge at second order") {
  // Derivative of a product of band-limited fields, FD vs spectral truth.
  auto fd_error = [&](int n) {
    Grid3 g = Grid3::make(n, M_PI);
    ScalarField f = random_band_limited(g, 2, 10);
    ScalarField h = random_band_limited(g, 2, 11);
    ScalarField prod = pointwise(f, h);
    ScalarField fd = derivative(prod, 2, DiffMethod::Fd2);
    ScalarField sp = derivative(prod, 2, DiffMethod::Spectral);
    return max_abs_diff(fd, sp);
  };
  double e32 = fd_error(32);
  double e64 = fd_error(64);
  double ratio = e32 / e64;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("reflect_y3") {
  Grid3 g = Grid3::make(16, M_PI);
  ScalarField f = random_band_limited(g, 3, 21);
  ScalarField rr = reflect_y3(reflect_y3(f));
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(rr[i] == f[i]);

  // Odd function: reflect == -f exactly (index permutation only).
  ScalarField odd = ScalarField::from_function(
      g, [&](const Vec3& x) { return std::sin(x[2]); });
  ScalarField ro = reflect_y3(odd);
  double worst = 0.0;
  for (std::size_t i = 0; i < odd.size(); ++i)
    worst = std::max(worst, std::fabs(ro[i] + odd[i]));
  CHECK(worst <= 1e-15);

  // Sawtooth y3 built from signed index offsets (kept exact under the
  // k -> N-k reflection): antisymmetric except on the k=0 seam plane,
  // where the periodization maps -(-L) back to -L.
  ScalarField saw(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        saw.at(i, j, k) = (k - g.n / 2) * g.spacing;
  ScalarField rs = reflect_y3(saw);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        if (k == 0) {
          CHECK(rs.at(i, j, k) == saw.at(i, j, k));
        } else {
          CHECK(rs.at(i, j, k) == -saw.at(i, j, k));
        }
      }

  // Mean preservation, exact on quantized data.
  ScalarField q = random_band_limited(g, 3, 5);
  quantize(q);
  CHECK(reflect_y3(q).mean() == q.mean());
}

TEST_CASE("snapshot round trip and format errors") {
  Grid3 g = Grid3::make(8, 2.0);
  VectorField3 u = random_band_limited_vector(g, 2, 77);
  std::string path = "/tmp/nscv_test_snapshot.nscv";
  write_snapshot(path, u, 0.75, 1.0);
  Snapshot s = read_snapshot(path);
  CHECK(s.time == 0.75);
  CHECK(s.viscosity == 1.0);
  CHECK(s.field.grid().n == 8);
  CHECK(s.field.grid().half_width == 2.0);
  CHECK(max_abs_diff(s.field, u) == 0.0);

  // Truncation
  {
    std::ifstream is(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(is)),
                      std::istreambuf_iterator<char>());
    std::ofstream os("/tmp/nscv_trunc.nscv", std::ios::binary);
    os.write(bytes.data(), std::streamsize(bytes.size() / 2));
  }
  CHECK_THROWS_AS(read_snapshot("/tmp/nscv_trunc.nscv"), ValidationError);

  // Wrong magic names the expected bytes
  {
    std::ofstream os("/tmp/nscv_magic.nscv", std::ios::binary);
    os << "XXXXgarbage";
  }
  try {
    read_snapshot("/tmp/nscv_magic.nscv");
    CHECK(false);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("NSCV") != std::string::npos);
  }

  CHECK_THROWS_AS(read_snapshot("/tmp/nscv_does_not_exist.nscv"),
                  ValidationError);
  std::remove(path.c_str());
}

TEST_CASE("field arithmetic requires matching grids") {
  Grid3 a = Grid3::make(8, 1.0);
  Grid3 b = Grid3::make(16, 1.0);
  ScalarField fa(a), fb(b);
  CHECK_THROWS_AS(add(fa, fb), ValidationError);
}
