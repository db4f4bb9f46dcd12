#include <doctest.h>

#include <cmath>

#include "nscv/errors.hpp"
#include "nscv/harmonic.hpp"
#include "nscv/norms.hpp"
#include "test_support.hpp"

using namespace nscv;
using namespace nscv::testing;

namespace {

ScalarField gaussian_bump(const Grid3& g, double width) {
  return ScalarField::from_function(g, [&](const Vec3& x) {
    return std::exp(-dot(x, x) / (width * width));
  });
}

}  // namespace

TEST_CASE("spectral riesz identities") {
  Grid3 g = Grid3::make(32, M_PI);
  ScalarField sin1 = ScalarField::from_function(
      g, [](const Vec3& x) { return std::sin(x[0]); });
  ScalarField r1 = riesz(sin1, 1);
  ScalarField want = ScalarField::from_function(
      g, [](const Vec3& x) { return -std::cos(x[0]); });
  CHECK(max_abs_diff(r1, want) <= 1e-12);

  ScalarField f = random_band_limited(g, 3, 5);
  double m = f.mean();
  for (std::size_t i = 0; i < f.size(); ++i) f[i] -= m;
  ScalarField acc(g);
  for (int j = 1; j <= 3; ++j) acc = add(acc, riesz(riesz(f, j), j));
  CHECK(max_abs_diff(acc, scaled(-1.0, f)) <= 1e-12 * f.max_abs());

  ScalarField cst = ScalarField::from_function(g, [](const Vec3&) { return 7.0; });
  CHECK(riesz(cst, 3).max_abs() == 0.0);

  CHECK_THROWS_AS(riesz(f, 0), ValidationError);
  CHECK_THROWS_AS(riesz(f, 4), ValidationError);
}

TEST_CASE("iterated riesz pair") {
  Grid3 g = Grid3::make(32, M_PI);
  ScalarField s12 = ScalarField::from_function(
      g, [](const Vec3& x) { return std::sin(x[0] + x[1]); });
  ScalarField r12 = riesz_pair(s12, 1, 2);
  ScalarField want = scaled(-0.5, s12);
  CHECK(max_abs_diff(r12, want) <= 1e-12);

  ScalarField f = random_band_limited(g, 3, 6);
  double m = f.mean();
  for (std::size_t i = 0; i < f.size(); ++i) f[i] -= m;

  // trace identity
  ScalarField tr(g);
  for (int j = 1; j <= 3; ++j) tr = add(tr, riesz_pair(f, j, j));
  CHECK(max_abs_diff(tr, scaled(-1.0, f)) <= 1e-12 * f.max_abs());

  // symmetry is bitwise (identical symbol)
  ScalarField a = riesz_pair(f, 1, 2);
  ScalarField b = riesz_pair(f, 2, 1);
  CHECK(max_abs_diff(a, b) == 0.0);

  // commutation with single transforms
  CHECK(max_abs_diff(riesz(riesz(f, 1), 2), a) <= 1e-12 * f.max_abs());
}

TEST_CASE("multiplier op wrapper matches riesz") {
  Grid3 g = Grid3::make(16, M_PI);
  ScalarField f = random_band_limited(g, 3, 9);
  MultiplierOp op;
  op.symbol = [](const Vec3& xi) {
    double n = std::sqrt(dot(xi, xi));
    return std::complex<double>(0.0, -xi[0] / n);
  };
  ScalarField via_op = apply(op, f);
  ScalarField via_riesz = riesz(f, 1);
  CHECK(max_abs_diff(via_op, via_riesz) <= 1e-13 * f.max_abs());
}

TEST_CASE("truncated riesz quadrature") {
  Grid3 g = Grid3::make(32, M_PI);
  double w = g.half_width / 6.0;
  ScalarField f = gaussian_bump(g, w);

  CHECK_THROWS_AS(riesz_truncated_at(f, 1, g.spacing, {0, 0, 0}),
                  ValidationError);

  // Even-in-x1 data: the odd kernel cancels pairwise at the origin.
  double at0 = riesz_truncated_at(f, 1, 2.0 * g.spacing, {0, 0, 0});
  CHECK(std::fabs(at0) <= 1e-12);

  ScalarField zero(g);
  CHECK(riesz_truncated_at(zero, 1, 2.0 * g.spacing, {0.3, 0.1, -0.2}) == 0.0);

  // Against the spectral oracle at probe nodes. The omitted |z| < eps ball
  // contributes Theta(eps * grad f), so at eps = 2h on 32^3 the defect sits
  // near 40% of ||Rf||_inf and grows with eps; assert that envelope and the
  // monotone eps-dependence rather than a small tolerance.
  ScalarField spectral = riesz(f, 1);
  double rmax = spectral.max_abs();
  auto defect = [&](int n, double eps_mult) {
    Grid3 gg = Grid3::make(n, M_PI);
    double ww = gg.half_width / 6.0;
    ScalarField ff = gaussian_bump(gg, ww);
    ScalarField sp = riesz(ff, 1);
    double worst = 0.0;
    for (int a = -2; a <= 2; ++a) {
      // fixed physical probes near the max-slope shell, snapped per grid
      Vec3 p{a * 0.25 * ww, 0.1 * ww, -0.2 * ww};
      int i = int(std::lround((p[0] + gg.half_width) / gg.spacing));
      int j = int(std::lround((p[1] + gg.half_width) / gg.spacing));
      int k = int(std::lround((p[2] + gg.half_width) / gg.spacing));
      double tr = riesz_truncated_at(ff, 1, eps_mult * gg.spacing,
                                     gg.node(i, j, k));
      worst = std::max(worst, std::fabs(tr - sp.at(i, j, k)));
    }
    return worst;
  };
  double d32_2h = defect(32, 2.0);
  double d32_4h = defect(32, 4.0);
  double d16_2h = defect(16, 2.0);
  CHECK(d32_2h <= 0.5 * rmax);
  CHECK(d32_4h > d32_2h);        // truncation error grows with eps
  CHECK(d16_2h > 1.5 * d32_2h);  // and shrinks under refinement at eps = 2h

  CHECK(riesz_tail_estimate(f) <= 1e-10);  // decayed data, tiny tail
}

TEST_CASE("modified riesz transform") {
  Grid3 g = Grid3::make(16, M_PI);
  ScalarField one = ScalarField::from_function(g, [](const Vec3&) { return 1.0; });
  double eps = 2.0 * g.spacing;
  CHECK(std::fabs(modified_riesz_at(one, 1, eps, {0, 0, 0})) <= 1e-3);
  CHECK(std::fabs(modified_riesz_at(one, 2, eps, {0, 0, 0})) <= 1e-3);

  ScalarField zero(g);
  CHECK(modified_riesz_at(zero, 1, eps, {0.4, 0.0, 0.0}) == 0.0);

  // f supported away from B(0,1): modified - truncated is x-independent.
  ScalarField far = ScalarField::from_function(g, [&](const Vec3& x) {
    Vec3 c{2.0, 0.0, 0.0};
    return std::exp(-dot(x - c, x - c) / 0.09);
  });
  Vec3 p1{0.0, 0.0, 0.0};
  Vec3 p2{-0.7, 0.5, 0.3};
  double c1 = modified_riesz_at(far, 1, eps, p1) -
              riesz_truncated_at(far, 1, eps, p1);
  double c2 = modified_riesz_at(far, 1, eps, p2) -
              riesz_truncated_at(far, 1, eps, p2);
  CHECK(c1 == doctest::Approx(c2).epsilon(1e-12));

  // Field versions agree with the pointwise evaluations.
  ScalarField mf = modified_riesz(far, 1, eps);
  int o = g.origin_index();
  CHECK(mf.at(o, o, o) ==
        doctest::Approx(modified_riesz_at(far, 1, eps, {0, 0, 0}))
            .epsilon(1e-14));
}

TEST_CASE("parity bookkeeping") {
  Grid3 g = Grid3::make(32, M_PI);
  // cos(x3) g(x1,x2) is even in y3: R3 must flip it to odd.
  ScalarField even3 = ScalarField::from_function(g, [](const Vec3& x) {
    return std::cos(x[2]) * (std::sin(x[0]) + 0.5 * std::cos(x[1]));
  });
  ParityReport rep = parity_check(even3);
  CHECK(rep.max_relative_defect <= 1e-12);

  ScalarField sin3 = ScalarField::from_function(
      g, [](const Vec3& x) { return std::sin(x[2]); });
  CHECK(riesz(sin3, 1).max_abs() <= 1e-14);  // no xi_1 content
  ParityReport rep2 = parity_check(sin3);
  CHECK(rep2.max_relative_defect <= 1e-12);

  ScalarField f = random_band_limited(g, 4, 17);
  CHECK(parity_check(f).max_relative_defect <= 1e-12);
}

TEST_CASE("kernel condition spot checks") {
  auto riesz1 = [](const Vec3& x, const Vec3& y) {
    return riesz_kernel(1, x, y);
  };
  auto samples = standard_kernel_samples(2024, 400);
  KernelConditionReport rep = check_kernel_conditions(
      riesz1, 1.0, samples, {{0.5, 1.0}, {1.0, 3.0}}, 100000, 99);
  CHECK(rep.size_constant <= riesz_normalization() + 1e-12);
  CHECK(rep.size_constant > 0.0);
  CHECK(rep.smoothness_constant > 0.0);
  CHECK(std::isfinite(rep.smoothness_constant));
  CHECK(rep.max_annulus_integral <= 1e-6);

  auto zero_kernel = [](const Vec3&, const Vec3&) { return 0.0; };
  KernelConditionReport zrep = check_kernel_conditions(
      zero_kernel, 1.0, samples, {{0.5, 1.0}}, 1000, 7);
  CHECK(zrep.size_constant == 0.0);
  CHECK(zrep.smoothness_constant == 0.0);
  CHECK(zrep.max_annulus_integral == 0.0);

  std::vector<KernelSample> bad = {{{0, 0, 0}, {0, 0, 0}, {1, 0, 0}}};
  CHECK_THROWS_AS(check_kernel_conditions(riesz1, 1.0, bad, {}, 10, 1),
                  ValidationError);
}

TEST_CASE("verify table is green") {
  auto rows = verify_riesz_table(32, M_PI);
  CHECK(rows.size() >= 8);
  for (const auto& r : rows) {
    INFO(r.name);
    CHECK(r.pass);
  }
}

TEST_CASE("riesz boundedness surrogate stays finite (small family)") {
  Grid3 g = Grid3::make(16, M_PI);
  GrowthFunction psi = make_psi(3, 4.0, 0.5, -0.75, -0.75);
  auto balls = sample_balls(g, BallStrategy::dyadic(2));
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScalarField f = random_band_limited(g, 3, seed);
    double m = f.mean();
    for (std::size_t i = 0; i < f.size(); ++i) f[i] -= m;
    double nf = pointed_campanato_norm(f, 4.0, psi, balls).value;
    double nr = pointed_campanato_norm(riesz(f, 1), 4.0, psi, balls).value;
    worst = std::max(worst, nr / nf);
  }
  CHECK(worst > 0.0);
  CHECK(worst < 50.0);
}
