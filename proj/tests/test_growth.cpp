#include <doctest.h>

#include <cmath>

#include "nscv/config.hpp"
#include "nscv/errors.hpp"
#include "nscv/growth.hpp"
#include "nscv/util.hpp"

using namespace nscv;

namespace {
const Vec3 kOrigin{0.0, 0.0, 0.0};
const Vec3 kFar{3.0, 0.0, 0.0};
}  // namespace

TEST_CASE("piecewise phi evaluates branch-exactly") {
  GrowthFunction phi = make_phi(3, 4.0, 0.5, -0.75, -0.75);
  CHECK(phi.eval(kOrigin, 1.0) == 1.0);
  CHECK(phi.eval(kOrigin, 4.0) == std::pow(4.0, -0.75));
  CHECK(phi.eval(kFar, 0.25) == std::pow(0.25, -0.75));
  CHECK(phi.eval(kFar, 1.0) == 1.0);

  GrowthFunction psi = make_psi(3, 4.0, 0.5, -0.75, -0.75);
  CHECK(psi.eval(kFar, 0.5) == std::pow(0.5, -1.5));
  CHECK(psi.eval(kFar, 0.5) == doctest::Approx(2.8284271247461903));

  // Branch exactness on random samples: identical arithmetic path.
  SplitMix64 rng(42);
  for (int i = 0; i < 10000; ++i) {
    Vec3 x{4.0 * rng.next_signed(), 4.0 * rng.next_signed(),
           4.0 * rng.next_signed()};
    double r = std::pow(2.0, 3.0 * rng.next_signed());
    double e;
    if (r <= 2.0)
      e = norm(x) <= 2.0 ? 0.5 : -0.75;
    else
      e = -0.75;
    CHECK(phi.eval(x, r) == std::pow(r, e));
  }
}

TEST_CASE("constructors reject out-of-range parameters") {
  CHECK_THROWS_AS(make_phi(3, 4.0, 0.5, -0.75, -2.0), ValidationError);
  CHECK_THROWS_AS(make_phi(3, 2.0, 0.5, -0.75, -0.75), ValidationError);
  CHECK_THROWS_AS(make_phi(3, 4.0, 1.5, -0.75, -0.75), ValidationError);
  CHECK_THROWS_AS(make_phi(3, 4.0, 0.5, 0.25, -0.75), ValidationError);
  // The "moreover" reading beta = 2*alpha_tilde = -2n/p is gated.
  CHECK_THROWS_AS(make_phi(3, 4.0, 0.5, -0.75, -1.5), ValidationError);
  GrowthFunction ext = make_phi(3, 4.0, 0.5, -0.75, -1.5, true);
  CHECK(ext.eval(kOrigin, 4.0) == std::pow(4.0, -1.5));
  CHECK_THROWS_AS(ext.eval(kOrigin, 0.0), ValidationError);
  CHECK_THROWS_AS(ext.eval(kOrigin, -1.0), ValidationError);
}

TEST_CASE("sampled growth conditions") {
  GrowthSampleSpec spec = GrowthSampleSpec::standard();
  CHECK(spec.centers.size() == 125);
  CHECK(spec.radii.size() == 32);

  ConditionEntry d1 = check_doubling(GrowthFunction::constant_one(), spec);
  CHECK(d1.holds);
  CHECK(d1.constant == 1.0);

  ConditionEntry d2 = check_doubling(GrowthFunction::power(0.5), spec);
  CHECK(d2.constant == doctest::Approx(std::sqrt(2.0)));

  ConditionEntry n1 = check_nearness(GrowthFunction::power(0.5), spec);
  CHECK(n1.constant == 1.0);  // x-independent
  ConditionEntry a1 = check_almost_increasing(GrowthFunction::power(0.5), spec);
  CHECK(a1.constant == 1.0);  // monotone increasing

  GrowthFunction phi = make_phi(3, 4.0, 0.5, -0.75, -0.75);
  GrowthSampleSpec cross;
  cross.centers = {kOrigin};
  cross.radii = {1.5};
  ConditionEntry dc = check_doubling(phi, cross);
  // Pair (1.5, 3) crosses the r = 2 branch point.
  double expect = phi.eval(kOrigin, 1.5) / phi.eval(kOrigin, 3.0);
  CHECK(dc.constant >= expect - 1e-15);
  CHECK(dc.holds);

  // Sharp doubling bound for the piecewise family. Pairs crossing the
  // breakpoint reach |2 beta - alpha|, so the exponent set below is the
  // correct envelope (not just max(alpha, |alpha_tilde|, |beta|)).
  ConditionEntry dphi = check_doubling(phi, spec);
  double envelope = std::max(
      {0.5, 0.75, 0.75, std::fabs(2.0 * -0.75 - 0.5),
       std::fabs(2.0 * -0.75 - -0.75)});
  CHECK(dphi.constant <= std::pow(2.0, envelope) + 1e-12);
  CHECK(dphi.constant > std::pow(2.0, 0.75));  // exceeds the naive bound

  CHECK_THROWS_AS(check_doubling(phi, GrowthSampleSpec{}), ValidationError);
}

TEST_CASE("dini integrals, closed form") {
  GrowthFunction pa = GrowthFunction::power(0.5);
  CHECK(dini_lower(pa, kOrigin, 1.0) == 2.0);
  CHECK_THROWS_AS(dini_upper(pa, kOrigin, 1.0), NumericalError);

  GrowthFunction one = GrowthFunction::constant_one();
  CHECK_THROWS_AS(dini_lower(one, kOrigin, 1.0), NumericalError);

  GrowthFunction phi = make_phi(3, 4.0, 0.5, -0.75, -0.75);
  double beta = -0.75;
  CHECK(dini_upper(phi, kOrigin, 2.0) ==
        doctest::Approx(-std::pow(2.0, beta) / beta).epsilon(1e-14));
  CHECK(dini_upper(phi, kOrigin, 2.0) ==
        doctest::Approx(0.7928047433351474).epsilon(1e-12));
  CHECK_THROWS_AS(dini_lower(phi, kFar, 1.0), NumericalError);  // negative exponent

  // Weighted (kappa = 1) variant stays bounded relative to phi down to r -> 0.
  double worst = 0.0;
  for (double r : {1e-4, 1e-2, 0.5, 1.0, 1.9, 2.0, 2.5, 8.0, 64.0}) {
    for (const Vec3& x : {kOrigin, kFar})
      worst = std::max(worst,
                       dini_upper_weighted(phi, x, r, 1.0) / phi.eval(x, r));
  }
  CHECK(worst < 10.0);
  CHECK(worst > 0.0);
}

TEST_CASE("dini quadrature route matches the closed forms") {
  GrowthFunction phi = make_phi(3, 4.0, 0.5, -0.75, -0.75);
  GrowthFunction wrapped = GrowthFunction::custom(
      [phi](const Vec3& x, double r) { return phi.eval(x, r); }, "phi-custom");
  for (double r : {0.25, 1.0, 1.7, 2.0, 3.0, 10.0}) {
    for (const Vec3& x : {kOrigin, kFar}) {
      double closed = dini_upper(phi, x, r);
      double quad = dini_upper(wrapped, x, r);
      CHECK(quad == doctest::Approx(closed).epsilon(1e-9));
    }
  }
  GrowthFunction pa = GrowthFunction::power(0.5);
  GrowthFunction pa_wrapped = GrowthFunction::custom(
      [pa](const Vec3& x, double r) { return pa.eval(x, r); }, "pa-custom");
  for (double r : {0.5, 1.0, 4.0})
    CHECK(dini_lower(pa_wrapped, kOrigin, r) ==
          doctest::Approx(dini_lower(pa, kOrigin, r)).epsilon(1e-9));
}

TEST_CASE("Phi* and Phi**") {
  GrowthFunction phi = make_phi(3, 4.0, 0.5, -0.75, -0.75);
  double two_sqrt2m1 = 2.0 * (std::sqrt(2.0) - 1.0);
  CHECK(phi_star(phi, kOrigin, 1.0) == doctest::Approx(two_sqrt2m1).epsilon(1e-14));
  CHECK(phi_star_star(phi, kOrigin, 2.0) == 0.0);
  CHECK(phi_star_star(phi, kOrigin, 1.0) ==
        doctest::Approx(two_sqrt2m1).epsilon(1e-14));

  // Monotone in r and in |x|.
  double prev = 0.0;
  for (double r : {0.5, 1.0, 2.0, 4.0, 16.0, 64.0}) {
    double v = phi_star(phi, kOrigin, r);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
  prev = 0.0;
  for (double c : {0.0, 1.0, 2.0, 3.0, 5.0, 9.0}) {
    double v = phi_star(phi, {c, 0.0, 0.0}, 1.0);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }

  // Quadrature route agrees with the closed form.
  GrowthFunction wrapped = GrowthFunction::custom(
      [phi](const Vec3& x, double r) { return phi.eval(x, r); }, "phi-custom");
  for (double r : {0.3, 1.0, 2.5, 6.0})
    for (const Vec3& x : {kOrigin, kFar, Vec3{0.0, 4.0, 3.0}}) {
      CHECK(phi_star(wrapped, x, r) ==
            doctest::Approx(phi_star(phi, x, r)).epsilon(1e-10));
      CHECK(phi_star_star(wrapped, x, r) ==
            doctest::Approx(phi_star_star(phi, x, r)).epsilon(1e-10));
    }
}

TEST_CASE("psi_from_phi compares against make_psi") {
  GrowthFunction phi = make_phi(3, 4.0, 0.5, -0.75, -0.75);
  GrowthFunction prod = psi_from_phi(phi);
  GrowthFunction psi = make_psi(3, 4.0, 0.5, -0.75, -0.75);

  RatioScan scan = compare_growth(prod, psi, GrowthSampleSpec::standard());
  CHECK(scan.min_ratio > 0.0);
  CHECK(std::isfinite(scan.max_ratio));
  CHECK(scan.max_ratio >= scan.min_ratio);

  // On the |x| <= 2, r > 2 branch both sides scale as r^beta, but the
  // Phi* factor still integrates up to max(2,|x|,r), so the ratio is only
  // asymptotically constant: it converges to Phi*(0, inf) = 2(sqrt(2)-1)
  // + (4/3) 2^(-3/4).
  double limit = 1.6212318680813378;
  double r1 = prod.eval(kOrigin, 64.0) / psi.eval(kOrigin, 64.0);
  double r2 = prod.eval(kOrigin, 128.0) / psi.eval(kOrigin, 128.0);
  CHECK(r1 == doctest::Approx(r2).epsilon(0.05));
  CHECK(prod.eval(kOrigin, 1024.0) / psi.eval(kOrigin, 1024.0) ==
        doctest::Approx(limit).epsilon(0.01));

  // Small-r limit at the origin: product / psi -> Phi*(0,small) + Phi**(0,small).
  double r = 1e-4;
  double want = phi_star(phi, kOrigin, r) + phi_star_star(phi, kOrigin, r);
  CHECK(prod.eval(kOrigin, r) / psi.eval(kOrigin, r) ==
        doctest::Approx(want).epsilon(1e-12));

  CHECK_THROWS_AS(psi_from_phi(psi), ValidationError);
}

TEST_CASE("condition report aggregates") {
  GrowthFunction phi = make_phi(3, 4.0, 0.5, -0.75, -0.75);
  GrowthSampleSpec small;
  small.centers = {kOrigin, kFar};
  small.radii = {0.5, 1.0, 2.0, 4.0};
  ConditionReport rep = check_conditions(phi, small);
  CHECK(rep.doubling.holds);
  CHECK(rep.nearness.holds);
  CHECK(rep.almost_increasing.holds);
  CHECK(rep.sample_count == 8);
  CHECK_FALSE(rep.dini_lower_constant.has_value());  // alpha_tilde < 0 diverges
  CHECK(rep.dini_upper_constant.has_value());
  CHECK(*rep.dini_upper_constant > 0.0);

  ConditionReport pa = check_conditions(GrowthFunction::power(0.5), small);
  CHECK(pa.dini_lower_constant.has_value());
  CHECK(*pa.dini_lower_constant == doctest::Approx(2.0));
  CHECK_FALSE(pa.dini_upper_constant.has_value());
}

TEST_CASE("growth JSON round trip") {
  GrowthFunction phi = make_phi(3, 4.0, 0.5, -0.75, -0.75);
  GrowthFunction back = growth_from_json_text(growth_to_json_text(phi));
  CHECK(back.kind() == GrowthKind::PiecewisePowerPhi);
  SplitMix64 rng(7);
  for (int i = 0; i < 100; ++i) {
    Vec3 x{4.0 * rng.next_signed(), 4.0 * rng.next_signed(), 0.0};
    double r = std::pow(2.0, 3.0 * rng.next_signed());
    CHECK(back.eval(x, r) == phi.eval(x, r));
  }
  GrowthFunction psi = make_psi(3, 4.0, 0.5, -0.75, -0.75);
  GrowthFunction psi_back = growth_from_json_text(growth_to_json_text(psi));
  CHECK(psi_back.eval(kFar, 0.5) == psi.eval(kFar, 0.5));

  CHECK_THROWS_AS(growth_from_json_text("{\"kind\": \"nope\"}"), ValidationError);
  CHECK_THROWS_AS(growth_from_json_text("{\"kind\": \"piecewise_phi\", \"zz\": 1}"),
                  ValidationError);
  CHECK_THROWS_AS(growth_from_json_text("not json"), ValidationError);
  CHECK_THROWS_AS(growth_to_json_text(psi_from_phi(phi)), ValidationError);
}

TEST_CASE("morrey critical growth") {
  GrowthFunction mc = GrowthFunction::morrey_critical(3, 4.0);
  double r = 0.7;
  double vol = 4.0 * M_PI / 3.0 * r * r * r;
  CHECK(mc.eval(kOrigin, r) == doctest::Approx(std::pow(vol, -0.25)).epsilon(1e-14));
  ConditionEntry d = check_doubling(mc, GrowthSampleSpec::standard());
  CHECK(d.holds);
  CHECK(d.constant == doctest::Approx(std::pow(2.0, 0.75)));
}
