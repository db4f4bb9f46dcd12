#include "nscv/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nscv/errors.hpp"

namespace nscv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail_config(const std::string& msg) {
  throw ValidationError("growth", msg);
}

double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// phi(x, .) for a fixed center, as a two-piece power profile:
// c_small * t^a on (0, brk], c_large * t^b on (brk, inf). Uniform kinds use
// brk = inf.
struct PowerProfile {
  double c_small = 1.0;
  double a = 0.0;
  double c_large = 1.0;
  double b = 0.0;
  double brk = kInf;
};

PowerProfile profile_at(const GrowthFunction& gf, const Vec3& x) {
  const GrowthParams& pr = gf.params();
  PowerProfile p;
  switch (gf.kind()) {
    case GrowthKind::PiecewisePowerPhi:
      p.a = norm(x) <= 2.0 ? pr.alpha : pr.alpha_tilde;
      p.b = pr.beta;
      p.brk = 2.0;
      break;
    case GrowthKind::PiecewisePowerPsi:
      p.a = norm(x) <= 2.0 ? pr.alpha : pr.delta;
      p.b = pr.beta;
      p.brk = 2.0;
      break;
    case GrowthKind::ConstantOne:
      p.a = 0.0;
      break;
    case GrowthKind::PowerAlpha:
      p.a = pr.alpha;
      break;
    case GrowthKind::MorreyCritical:
      p.a = -double(pr.n) / pr.p;
      p.c_small = std::pow(unit_ball_volume(pr.n), -1.0 / pr.p);
      break;
    case GrowthKind::Custom:
      fail_config("custom growth functions have no power profile");
  }
  return p;
}

// int_lo^hi c * t^(e-1) dt, 0 < lo <= hi.
double int_pow(double c, double e, double lo, double hi) {
  if (hi <= lo) return 0.0;
  if (e == 0.0) return c * std::log(hi / lo);
  return c * (std::pow(hi, e) - std::pow(lo, e)) / e;
}

// int_0^hi c * t^(e-1) dt; requires e > 0.
double int_pow_from_zero(double c, double e, double hi) {
  return c * std::pow(hi, e) / e;
}

// int_lo^inf c * t^(e-1) dt; requires e < 0.
double int_pow_to_inf(double c, double e, double lo) {
  return -c * std::pow(lo, e) / e;
}

[[noreturn]] void fail_divergent(const char* which) {
  throw NumericalError("growth", std::string(which) + " integral diverges");
}

// --- Gauss-Kronrod 7/15 -----------------------------------------------------

const double kXgk[8] = {0.991455371120813, 0.949107912342759,
                        0.864864423359769, 0.741531185599394,
                        0.586087235467691, 0.405845151377397,
                        0.207784955007898, 0.0};
const double kWgk[8] = {0.022935322010529, 0.063092092629979,
                        0.104790010322250, 0.140653259715525,
                        0.169004726639267, 0.190350578064785,
                        0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277,
                       0.381830050505119, 0.417959183673469};

void gk15(const std::function<double(double)>& f, double a, double b,
          double* integral, double* err) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double fc = f(c);
  double ik = kWgk[7] * fc;
  double ig = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double fl = f(c - h * kXgk[i]);
    double fr = f(c + h * kXgk[i]);
    ik += kWgk[i] * (fl + fr);
    if (i % 2 == 1) ig += kWg[i / 2] * (fl + fr);
  }
  *integral = ik * h;
  *err = std::fabs((ik - ig) * h);
}

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double tol_abs, int depth) {
  double integral, err;
  gk15(f, a, b, &integral, &err);
  if (err <= tol_abs || depth >= 48) return integral;
  double c = 0.5 * (a + b);
  return adaptive_rec(f, a, c, 0.5 * tol_abs, depth + 1) +
         adaptive_rec(f, c, b, 0.5 * tol_abs, depth + 1);
}

// Improper integral of f over [lo, inf) assembled from dyadic blocks; throws
// if block sums fail to decay.
double integrate_to_inf(const std::function<double(double)>& f, double lo,
                        double tol) {
  double acc = 0.0;
  double prev = kInf;
  double a = lo;
  for (int k = 0; k < 80; ++k) {
    double b = 2.0 * a;
    double blk = adaptive_integrate(f, a, b, tol);
    acc += blk;
    double mag = std::fabs(blk);
    if (mag <= tol * std::max(std::fabs(acc), 1e-300) && k >= 4) return acc;
    if (k > 40 && mag >= prev) fail_divergent("upper Dini");
    prev = mag;
    a = b;
  }
  fail_divergent("upper Dini");
}

double integrate_from_zero(const std::function<double(double)>& f, double hi,
                           double tol) {
  double acc = 0.0;
  double prev = kInf;
  double b = hi;
  for (int k = 0; k < 100; ++k) {
    double a = 0.5 * b;
    double blk = adaptive_integrate(f, a, b, tol);
    acc += blk;
    double mag = std::fabs(blk);
    if (mag <= tol * std::max(std::fabs(acc), 1e-300) && k >= 4) return acc;
    if (k > 60 && mag >= prev) fail_divergent("lower Dini");
    prev = mag;
    b = a;
  }
  fail_divergent("lower Dini");
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double lo,
                          double hi, double tol) {
  if (hi <= lo) return 0.0;
  double integral, err;
  gk15(f, lo, hi, &integral, &err);
  double tol_abs = tol * std::max(std::fabs(integral), 1e-300);
  if (err <= tol_abs) return integral;
  return adaptive_rec(f, lo, hi, tol_abs, 0);
}

// --- GrowthFunction ---------------------------------------------------------

double GrowthFunction::eval(const Vec3& x, double r) const {
  if (!(r > 0.0))
    throw ValidationError("growth", "growth function radius must be positive");
  if (kind_ == GrowthKind::Custom) {
    double v = custom_(x, r);
    if (!(v > 0.0) || !std::isfinite(v))
      throw NumericalError("growth",
                           "custom growth evaluator returned a non-positive "
                           "or non-finite value");
    return v;
  }
  if (kind_ == GrowthKind::ConstantOne) return 1.0;
  PowerProfile p = profile_at(*this, x);
  if (r <= p.brk) return p.c_small * std::pow(r, p.a);
  return p.c_large * std::pow(r, p.b);
}

GrowthFunction GrowthFunction::constant_one() {
  GrowthFunction g;
  g.kind_ = GrowthKind::ConstantOne;
  g.label_ = "1";
  return g;
}

GrowthFunction GrowthFunction::power(double alpha) {
  GrowthFunction g;
  g.kind_ = GrowthKind::PowerAlpha;
  g.params_.alpha = alpha;
  g.label_ = "r^alpha";
  return g;
}

GrowthFunction GrowthFunction::morrey_critical(int n, double p) {
  if (n < 1) fail_config("morrey_critical requires n >= 1");
  if (!(p >= 1.0)) fail_config("morrey_critical requires p >= 1");
  GrowthFunction g;
  g.kind_ = GrowthKind::MorreyCritical;
  g.params_.n = n;
  g.params_.p = p;
  g.label_ = "|B|^{-1/p}";
  return g;
}

GrowthFunction GrowthFunction::custom(Evaluator f, std::string label) {
  GrowthFunction g;
  g.kind_ = GrowthKind::Custom;
  g.custom_ = std::move(f);
  g.label_ = std::move(label);
  return g;
}

namespace {

void validate_phi_params(int n, double p, double alpha, double alpha_tilde,
                         double beta, bool allow_extended_beta) {
  std::ostringstream os;
  if (n < 1) fail_config("dimension n must be positive");
  if (!(p > 2.0)) {
    os << "constraint p > 2 violated (p = " << p << ")";
    fail_config(os.str());
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    os << "constraint 0 < alpha < 1 violated (alpha = " << alpha << ")";
    fail_config(os.str());
  }
  double lo = -double(n) / p;
  if (!(alpha_tilde >= lo && alpha_tilde < 0.0)) {
    os << "constraint -n/p <= alpha_tilde < 0 violated (alpha_tilde = "
       << alpha_tilde << ", -n/p = " << lo << ")";
    fail_config(os.str());
  }
  bool standard = beta >= lo && beta < 0.0;
  if (!standard) {
    bool extended = allow_extended_beta &&
                    std::fabs(beta - 2.0 * alpha_tilde) <= 1e-12 &&
                    std::fabs(beta - 2.0 * lo) <= 1e-12;
    if (!extended) {
      os << "constraint -n/p <= beta < 0 violated (beta = " << beta
         << ", -n/p = " << lo
         << "); beta = 2*alpha_tilde = -2n/p needs allow_extended_beta";
      fail_config(os.str());
    }
  }
}

}  // namespace

GrowthFunction make_phi(int n, double p, double alpha, double alpha_tilde,
                        double beta, bool allow_extended_beta) {
  validate_phi_params(n, p, alpha, alpha_tilde, beta, allow_extended_beta);
  GrowthFunction g;
  g.kind_ = GrowthKind::PiecewisePowerPhi;
  g.params_ = {n, p, alpha, alpha_tilde, beta, 2.0 * alpha_tilde};
  g.label_ = "phi";
  return g;
}

GrowthFunction make_psi(int n, double p, double alpha, double alpha_tilde,
                        double beta, bool allow_extended_beta) {
  validate_phi_params(n, p, alpha, alpha_tilde, beta, allow_extended_beta);
  GrowthFunction g;
  g.kind_ = GrowthKind::PiecewisePowerPsi;
  g.params_ = {n, p, alpha, alpha_tilde, beta, 2.0 * alpha_tilde};
  g.label_ = "psi";
  return g;
}

GrowthFunction make_psi_explicit(int n, double p, double alpha, double delta,
                                 double beta) {
  std::ostringstream os;
  if (!(p > 2.0)) fail_config("constraint p > 2 violated");
  if (!(alpha > 0.0 && alpha < 1.0))
    fail_config("constraint 0 < alpha < 1 violated");
  double q = 0.5 * p;
  double lo = -double(n) / q;
  if (!(delta >= lo && delta < 0.0)) {
    os << "constraint -n/(p/2) <= delta < 0 violated (delta = " << delta
       << ")";
    fail_config(os.str());
  }
  if (!(beta >= lo && beta < 0.0)) {
    os << "constraint -n/(p/2) <= beta < 0 violated (beta = " << beta << ")";
    fail_config(os.str());
  }
  GrowthFunction g;
  g.kind_ = GrowthKind::PiecewisePowerPsi;
  g.params_ = {n, p, alpha, 0.5 * delta, beta, delta};
  g.label_ = "psi";
  return g;
}

// --- sampled conditions -----------------------------------------------------

GrowthSampleSpec GrowthSampleSpec::standard() {
  GrowthSampleSpec s;
  for (double x : {-4.0, -2.0, 0.0, 2.0, 4.0})
    for (double y : {-4.0, -2.0, 0.0, 2.0, 4.0})
      for (double z : {-4.0, -2.0, 0.0, 2.0, 4.0})
        s.centers.push_back({x, y, z});
  for (int k = 0; k < 32; ++k)
    s.radii.push_back(std::pow(2.0, -6.0 + 12.0 * k / 31.0));
  return s;
}

namespace {
void require_nonempty(const GrowthSampleSpec& spec) {
  if (spec.centers.empty() || spec.radii.empty())
    throw ValidationError("growth", "empty condition sample family");
}
}  // namespace

ConditionEntry check_doubling(const GrowthFunction& gf,
                              const GrowthSampleSpec& spec) {
  require_nonempty(spec);
  const double mult[] = {0.5, M_SQRT1_2, M_SQRT2, 2.0};
  double a1 = 1.0;
  for (const Vec3& x : spec.centers) {
    for (double r : spec.radii) {
      double fr = gf.eval(x, r);
      for (double m : mult) {
        double fs = gf.eval(x, m * r);
        a1 = std::max(a1, std::max(fs / fr, fr / fs));
      }
    }
  }
  return {std::isfinite(a1), a1};
}

ConditionEntry check_nearness(const GrowthFunction& gf,
                              const GrowthSampleSpec& spec) {
  require_nonempty(spec);
  const Vec3 dirs[] = {{1, 0, 0}, {0, 1, 0},  {0, 0, 1},
                       {-1, 0, 0}, {0, -1, 0}, {0, 0, -1},
                       {M_SQRT1_2, M_SQRT1_2, 0}};
  const double frac[] = {0.5, 1.0};
  double a2 = 1.0;
  for (const Vec3& x : spec.centers) {
    for (double r : spec.radii) {
      double fx = gf.eval(x, r);
      for (const Vec3& d : dirs) {
        for (double f : frac) {
          Vec3 y = x + (f * r) * d;
          double fy = gf.eval(y, r);
          a2 = std::max(a2, std::max(fx / fy, fy / fx));
        }
      }
    }
  }
  return {std::isfinite(a2), a2};
}

ConditionEntry check_almost_increasing(const GrowthFunction& gf,
                                       const GrowthSampleSpec& spec) {
  require_nonempty(spec);
  std::vector<double> radii = spec.radii;
  std::sort(radii.begin(), radii.end());
  double a3 = 1.0;
  for (const Vec3& x : spec.centers) {
    std::vector<double> vals(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) vals[i] = gf.eval(x, radii[i]);
    for (std::size_t i = 0; i < radii.size(); ++i)
      for (std::size_t j = i + 1; j < radii.size(); ++j)
        a3 = std::max(a3, vals[i] / vals[j]);
  }
  return {std::isfinite(a3), a3};
}

ConditionReport check_conditions(const GrowthFunction& gf,
                                 const GrowthSampleSpec& spec) {
  ConditionReport rep;
  rep.doubling = check_doubling(gf, spec);
  rep.nearness = check_nearness(gf, spec);
  rep.almost_increasing = check_almost_increasing(gf, spec);
  rep.sample_count = int(spec.centers.size() * spec.radii.size());
  try {
    double c = 0.0;
    for (const Vec3& x : spec.centers)
      for (double r : spec.radii)
        c = std::max(c, dini_lower(gf, x, r) / gf.eval(x, r));
    rep.dini_lower_constant = c;
  } catch (const NumericalError&) {
    rep.dini_lower_constant.reset();
  }
  try {
    double c = 0.0;
    for (const Vec3& x : spec.centers)
      for (double r : spec.radii)
        c = std::max(c, dini_upper(gf, x, r) / gf.eval(x, r));
    rep.dini_upper_constant = c;
  } catch (const NumericalError&) {
    rep.dini_upper_constant.reset();
  }
  return rep;
}

// --- Dini and Phi integrals -------------------------------------------------

double dini_lower(const GrowthFunction& gf, const Vec3& x, double r) {
  if (!(r > 0.0)) throw ValidationError("growth", "dini_lower requires r > 0");
  if (gf.kind() == GrowthKind::Custom) {
    auto f = [&](double t) { return gf.eval(x, t) / t; };
    return integrate_from_zero(f, r, 1e-10);
  }
  PowerProfile p = profile_at(gf, x);
  if (p.a <= 0.0) fail_divergent("lower Dini");
  if (r <= p.brk) return int_pow_from_zero(p.c_small, p.a, r);
  return int_pow_from_zero(p.c_small, p.a, p.brk) +
         int_pow(p.c_large, p.b, p.brk, r);
}

double dini_upper(const GrowthFunction& gf, const Vec3& x, double r) {
  if (!(r > 0.0)) throw ValidationError("growth", "dini_upper requires r > 0");
  if (gf.kind() == GrowthKind::Custom) {
    auto f = [&](double t) { return gf.eval(x, t) / t; };
    return integrate_to_inf(f, r, 1e-10);
  }
  PowerProfile p = profile_at(gf, x);
  if (std::isfinite(p.brk)) {
    if (p.b >= 0.0) fail_divergent("upper Dini");
    if (r > p.brk) return int_pow_to_inf(p.c_large, p.b, r);
    return int_pow(p.c_small, p.a, r, p.brk) +
           int_pow_to_inf(p.c_large, p.b, p.brk);
  }
  if (p.a >= 0.0) fail_divergent("upper Dini");
  return int_pow_to_inf(p.c_small, p.a, r);
}

double dini_upper_weighted(const GrowthFunction& gf, const Vec3& x, double r,
                           double kappa) {
  if (!(r > 0.0))
    throw ValidationError("growth", "dini_upper_weighted requires r > 0");
  double rk = std::pow(r, kappa);
  if (gf.kind() == GrowthKind::Custom) {
    auto f = [&](double t) { return gf.eval(x, t) / std::pow(t, 1.0 + kappa); };
    return rk * integrate_to_inf(f, r, 1e-10);
  }
  PowerProfile p = profile_at(gf, x);
  if (std::isfinite(p.brk)) {
    if (p.b >= kappa) fail_divergent("weighted upper Dini");
    if (r > p.brk) return rk * int_pow_to_inf(p.c_large, p.b - kappa, r);
    return rk * (int_pow(p.c_small, p.a - kappa, r, p.brk) +
                 int_pow_to_inf(p.c_large, p.b - kappa, p.brk));
  }
  if (p.a >= kappa) fail_divergent("weighted upper Dini");
  return rk * int_pow_to_inf(p.c_small, p.a - kappa, r);
}

double phi_star(const GrowthFunction& gf, const Vec3& x, double r) {
  if (!(r > 0.0)) throw ValidationError("growth", "phi_star requires r > 0");
  double m = std::max({2.0, norm(x), r});
  if (gf.kind() == GrowthKind::Custom) {
    auto f = [&](double t) { return gf.eval({0.0, 0.0, 0.0}, t) / t; };
    return adaptive_integrate(f, 1.0, m, 1e-10);
  }
  PowerProfile p = profile_at(gf, {0.0, 0.0, 0.0});
  if (m <= p.brk) return int_pow(p.c_small, p.a, 1.0, m);
  return int_pow(p.c_small, p.a, 1.0, p.brk) +
         int_pow(p.c_large, p.b, p.brk, m);
}

double phi_star_star(const GrowthFunction& gf, const Vec3& x, double r) {
  if (!(r > 0.0))
    throw ValidationError("growth", "phi_star_star requires r > 0");
  double m = std::max({2.0, norm(x), r});
  if (r >= m) return 0.0;
  if (gf.kind() == GrowthKind::Custom) {
    auto f = [&](double t) { return gf.eval(x, t) / t; };
    return adaptive_integrate(f, r, m, 1e-10);
  }
  PowerProfile p = profile_at(gf, x);
  if (r >= p.brk) return int_pow(p.c_large, p.b, r, m);
  if (m <= p.brk) return int_pow(p.c_small, p.a, r, m);
  return int_pow(p.c_small, p.a, r, p.brk) +
         int_pow(p.c_large, p.b, p.brk, m);
}

GrowthFunction psi_from_phi(const GrowthFunction& gf) {
  if (gf.kind() != GrowthKind::PiecewisePowerPhi)
    throw ValidationError("growth", "psi_from_phi expects a piecewise phi");
  GrowthFunction base = gf;
  return GrowthFunction::custom(
      [base](const Vec3& x, double r) {
        return base.eval(x, r) *
               (phi_star(base, x, r) + phi_star_star(base, x, r));
      },
      "phi*(Phi*+Phi**)");
}

RatioScan compare_growth(const GrowthFunction& a, const GrowthFunction& b,
                         const GrowthSampleSpec& spec) {
  require_nonempty(spec);
  RatioScan scan{kInf, 0.0};
  for (const Vec3& x : spec.centers) {
    for (double r : spec.radii) {
      double ratio = a.eval(x, r) / b.eval(x, r);
      scan.min_ratio = std::min(scan.min_ratio, ratio);
      scan.max_ratio = std::max(scan.max_ratio, ratio);
    }
  }
  return scan;
}

}  // namespace nscv
