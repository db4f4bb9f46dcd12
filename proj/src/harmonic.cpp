#include "nscv/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include "nscv/errors.hpp"
#include "nscv/fft.hpp"
#include "nscv/util.hpp"

namespace nscv {

ScalarField apply(const MultiplierOp& op, const ScalarField& f) {
  const Grid3& g = f.grid();
  double xi0 = M_PI / g.half_width;
  return apply_mode_multiplier(
      f,
      [&](int k1, int k2, int k3) {
        if (k1 == 0 && k2 == 0 && k3 == 0) return op.zero_mode;
        return op.symbol({xi0 * k1, xi0 * k2, xi0 * k3});
      },
      op.zero_nyquist);
}

namespace {
void check_axis(int j) {
  if (j < 1 || j > 3)
    throw ValidationError("harmonic", "Riesz index must be 1, 2 or 3");
}
}  // namespace

ScalarField riesz(const ScalarField& f, int j) {
  check_axis(j);
  return apply_mode_multiplier(
      f,
      [j](int k1, int k2, int k3) {
        if (k1 == 0 && k2 == 0 && k3 == 0) return std::complex<double>(0.0);
        double kk = std::sqrt(double(k1 * k1 + k2 * k2 + k3 * k3));
        double kj = j == 1 ? k1 : j == 2 ? k2 : k3;
        return std::complex<double>(0.0, -kj / kk);
      },
      true);
}

ScalarField riesz_pair(const ScalarField& f, int i, int j) {
  check_axis(i);
  check_axis(j);
  return apply_mode_multiplier(
      f,
      [i, j](int k1, int k2, int k3) {
        if (k1 == 0 && k2 == 0 && k3 == 0) return std::complex<double>(0.0);
        double kk = double(k1 * k1 + k2 * k2 + k3 * k3);
        double ki = i == 1 ? k1 : i == 2 ? k2 : k3;
        double kj = j == 1 ? k1 : j == 2 ? k2 : k3;
        return std::complex<double>(-ki * kj / kk, 0.0);
      },
      true);
}

double riesz_normalization() { return 1.0 / (M_PI * M_PI); }

double riesz_kernel(int j, const Vec3& x, const Vec3& y) {
  Vec3 d = x - y;
  double r2 = dot(d, d);
  double r4 = r2 * r2;
  return riesz_normalization() * d[j - 1] / r4;
}

// --- truncated / modified quadrature paths ----------------------------------

namespace {

void check_eps(const Grid3& g, double eps) {
  if (!(eps >= 2.0 * g.spacing))
    throw ValidationError(
        "harmonic", "truncation radius must be at least two grid spacings");
}

// Sum over nodes y with |x - y| >= eps of kernel * f(y) * h^3, with
// component-wise minimal-image displacement. `subtract_origin_term` adds the
// modified transform's x-independent subtraction.
double truncated_sum_at(const ScalarField& f, int j, double eps, const Vec3& x,
                        bool modified) {
  const Grid3& g = f.grid();
  double h3 = g.spacing * g.spacing * g.spacing;
  double eps2 = eps * eps;
  int ji = j - 1;
  double acc = 0.0;
  for (int i1 = 0; i1 < g.n; ++i1) {
    double d1 = g.min_image(x[0] - g.coord(i1));
    for (int i2 = 0; i2 < g.n; ++i2) {
      double d2 = g.min_image(x[1] - g.coord(i2));
      double s12 = d1 * d1 + d2 * d2;
      for (int i3 = 0; i3 < g.n; ++i3) {
        double d3 = g.min_image(x[2] - g.coord(i3));
        double r2 = s12 + d3 * d3;
        if (r2 < eps2) continue;
        double kd = (ji == 0 ? d1 : ji == 1 ? d2 : d3) / (r2 * r2);
        if (modified) {
          Vec3 y = g.node(i1, i2, i3);
          double ry2 = dot(y, y);
          if (ry2 >= 1.0) kd -= (-y[ji]) / (ry2 * ry2);
        }
        acc += kd * f.at(i1, i2, i3);
      }
    }
  }
  return riesz_normalization() * acc * h3;
}

}  // namespace

double riesz_truncated_at(const ScalarField& f, int j, double eps,
                          const Vec3& x) {
  check_axis(j);
  check_eps(f.grid(), eps);
  return truncated_sum_at(f, j, eps, x, false);
}

double modified_riesz_at(const ScalarField& f, int j, double eps,
                         const Vec3& x) {
  check_axis(j);
  check_eps(f.grid(), eps);
  return truncated_sum_at(f, j, eps, x, true);
}

namespace {

ScalarField truncated_field(const ScalarField& f, int j, double eps,
                            bool modified) {
  const Grid3& g = f.grid();
  ScalarField out(g);
  std::size_t total = g.size();
  parallel_chunks(total, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      int k = int(idx % g.n);
      int jj = int((idx / g.n) % g.n);
      int i = int(idx / (std::size_t(g.n) * g.n));
      out[idx] = truncated_sum_at(f, j, eps, g.node(i, jj, k), modified);
    }
  });
  return out;
}

}  // namespace

ScalarField riesz_truncated(const ScalarField& f, int j, double eps) {
  check_axis(j);
  check_eps(f.grid(), eps);
  return truncated_field(f, j, eps, false);
}

ScalarField modified_riesz(const ScalarField& f, int j, double eps) {
  check_axis(j);
  check_eps(f.grid(), eps);
  return truncated_field(f, j, eps, true);
}

double riesz_tail_estimate(const ScalarField& f) {
  const Grid3& g = f.grid();
  double boundary = 0.0;
  double lim = g.half_width - 1.5 * g.spacing;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Vec3 p = g.node(i, j, k);
        if (std::fabs(p[0]) >= lim || std::fabs(p[1]) >= lim ||
            std::fabs(p[2]) >= lim)
          boundary = std::max(boundary, std::fabs(f.at(i, j, k)));
      }
  // |K| <= c3 / r^3 outside the box; one octave of tail beyond L.
  return riesz_normalization() * boundary * 4.0 * M_PI * std::log(2.0);
}

// --- parity -----------------------------------------------------------------

namespace {

ScalarField even_part(const ScalarField& f) {
  ScalarField r = reflect_y3(f);
  ScalarField out = add(f, r);
  return scaled(0.5, out);
}

ScalarField odd_part(const ScalarField& f) {
  ScalarField r = reflect_y3(f);
  ScalarField out = sub(f, r);
  return scaled(0.5, out);
}

double parity_defect(const ScalarField& f, bool expect_even) {
  ScalarField bad = expect_even ? odd_part(f) : even_part(f);
  return bad.max_abs();
}

}  // namespace

ParityReport parity_check(const ScalarField& f) {
  ParityReport rep;
  ScalarField fe = even_part(f);
  ScalarField fo = odd_part(f);
  double scale = 0.0;
  for (int j = 1; j <= 3; ++j) {
    ScalarField re = riesz(fe, j);
    ScalarField ro = riesz(fo, j);
    scale = std::max({scale, re.max_abs(), ro.max_abs()});
    bool keeps_parity = j != 3;  // R_1, R_2 preserve y3-parity; R_3 flips it
    rep.defects[j - 1][0] = parity_defect(re, keeps_parity);
    rep.defects[j - 1][1] = parity_defect(ro, !keeps_parity);
    rep.max_defect = std::max(
        {rep.max_defect, rep.defects[j - 1][0], rep.defects[j - 1][1]});
  }
  rep.max_relative_defect =
      scale > 0.0 ? rep.max_defect / scale : rep.max_defect;
  return rep;
}

// --- kernel condition spot checks --------------------------------------------

namespace {

Vec3 random_unit(SplitMix64& rng) {
  for (;;) {
    Vec3 v{rng.next_signed(), rng.next_signed(), rng.next_signed()};
    double n2 = dot(v, v);
    if (n2 > 1e-6 && n2 <= 1.0) return normalized(v);
  }
}

}  // namespace

std::vector<KernelSample> standard_kernel_samples(std::uint64_t seed,
                                                  int count) {
  SplitMix64 rng(seed);
  std::vector<KernelSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    KernelSample s;
    s.x = {2.0 * rng.next_signed(), 2.0 * rng.next_signed(),
           2.0 * rng.next_signed()};
    double d = 0.1 + 1.9 * 0.5 * (rng.next_signed() + 1.0);
    s.y = s.x + d * random_unit(rng);
    double dz = 0.5 * d * 0.5 * (rng.next_signed() + 1.0);
    s.z = s.x + dz * random_unit(rng);
    out.push_back(s);
  }
  return out;
}

KernelConditionReport check_kernel_conditions(
    const std::function<double(const Vec3&, const Vec3&)>& kernel, double kappa,
    const std::vector<KernelSample>& samples,
    const std::vector<std::pair<double, double>>& annuli, int quad_points,
    std::uint64_t seed) {
  KernelConditionReport rep;
  rep.sample_count = int(samples.size());
  for (const KernelSample& s : samples) {
    Vec3 dxy = s.x - s.y;
    double rxy = norm(dxy);
    if (rxy == 0.0)
      throw ValidationError("harmonic",
                            "degenerate kernel sample with x == y");
    double rxz = norm(s.x - s.z);
    rep.size_constant = std::max(rep.size_constant,
                                 std::fabs(kernel(s.x, s.y)) * rxy * rxy * rxy);
    if (rxy >= 2.0 * rxz && rxz > 0.0) {
      double lhs = std::fabs(kernel(s.x, s.y) - kernel(s.z, s.y)) +
                   std::fabs(kernel(s.y, s.x) - kernel(s.y, s.z));
      double bound = std::pow(rxy, -3.0) * std::pow(rxz / rxy, kappa);
      rep.smoothness_constant = std::max(rep.smoothness_constant, lhs / bound);
    }
  }
  // Antithetic annulus quadrature around a few centers.
  SplitMix64 rng(seed);
  const Vec3 centers[] = {{0, 0, 0}, {1.0, -0.5, 0.25}};
  for (const auto& [r, R] : annuli) {
    if (!(0.0 < r && r < R))
      throw ValidationError("harmonic", "annulus needs 0 < r < R");
    double vol = 4.0 * M_PI / 3.0 * (R * R * R - r * r * r);
    for (const Vec3& x : centers) {
      double acc_xy = 0.0, acc_yx = 0.0;
      for (int m = 0; m < quad_points; ++m) {
        double u = 0.5 * (rng.next_signed() + 1.0);
        double s = std::cbrt(r * r * r + u * (R * R * R - r * r * r));
        Vec3 dir = random_unit(rng);
        Vec3 y1 = x + s * dir;
        Vec3 y2 = x - s * dir;
        acc_xy += 0.5 * (kernel(x, y1) + kernel(x, y2));
        acc_yx += 0.5 * (kernel(y1, x) + kernel(y2, x));
      }
      rep.max_annulus_integral =
          std::max({rep.max_annulus_integral,
                    std::fabs(acc_xy * vol / quad_points),
                    std::fabs(acc_yx * vol / quad_points)});
    }
  }
  return rep;
}

// --- invariant table ----------------------------------------------------------

namespace {

ScalarField random_band_limited_scalar(const Grid3& g, int kmax,
                                       std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::array<double, 3>> waves;
  std::vector<double> amps, phases;
  for (int k1 = -kmax; k1 <= kmax; ++k1)
    for (int k2 = -kmax; k2 <= kmax; ++k2)
      for (int k3 = 0; k3 <= kmax; ++k3) {
        if (k3 == 0 && (k1 < 0 || (k1 == 0 && k2 <= 0))) continue;
        waves.push_back({double(k1), double(k2), double(k3)});
        amps.push_back(rng.next_signed());
        phases.push_back(M_PI * rng.next_signed());
      }
  double xi0 = M_PI / g.half_width;
  ScalarField f(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Vec3 p = g.node(i, j, k);
        double v = 0.0;
        for (std::size_t w = 0; w < waves.size(); ++w)
          v += amps[w] * std::cos(xi0 * (waves[w][0] * p[0] +
                                         waves[w][1] * p[1] +
                                         waves[w][2] * p[2]) +
                                  phases[w]);
        f.at(i, j, k) = v;
      }
  return f;
}

// Direct DFT probe of the multiplied spectrum at a handful of nodes; returns
// the largest imaginary residue relative to the field scale. This exercises
// the Hermitian-symbol requirement independently of the r2c storage.
double realness_residue(const ScalarField& f, int j) {
  const Grid3& g = f.grid();
  const SpectralTransform& tr = SpectralTransform::get(g.n);
  Spectrum spec(tr.spec_size());
  tr.forward(f.data(), spec.data());
  int half = g.n / 2;
  double scale = std::max(f.max_abs(), 1e-300);
  double worst = 0.0;
  const int probes[][3] = {{half, half, half}, {0, 0, 0},      {3, 5, 7},
                           {half + 1, 2, half - 1}, {1, half, 4}};
  for (const auto& pr : probes) {
    Vec3 x = g.node(pr[0], pr[1], pr[2]);
    std::complex<double> acc = 0.0;
    for (int m1 = 0; m1 < g.n; ++m1) {
      int k1 = tr.signed_mode(m1);
      for (int m2 = 0; m2 < g.n; ++m2) {
        int k2 = tr.signed_mode(m2);
        for (int m3 = 0; m3 <= half; ++m3) {
          if (m1 == half || m2 == half || m3 == half) continue;
          int k3 = m3;
          std::complex<double> c = spec[tr.spec_idx(m1, m2, m3)];
          double kk = std::sqrt(double(k1 * k1 + k2 * k2 + k3 * k3));
          if (kk == 0.0) continue;
          double kj = j == 1 ? k1 : j == 2 ? k2 : k3;
          std::complex<double> sym(0.0, -kj / kk);
          double phase =
              M_PI / g.half_width * (k1 * x[0] + k2 * x[1] + k3 * x[2]);
          std::complex<double> e(std::cos(phase), std::sin(phase));
          acc += sym * c * e;
          if (m3 != 0) {
            // conjugate partner (-k1, -k2, -k3)
            acc += std::conj(sym * c) * std::conj(e);
          }
        }
      }
    }
    acc /= double(g.size());
    worst = std::max(worst, std::fabs(acc.imag()) / scale);
  }
  return worst;
}

}  // namespace

std::vector<VerifyRow> verify_riesz_table(int n, double half_width) {
  Grid3 g = Grid3::make(n, half_width);
  std::vector<VerifyRow> rows;
  auto push = [&](const std::string& name, double value, double threshold) {
    rows.push_back({name, value, threshold, value <= threshold});
  };

  // Single-mode identity R_1 sin(q x1) = -cos(q x1) with q the fundamental.
  double q = M_PI / g.half_width;
  ScalarField sin1 = ScalarField::from_function(
      g, [&](const Vec3& p) { return std::sin(q * p[0]); });
  ScalarField r1 = riesz(sin1, 1);
  double defect = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        defect = std::max(
            defect, std::fabs(r1.at(i, j, k) + std::cos(q * g.coord(i))));
  push("riesz_single_mode", defect, 1e-12);

  ScalarField f = random_band_limited_scalar(g, 3, 0x5eed);
  double m = f.mean();
  for (std::size_t i = 0; i < f.size(); ++i) f[i] -= m;
  double scale = std::max(f.max_abs(), 1e-300);

  ScalarField sumsq(g);
  for (int j = 1; j <= 3; ++j) sumsq = add(sumsq, riesz(riesz(f, j), j));
  double dsq = sub(sumsq, scaled(-1.0, f)).max_abs() / scale;
  push("riesz_squares_sum", dsq, 1e-12);

  ScalarField cst = ScalarField::from_function(
      g, [](const Vec3&) { return 2.5; });
  push("riesz_of_constant", riesz(cst, 2).max_abs(), 1e-13);

  double dcomm =
      sub(riesz(riesz(f, 2), 1), riesz_pair(f, 1, 2)).max_abs() / scale;
  push("riesz_commutation", dcomm, 1e-12);

  ParityReport par = parity_check(f);
  push("parity_max_defect", par.max_relative_defect, 1e-12);

  double mod_const = std::fabs(
      modified_riesz_at(cst, 1, 2.0 * g.spacing, {0.0, 0.0, 0.0}));
  push("modified_riesz_constant_origin", mod_const, 1e-3);

  push("realness_residue", realness_residue(f, 1), 1e-13);

  ScalarField gfld = random_band_limited_scalar(g, 3, 0xfeed);
  ScalarField combo = add(scaled(0.5, f), scaled(-2.0, gfld));
  ScalarField lin = sub(riesz(combo, 3),
                        add(scaled(0.5, riesz(f, 3)), scaled(-2.0, riesz(gfld, 3))));
  push("linearity", lin.max_abs() / scale, 1e-12);

  return rows;
}

}  // namespace nscv
