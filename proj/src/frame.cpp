#include "nscv/frame.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "nscv/errors.hpp"
#include "nscv/fft.hpp"
#include "nscv/kernels.hpp"
#include "nscv/util.hpp"

namespace nscv {

std::vector<MaxPoint> find_max_points(const VectorField3& v, double tie_tol,
                                      double time) {
  const Grid3& g = v.grid();
  double max_sq = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Vec3 w = v.at(i, j, k);
        max_sq = std::max(max_sq, dot(w, w));
      }
  if (max_sq == 0.0)
    throw NumericalError("frame", "field is identically zero: no maximum point");
  double cutoff = (1.0 - tie_tol) * std::sqrt(max_sq);
  double cutoff_sq = cutoff * cutoff;
  std::vector<MaxPoint> out;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Vec3 w = v.at(i, j, k);
        double s = dot(w, w);
        if (s >= cutoff_sq) {
          MaxPoint mp;
          mp.location = g.node(i, j, k);
          mp.speed = std::sqrt(s);
          mp.time = time;
          mp.index = {i, j, k};
          out.push_back(mp);
        }
      }
  return out;
}

Frame build_frame(const Vec3& velocity_at_max) {
  double speed = norm(velocity_at_max);
  if (speed == 0.0)
    throw ValidationError("frame", "degenerate frame: zero velocity at the "
                                   "maximum point");
  Frame fr;
  fr.tau = {velocity_at_max[0] / speed, velocity_at_max[1] / speed,
            velocity_at_max[2] / speed};
  int best_axis = 0;
  double best = std::fabs(fr.tau[0]);
  for (int a = 1; a < 3; ++a) {
    double c = std::fabs(fr.tau[a]);
    if (c < best) {
      best = c;
      best_axis = a;
    }
  }
  Vec3 e{0, 0, 0};
  e[best_axis] = 1.0;
  double proj = dot(e, fr.tau);
  fr.n1 = normalized(e - proj * fr.tau);
  fr.n2 = cross(fr.tau, fr.n1);
  return fr;
}

Frame build_frame(const VectorField3& v, const MaxPoint& mp) {
  return build_frame(v.at(mp.index[0], mp.index[1], mp.index[2]));
}

// --- resampling ---------------------------------------------------------------

namespace {

bool identity_frame(const Frame& fr, const Vec3& xm) {
  return fr.n1 == Vec3{1, 0, 0} && fr.n2 == Vec3{0, 1, 0} &&
         fr.tau == Vec3{0, 0, 1} && xm[0] == 0.0 && xm[1] == 0.0 &&
         xm[2] == 0.0;
}

struct Mode {
  int k1, k2, k3;
  double re, im;
};

std::vector<Mode> mode_list(const ScalarField& f) {
  const Grid3& g = f.grid();
  const SpectralTransform& tr = SpectralTransform::get(g.n);
  Spectrum spec(tr.spec_size());
  tr.forward(f.data(), spec.data());
  int half = g.n / 2;
  std::vector<Mode> modes;
  modes.reserve(tr.spec_size());
  for (int m1 = 0; m1 < g.n; ++m1) {
    if (m1 == half) continue;
    int k1 = tr.signed_mode(m1);
    for (int m2 = 0; m2 < g.n; ++m2) {
      if (m2 == half) continue;
      int k2 = tr.signed_mode(m2);
      for (int m3 = 0; m3 < half; ++m3) {
        std::complex<double> c = spec[tr.spec_idx(m1, m2, m3)];
        if (c.real() == 0.0 && c.imag() == 0.0) continue;
        // FFTW indexes nodes from 0 while coordinates start at -L; the
        // half-period shift contributes (-1)^(k1+k2+k3) per mode.
        double sign = ((k1 + k2 + m3) & 1) ? -1.0 : 1.0;
        modes.push_back({k1, k2, m3, sign * c.real(), sign * c.imag()});
        if (m3 != 0)
          modes.push_back({-k1, -k2, -m3, sign * c.real(), -sign * c.imag()});
      }
    }
  }
  return modes;
}

// Evaluates the trigonometric interpolant of f at x_M + Q y for every grid
// node y, where Q has columns (n1, n2, tau). Rank-1 accumulation per mode
// with phase ramps per axis; parallel over disjoint j1 slabs, so the result
// is independent of the thread count.
ScalarField resample_spectral(const ScalarField& f, const Frame& fr,
                              const Vec3& xm) {
  const Grid3& g = f.grid();
  int n = g.n;
  double xi0 = M_PI / g.half_width;
  std::vector<Mode> modes = mode_list(f);
  std::vector<double> out_re(g.size(), 0.0), out_im(g.size(), 0.0);

  parallel_chunks(std::size_t(n), [&](std::size_t lo, std::size_t hi) {
    std::vector<double> b_re(n), b_im(n), d_re(n), d_im(n);
    for (const Mode& mo : modes) {
      Vec3 k{double(mo.k1), double(mo.k2), double(mo.k3)};
      double base_phase = xi0 * dot(k, xm);
      double t1 = xi0 * dot(k, fr.n1) * g.spacing;
      double t2 = xi0 * dot(k, fr.n2) * g.spacing;
      double t3 = xi0 * dot(k, fr.tau) * g.spacing;
      // axis ramps exp(i * t * (j - n/2)), j = 0..n-1
      auto fill = [&](double t, std::vector<double>& re,
                      std::vector<double>& im) {
        double c0 = std::cos(-t * (n / 2)), s0 = std::sin(-t * (n / 2));
        double cs = std::cos(t), ss = std::sin(t);
        for (int j = 0; j < n; ++j) {
          re[j] = c0;
          im[j] = s0;
          double cn = c0 * cs - s0 * ss;
          s0 = c0 * ss + s0 * cs;
          c0 = cn;
        }
      };
      fill(t2, b_re, b_im);
      fill(t3, d_re, d_im);
      double wre = mo.re * std::cos(base_phase) - mo.im * std::sin(base_phase);
      double wim = mo.re * std::sin(base_phase) + mo.im * std::cos(base_phase);
      for (std::size_t j1 = lo; j1 < hi; ++j1) {
        double p1 = t1 * (double(j1) - n / 2);
        double a_re = std::cos(p1), a_im = std::sin(p1);
        double w1re = wre * a_re - wim * a_im;
        double w1im = wre * a_im + wim * a_re;
        for (int j2 = 0; j2 < n; ++j2) {
          double w2re = w1re * b_re[j2] - w1im * b_im[j2];
          double w2im = w1re * b_im[j2] + w1im * b_re[j2];
          std::size_t row = (j1 * n + j2) * n;
          kernels::caxpy(w2re, w2im, d_re.data(), d_im.data(),
                         out_re.data() + row, out_im.data() + row,
                         std::size_t(n));
        }
      }
    }
  });

  ScalarField out(g);
  double scale = 1.0 / double(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = out_re[i] * scale;
  return out;
}

ScalarField resample_trilinear(const ScalarField& f, const Frame& fr,
                               const Vec3& xm) {
  const Grid3& g = f.grid();
  int n = g.n;
  int mask = n - 1;
  ScalarField out(g);
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2)
      for (int j3 = 0; j3 < n; ++j3) {
        double y1 = (j1 - n / 2) * g.spacing;
        double y2 = (j2 - n / 2) * g.spacing;
        double y3 = (j3 - n / 2) * g.spacing;
        Vec3 x = xm + y1 * fr.n1 + y2 * fr.n2 + y3 * fr.tau;
        double t[3];
        int base[3];
        for (int a = 0; a < 3; ++a) {
          double s = (x[a] + g.half_width) / g.spacing;
          double fl = std::floor(s);
          t[a] = s - fl;
          base[a] = int(fl);
        }
        double acc = 0.0;
        for (int c = 0; c < 8; ++c) {
          int o1 = c & 1, o2 = (c >> 1) & 1, o3 = (c >> 2) & 1;
          double w = (o1 ? t[0] : 1.0 - t[0]) * (o2 ? t[1] : 1.0 - t[1]) *
                     (o3 ? t[2] : 1.0 - t[2]);
          acc += w * f.at((base[0] + o1) & mask, (base[1] + o2) & mask,
                          (base[2] + o3) & mask);
        }
        out.at(j1, j2, j3) = acc;
      }
  return out;
}

}  // namespace

FramedField to_frame(const VectorField3& v, const Frame& fr, const Vec3& xm,
                     ResampleMethod method) {
  FramedField out;
  out.frame = fr;
  out.origin = xm;
  const Grid3& g = v.grid();
  if (identity_frame(fr, xm)) {
    out.u = v;
    return out;
  }
  VectorField3 cart(g);
  for (int c = 0; c < 3; ++c)
    cart.comp(c) = method == ResampleMethod::Spectral
                       ? resample_spectral(v.comp(c), fr, xm)
                       : resample_trilinear(v.comp(c), fr, xm);
  out.u = VectorField3(g);
  const Vec3 axes[3] = {fr.n1, fr.n2, fr.tau};
  for (std::size_t i = 0; i < g.size(); ++i) {
    Vec3 w{cart.comp(0)[i], cart.comp(1)[i], cart.comp(2)[i]};
    for (int c = 0; c < 3; ++c) out.u.comp(c)[i] = dot(w, axes[c]);
  }
  return out;
}

// --- decomposition -------------------------------------------------------------

namespace {

ScalarField odd_part_y3(const ScalarField& f) {
  const Grid3& g = f.grid();
  ScalarField out(g);
  int mask = g.n - 1;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        out.at(i, j, k) =
            0.5 * (f.at(i, j, k) - f.at(i, j, (g.n - k) & mask));
  return out;
}

ScalarField even_part_y3(const ScalarField& f) {
  const Grid3& g = f.grid();
  ScalarField out(g);
  int mask = g.n - 1;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        out.at(i, j, k) =
            0.5 * (f.at(i, j, k) + f.at(i, j, (g.n - k) & mask));
  return out;
}

VectorField3 parity_projection(const VectorField3& u) {
  VectorField3 sym(u.grid());
  sym.comp(0) = odd_part_y3(u.comp(0));
  sym.comp(1) = odd_part_y3(u.comp(1));
  sym.comp(2) = even_part_y3(u.comp(2));
  return sym;
}

}  // namespace

Decomposition symmetrize(const VectorField3& u) {
  Decomposition dec;
  dec.sym = parity_projection(u);
  dec.rem = sub(u, dec.sym);
  return dec;
}

Decomposition windowed_symmetrize(const VectorField3& u, double radius) {
  const Grid3& g = u.grid();
  if (!(radius > 0.0) || 2.0 * radius >= g.half_width)
    throw ValidationError(
        "frame", "window radius must satisfy 0 < 2*radius < box half-width");
  // Smooth transition chi(rho): 1 for rho <= R, 0 for rho >= 2R. Evaluated
  // from integer index offsets so chi is exactly even under the reflection.
  auto smooth_step = [](double t) {
    // t in (0,1): C^inf partition q(1-t)/(q(t)+q(1-t)), q(s)=exp(-1/s)
    double qa = std::exp(-1.0 / t);
    double qb = std::exp(-1.0 / (1.0 - t));
    return qb / (qa + qb);
  };
  ScalarField chi(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        double y1 = (i - g.n / 2) * g.spacing;
        double y2 = (j - g.n / 2) * g.spacing;
        double y3 = (k - g.n / 2) * g.spacing;
        double rho = std::sqrt(y1 * y1 + y2 * y2 + y3 * y3);
        double t = (rho - radius) / radius;
        double v = t <= 0.0 ? 1.0 : t >= 1.0 ? 0.0 : smooth_step(t);
        chi.at(i, j, k) = v;
      }
  Decomposition dec;
  VectorField3 proj = parity_projection(u);
  dec.sym = VectorField3(g);
  for (int c = 0; c < 3; ++c) dec.sym.comp(c) = pointwise(chi, proj.comp(c));
  dec.rem = sub(u, dec.sym);
  dec.window_radius = radius;
  return dec;
}

InfimizeResult infimize_decomposition(
    const VectorField3& u, const std::vector<double>& window_radii,
    const std::function<double(const Decomposition&)>& objective) {
  InfimizeResult best;
  best.dec = symmetrize(u);
  best.value = objective(best.dec);
  best.candidate_index = 0;
  std::size_t idx = 1;
  for (double r : window_radii) {
    Decomposition cand = windowed_symmetrize(u, r);
    double v = objective(cand);
    if (v < best.value) {
      best.dec = std::move(cand);
      best.value = v;
      best.candidate_index = idx;
    }
    ++idx;
  }
  return best;
}

// --- counterexample family -----------------------------------------------------

VectorField3 counterexample_field(const Grid3& g, const AngularProfile& p) {
  if (!(p.magnitude > 0.0))
    throw ValidationError("frame", "profile magnitude must be positive");
  if (!(p.bump_width > 0.0) || !(p.theta_width > 0.0))
    throw ValidationError("frame", "profile widths must be positive");
  if (p.bump_width > g.half_width / 5.0)
    throw ValidationError("frame",
                          "bump width too large for the box (speed must decay "
                          "below 1e-12 at the boundary)");
  VectorField3 u(g);
  double w2 = p.bump_width * p.bump_width;
  double tw2 = p.theta_width * p.theta_width;
  double worst_consistency = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        double y1 = (i - g.n / 2) * g.spacing;
        double y2 = (j - g.n / 2) * g.spacing;
        double y3 = (k - g.n / 2) * g.spacing;
        double rho2 = y1 * y1 + y2 * y2 + y3 * y3;
        double mag = p.magnitude * std::exp(-rho2 / w2);
        double theta1 = p.lambda * y3 * std::exp(-rho2 / tw2);
        double theta3 = p.theta3_scale * theta1;
        // Sign-symmetric trig so node parity is exact to the bit.
        double a1 = std::fabs(theta1);
        double s1 = std::copysign(std::sin(a1), theta1);
        double c3v = std::cos(std::fabs(theta3));
        double t = 1.0 - s1 * s1 - c3v * c3v;
        worst_consistency = std::max(worst_consistency, t);
        double s2 = t > 1e-13 ? std::sqrt(t) : 0.0;
        u.comp(0).at(i, j, k) = mag * s1;
        u.comp(1).at(i, j, k) = mag * s2;
        u.comp(2).at(i, j, k) = mag * c3v;
      }
  if (worst_consistency > 1.0 + 1e-12)
    throw ValidationError("frame",
                          "inconsistent angular profile: sin^2(theta1) + "
                          "sin^2(theta2) exceeds 1");
  return u;
}

}  // namespace nscv
