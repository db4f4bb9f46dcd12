#include "nscv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <sstream>

#include "nscv/errors.hpp"
#include "nscv/kernels.hpp"
#include "nscv/util.hpp"

namespace nscv {

InitialData InitialData::beltrami(double A, double B, double C) {
  InitialData d;
  d.kind = Kind::Beltrami;
  d.A = A;
  d.B = B;
  d.C = C;
  return d;
}

InitialData InitialData::taylor_green() {
  InitialData d;
  d.kind = Kind::TaylorGreen;
  return d;
}

InitialData InitialData::random_band_limited(std::uint64_t seed, int kmax) {
  InitialData d;
  d.kind = Kind::RandomBandLimited;
  d.seed = seed;
  d.kmax = kmax;
  return d;
}

InitialData InitialData::gaussian_vortex(double width) {
  InitialData d;
  d.kind = Kind::GaussianVortex;
  d.width = width;
  return d;
}

namespace {

void require_unit_wavenumber(const Grid3& g) {
  double m = g.half_width / M_PI;
  if (std::fabs(m - std::lround(m)) > 1e-9 || std::lround(m) < 1)
    throw ValidationError("solver",
                          "this initial condition needs the box half-width to "
                          "be an integer multiple of pi");
}

VectorField3 initial_field(const Grid3& g, const InitialData& init) {
  switch (init.kind) {
    case InitialData::Kind::Beltrami: {
      require_unit_wavenumber(g);
      double A = init.A, B = init.B, C = init.C;
      return VectorField3::from_function(g, [=](const Vec3& x) {
        return Vec3{A * std::sin(x[2]) + C * std::cos(x[1]),
                    B * std::sin(x[0]) + A * std::cos(x[2]),
                    C * std::sin(x[1]) + B * std::cos(x[0])};
      });
    }
    case InitialData::Kind::TaylorGreen: {
      require_unit_wavenumber(g);
      return VectorField3::from_function(g, [](const Vec3& x) {
        return Vec3{std::sin(x[0]) * std::cos(x[1]) * std::cos(x[2]),
                    -std::cos(x[0]) * std::sin(x[1]) * std::cos(x[2]), 0.0};
      });
    }
    case InitialData::Kind::RandomBandLimited: {
      VectorField3 u(g);
      double xi0 = M_PI / g.half_width;
      int kmax = std::min(init.kmax, g.n / 3);
      for (int c = 0; c < 3; ++c) {
        SplitMix64 rng(init.seed * 3 + c + 1);
        struct Wave {
          double k1, k2, k3, amp, phase;
        };
        std::vector<Wave> waves;
        for (int k1 = -kmax; k1 <= kmax; ++k1)
          for (int k2 = -kmax; k2 <= kmax; ++k2)
            for (int k3 = 0; k3 <= kmax; ++k3) {
              if (k3 == 0 && (k1 < 0 || (k1 == 0 && k2 <= 0))) continue;
              waves.push_back({double(k1), double(k2), double(k3),
                               rng.next_signed(), M_PI * rng.next_signed()});
            }
        for (int i = 0; i < g.n; ++i)
          for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
              Vec3 p = g.node(i, j, k);
              double v = 0.0;
              for (const Wave& w : waves)
                v += w.amp * std::cos(xi0 * (w.k1 * p[0] + w.k2 * p[1] +
                                             w.k3 * p[2]) +
                                      w.phase);
              u.comp(c).at(i, j, k) = v;
            }
      }
      double m = u.max_norm();
      if (m > 0.0) u = scaled(1.0 / m, u);
      return u;
    }
    case InitialData::Kind::GaussianVortex: {
      double w = init.width > 0.0 ? init.width : g.half_width / 6.0;
      if (w > g.half_width / 5.0)
        throw ValidationError("solver",
                              "vortex width too large for the box (needs "
                              "boundary decay below 1e-12)");
      double w2 = w * w;
      // u = curl (0, 0, psi) with psi a Gaussian: analytic derivatives.
      return VectorField3::from_function(g, [=](const Vec3& x) {
        double psi = std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / w2);
        return Vec3{-2.0 * x[1] / w2 * psi, 2.0 * x[0] / w2 * psi, 0.0};
      });
    }
  }
  throw ValidationError("solver", "unknown initial condition");
}

inline double mode_of(int a, int k1, int k2, int k3) {
  return a == 0 ? k1 : a == 1 ? k2 : k3;
}

// Iterates stored modes; fn(index, k1, k2, k3).
template <typename Fn>
void for_each_mode(const Grid3& g, Fn&& fn) {
  const SpectralTransform& tr = SpectralTransform::get(g.n);
  int half = g.n / 2;
  for (int m1 = 0; m1 < g.n; ++m1) {
    int k1 = tr.signed_mode(m1);
    for (int m2 = 0; m2 < g.n; ++m2) {
      int k2 = tr.signed_mode(m2);
      std::size_t base = (std::size_t(m1) * g.n + m2) * (half + 1);
      for (int m3 = 0; m3 <= half; ++m3) fn(base + m3, k1, k2, m3);
    }
  }
}

}  // namespace

void project_div_free(std::array<Spectrum, 3>& uhat, const Grid3& g) {
  for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
    double kk = double(k1 * k1 + k2 * k2 + k3 * k3);
    if (kk == 0.0) return;
    std::complex<double> s = double(k1) * uhat[0][idx] +
                             double(k2) * uhat[1][idx] +
                             double(k3) * uhat[2][idx];
    s /= kk;
    uhat[0][idx] -= double(k1) * s;
    uhat[1][idx] -= double(k2) * s;
    uhat[2][idx] -= double(k3) * s;
  });
}

void dealias_two_thirds(std::array<Spectrum, 3>& uhat, const Grid3& g) {
  int keep = g.n / 3;
  for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
    if (std::abs(k1) > keep || std::abs(k2) > keep || std::abs(k3) > keep)
      for (int c = 0; c < 3; ++c) uhat[c][idx] = 0.0;
  });
}

double max_spectral_divergence(const SpectralState& s) {
  double scale = 0.0;
  for (int c = 0; c < 3; ++c)
    for (const auto& z : s.uhat[c]) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for_each_mode(s.grid, [&](std::size_t idx, int k1, int k2, int k3) {
    double kk = std::sqrt(double(k1 * k1 + k2 * k2 + k3 * k3));
    if (kk == 0.0) return;
    std::complex<double> d = double(k1) * s.uhat[0][idx] +
                             double(k2) * s.uhat[1][idx] +
                             double(k3) * s.uhat[2][idx];
    worst = std::max(worst, std::abs(d) / kk);
  });
  return worst / scale;
}

SpectralState make_state(const Grid3& g, const InitialData& init, double nu) {
  if (!(nu > 0.0)) throw ValidationError("solver", "viscosity must be positive");
  VectorField3 u = initial_field(g, init);
  const SpectralTransform& tr = SpectralTransform::get(g.n);
  SpectralState s;
  s.grid = g;
  s.nu = nu;
  for (int c = 0; c < 3; ++c) {
    s.uhat[c].resize(tr.spec_size());
    tr.forward(u.comp(c).data(), s.uhat[c].data());
  }
  dealias_two_thirds(s.uhat, g);
  project_div_free(s.uhat, g);
  return s;
}

VectorField3 to_physical(const SpectralState& s) {
  const SpectralTransform& tr = SpectralTransform::get(s.grid.n);
  VectorField3 u(s.grid);
  for (int c = 0; c < 3; ++c) tr.inverse(s.uhat[c].data(), u.comp(c).data());
  return u;
}

VectorField3 vorticity_physical(const SpectralState& s) {
  const SpectralTransform& tr = SpectralTransform::get(s.grid.n);
  double xi0 = M_PI / s.grid.half_width;
  std::array<Spectrum, 3> what;
  for (int c = 0; c < 3; ++c) what[c].resize(tr.spec_size());
  for_each_mode(s.grid, [&](std::size_t idx, int k1, int k2, int k3) {
    std::complex<double> i_xi1(0.0, xi0 * k1);
    std::complex<double> i_xi2(0.0, xi0 * k2);
    std::complex<double> i_xi3(0.0, xi0 * k3);
    what[0][idx] = i_xi2 * s.uhat[2][idx] - i_xi3 * s.uhat[1][idx];
    what[1][idx] = i_xi3 * s.uhat[0][idx] - i_xi1 * s.uhat[2][idx];
    what[2][idx] = i_xi1 * s.uhat[1][idx] - i_xi2 * s.uhat[0][idx];
  });
  VectorField3 w(s.grid);
  for (int c = 0; c < 3; ++c) tr.inverse(what[c].data(), w.comp(c).data());
  return w;
}

VectorField3 cross_field(const VectorField3& a, const VectorField3& b) {
  VectorField3 out(a.grid());
  const double *a1 = a.comp(0).data(), *a2 = a.comp(1).data(),
               *a3 = a.comp(2).data();
  const double *b1 = b.comp(0).data(), *b2 = b.comp(1).data(),
               *b3 = b.comp(2).data();
  double *o1 = out.comp(0).data(), *o2 = out.comp(1).data(),
         *o3 = out.comp(2).data();
  for (std::size_t i = 0; i < a.comp(0).size(); ++i) {
    o1[i] = a2[i] * b3[i] - a3[i] * b2[i];
    o2[i] = a3[i] * b1[i] - a1[i] * b3[i];
    o3[i] = a1[i] * b2[i] - a2[i] * b1[i];
  }
  return out;
}

double energy(const SpectralState& s) {
  const Grid3& g = s.grid;
  int half = g.n / 2;
  double acc = 0.0;
  const SpectralTransform& tr = SpectralTransform::get(g.n);
  for (int c = 0; c < 3; ++c) {
    for (int m1 = 0; m1 < g.n; ++m1)
      for (int m2 = 0; m2 < g.n; ++m2)
        for (int m3 = 0; m3 <= half; ++m3) {
          double a = std::norm(s.uhat[c][tr.spec_idx(m1, m2, m3)]);
          acc += (m3 == 0 || m3 == half) ? a : 2.0 * a;
        }
  }
  double vol = 8.0 * g.half_width * g.half_width * g.half_width;
  double n3 = double(g.size());
  return 0.5 * vol * acc / (n3 * n3);
}

namespace {

// Projected rotational-form nonlinearity plus the viscous term.
void compute_rhs(const SpectralState& s, const std::array<Spectrum, 3>& uhat,
                 std::array<Spectrum, 3>& out, double* max_speed) {
  const Grid3& g = s.grid;
  const SpectralTransform& tr = SpectralTransform::get(g.n);
  SpectralState tmp;
  tmp.grid = g;
  tmp.nu = s.nu;
  tmp.uhat = uhat;
  VectorField3 u = to_physical(tmp);
  if (max_speed) *max_speed = u.max_norm();
  VectorField3 w = vorticity_physical(tmp);
  VectorField3 nl = cross_field(u, w);
  for (int c = 0; c < 3; ++c) {
    out[c].resize(tr.spec_size());
    tr.forward(nl.comp(c).data(), out[c].data());
  }
  dealias_two_thirds(out, g);
  project_div_free(out, g);
  double xi0 = M_PI / g.half_width;
  for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3) {
    double visc = s.nu * xi0 * xi0 * double(k1 * k1 + k2 * k2 + k3 * k3);
    for (int c = 0; c < 3; ++c) out[c][idx] -= visc * uhat[c][idx];
  });
}

void axpy_spec(double a, const std::array<Spectrum, 3>& x,
               std::array<Spectrum, 3>& y) {
  for (int c = 0; c < 3; ++c)
    kernels::axpby(a, reinterpret_cast<const double*>(x[c].data()), 1.0,
                   reinterpret_cast<double*>(y[c].data()), 2 * x[c].size());
}

}  // namespace

void step(SpectralState& s, double dt) {
  if (!(dt > 0.0)) throw ValidationError("solver", "time step must be positive");
  const Grid3& g = s.grid;
  std::array<Spectrum, 3> k1, k2, k3, k4, stage;

  double max_speed = 0.0;
  compute_rhs(s, s.uhat, k1, &max_speed);
  if (max_speed > 0.0 && dt > 0.5 * g.spacing / max_speed) {
    std::ostringstream os;
    os << "CFL violation: dt = " << dt << " exceeds 0.5 h / max|u| = "
       << 0.5 * g.spacing / max_speed;
    throw NumericalError("solver", os.str());
  }

  stage = s.uhat;
  axpy_spec(0.5 * dt, k1, stage);
  compute_rhs(s, stage, k2, nullptr);

  stage = s.uhat;
  axpy_spec(0.5 * dt, k2, stage);
  compute_rhs(s, stage, k3, nullptr);

  stage = s.uhat;
  axpy_spec(dt, k3, stage);
  compute_rhs(s, stage, k4, nullptr);

  axpy_spec(dt / 6.0, k1, s.uhat);
  axpy_spec(dt / 3.0, k2, s.uhat);
  axpy_spec(dt / 3.0, k3, s.uhat);
  axpy_spec(dt / 6.0, k4, s.uhat);
  s.t += dt;

  for (int c = 0; c < 3; ++c)
    for (const auto& z : s.uhat[c])
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw NumericalError("solver", "divergence: non-finite state");
}

ScalarField pressure_from_velocity(const SpectralState& s) {
  const Grid3& g = s.grid;
  VectorField3 u = to_physical(s);
  ScalarField p(g);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      ScalarField prod = pointwise(u.comp(i), u.comp(j));
      ScalarField term = apply_mode_multiplier(
          prod,
          [i, j](int k1, int k2, int k3) {
            if (k1 == 0 && k2 == 0 && k3 == 0)
              return std::complex<double>(0.0);
            double kk = double(k1 * k1 + k2 * k2 + k3 * k3);
            double ki = i == 0 ? k1 : i == 1 ? k2 : k3;
            double kj = j == 0 ? k1 : j == 1 ? k2 : k3;
            return std::complex<double>(-ki * kj / kk, 0.0);
          },
          true);
      p = add(p, term);
    }
  double m = p.mean();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= m;
  return p;
}

RunResult run(const Grid3& g, const InitialData& init, double nu, double dt,
              double t_end, double snapshot_every, const std::string& out_dir) {
  if (!(dt > 0.0)) throw ValidationError("solver", "time step must be positive");
  if (!(t_end > 0.0))
    throw ValidationError("solver", "end time must be positive");
  std::filesystem::create_directories(out_dir);

  SpectralState s = make_state(g, init, nu);
  RunResult result;
  int snap_index = 0;
  auto write_snap = [&](const SpectralState& st) {
    std::ostringstream name;
    name << out_dir << "/snapshot_" << std::setw(4) << std::setfill('0')
         << snap_index++ << ".nscv";
    write_snapshot(name.str(), to_physical(st), st.t, st.nu);
    result.paths.push_back(name.str());
    result.times.push_back(st.t);
  };

  write_snap(s);
  result.step_energies.push_back(energy(s));

  double next_snap =
      snapshot_every > 0.0 ? snapshot_every
                           : std::numeric_limits<double>::infinity();
  long nsteps = std::lround(t_end / dt);
  if (nsteps < 1 || std::fabs(nsteps * dt - t_end) > 1e-9 * std::max(1.0, t_end))
    nsteps = long(std::ceil(t_end / dt - 1e-12));
  try {
    for (long i = 1; i <= nsteps; ++i) {
      double target = std::min(t_end, i * dt);
      double h = target - s.t;
      if (h <= 0.0) break;
      step(s, h);
      s.t = target;  // keep stamps drift-free
      result.step_energies.push_back(energy(s));
      if (s.t + 1e-12 >= next_snap || i == nsteps) {
        write_snap(s);
        while (next_snap <= s.t + 1e-12) next_snap += snapshot_every;
      }
    }
    result.completed = true;
  } catch (const Error& e) {
    result.completed = false;
    result.error = e.what();
  }
  return result;
}

}  // namespace nscv
