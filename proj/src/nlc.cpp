#include "nscv/nlc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "nscv/errors.hpp"
#include "nscv/util.hpp"

namespace nscv {

VSpec VSpec::defaults() {
  VSpec v;
  v.p = 4.0;
  v.phi = make_phi(3, 4.0, 0.5, -0.75, -0.75);
  v.balls = BallStrategy::dyadic(0);
  return v;
}

std::vector<Ball> VSpec::resolve_balls(const Grid3& g) const {
  BallStrategy s = balls;
  if (s.kind == BallStrategy::Kind::Dyadic && s.stride <= 0)
    s.stride = std::max(1, g.n / 8);
  if (s.radii.empty() && s.kind == BallStrategy::Kind::Dyadic) {
    for (double frac : {0.125, 0.25, 0.5}) {
      double r = frac * g.half_width;
      if (r >= 2.0 * g.spacing && r < g.half_width) s.radii.push_back(r);
    }
  }
  return sample_balls(g, s);
}

std::string VSpec::family_label(const Grid3& g) const {
  BallStrategy s = balls;
  if (s.kind == BallStrategy::Kind::Dyadic && s.stride <= 0)
    s.stride = std::max(1, g.n / 8);
  return s.describe(g);
}

NlcConfig NlcConfig::defaults() {
  NlcConfig cfg;
  cfg.vspec = VSpec::defaults();
  return cfg;
}

void NlcConfig::validate() const {
  if (!(alpha < 2.0))
    throw ValidationError("nlc", "exponent alpha must be < 2");
  if (!(C > 0.0)) throw ValidationError("nlc", "constant C must be positive");
  if (!(tie_tol >= 0.0))
    throw ValidationError("nlc", "tie tolerance must be non-negative");
}

std::vector<double> NlcConfig::resolve_window_radii(const Grid3& g) const {
  if (!window_radii.empty()) return window_radii;
  std::vector<double> out;
  for (double f : window_radii_rel) {
    double r = f * g.half_width;
    if (r > 0.0 && 2.0 * r < g.half_width) out.push_back(r);
  }
  return out;
}

NlcBreakdown nlc_functional_breakdown(const Decomposition& dec,
                                      const VSpec& vspec) {
  const Grid3& g = dec.sym.grid();
  std::vector<Ball> balls = vspec.resolve_balls(g);
  std::string label = vspec.family_label(g);
  NlcBreakdown bd;
  for (int i = 0; i < 3; ++i) {
    bd.norm_r[i] =
        pointed_campanato_norm(dec.rem.comp(i), vspec.p, vspec.phi, balls,
                               label)
            .value;
    bd.norm_dr[i] = pointed_campanato_norm(derivative(dec.rem.comp(i), 2),
                                           vspec.p, vspec.phi, balls, label)
                        .value;
    bd.norm_u[i] =
        pointed_campanato_norm(dec.sym.comp(i), vspec.p, vspec.phi, balls,
                               label)
            .value;
    bd.norm_du[i] = pointed_campanato_norm(derivative(dec.sym.comp(i), 2),
                                           vspec.p, vspec.phi, balls, label)
                        .value;
  }
  double value = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      value += bd.norm_dr[i] * bd.norm_u[j] + bd.norm_r[i] * bd.norm_du[j] +
               bd.norm_r[i] * bd.norm_dr[j];
  bd.value = value;
  return bd;
}

double nlc_functional(const Decomposition& dec, const VSpec& vspec) {
  return nlc_functional_breakdown(dec, vspec).value;
}

double nlc_threshold(const NlcConfig& cfg, double t, double u3_at_origin) {
  if (!(t < cfg.T))
    throw ValidationError("nlc", "threshold needs t < T");
  if (!(u3_at_origin > 0.0))
    throw ValidationError("nlc", "threshold needs u3(0) > 0");
  return cfg.C * std::pow(cfg.T - t, -cfg.alpha) / u3_at_origin;
}

InfimizeResult infimize_nlc(const VectorField3& u, const VSpec& vspec,
                            const std::vector<double>& window_radii) {
  return infimize_decomposition(u, window_radii, [&](const Decomposition& d) {
    return nlc_functional(d, vspec);
  });
}

// --- pressure formulas --------------------------------------------------------

namespace {

// Value at the origin node of sum_{i,j} R_i R_j d3(m_ij) for nine product
// fields m_ij, via one accumulated multiplier pass per (i, j).
double riesz_pair_d3_sum_origin(const std::array<ScalarField, 9>& m) {
  const Grid3& g = m[0].grid();
  ScalarField total(g);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const ScalarField& f = m[std::size_t(i) * 3 + j];
      ScalarField term = apply_mode_multiplier(
          f,
          [&, i, j](int k1, int k2, int k3) {
            if (k1 == 0 && k2 == 0 && k3 == 0)
              return std::complex<double>(0.0);
            double kk = double(k1 * k1 + k2 * k2 + k3 * k3);
            double ki = i == 0 ? k1 : i == 1 ? k2 : k3;
            double kj = j == 0 ? k1 : j == 1 ? k2 : k3;
            double xi0 = M_PI / g.half_width;
            // (-xi_i xi_j / |xi|^2) * (i xi_3)
            return std::complex<double>(0.0, -ki * kj / kk * xi0 * k3);
          },
          true);
      total = add(total, term);
    }
  int o = g.origin_index();
  return total.at(o, o, o);
}

std::array<ScalarField, 9> products_of(const VectorField3& a,
                                       const VectorField3& b) {
  std::array<ScalarField, 9> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out[std::size_t(i) * 3 + j] = pointwise(a.comp(i), b.comp(j));
  return out;
}

}  // namespace

PressureDerivativeReport pressure_derivative_origin(const Decomposition& dec) {
  const VectorField3& U = dec.sym;
  const VectorField3& r = dec.rem;
  VectorField3 u = add(U, r);

  PressureDerivativeReport rep;
  rep.via_full = riesz_pair_d3_sum_origin(products_of(u, u));
  rep.symmetric_part = riesz_pair_d3_sum_origin(products_of(U, U));
  std::array<ScalarField, 9> mixed;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      ScalarField t = pointwise(r.comp(i), U.comp(j));
      t = add(t, pointwise(U.comp(i), r.comp(j)));
      t = add(t, pointwise(r.comp(i), r.comp(j)));
      mixed[std::size_t(i) * 3 + j] = std::move(t);
    }
  rep.via_remainder = riesz_pair_d3_sum_origin(mixed);
  return rep;
}

LemmaReport lemma_checks(const FramedField& framed, double origin_tol) {
  const Grid3& g = framed.u.grid();
  int o = g.origin_index();
  Vec3 u0 = framed.u.at(o, o, o);
  double speed0 = norm(u0);
  double max_speed = framed.u.max_norm();
  if (speed0 < (1.0 - origin_tol) * max_speed)
    throw ValidationError("frame",
                          "frame origin is not a maximum point of |u| within "
                          "tolerance");
  LemmaReport rep;
  Decomposition dec = symmetrize(framed.u);
  PressureDerivativeReport pd = pressure_derivative_origin(dec);
  double u3 = framed.u.comp(2).at(o, o, o);
  rep.u3_dp3 = u3 * pd.via_remainder;
  ScalarField lap = laplacian(framed.u.comp(2), DiffMethod::Fd2);
  rep.u3_lap_u3 = u3 * lap.at(o, o, o);
  return rep;
}

double bkm_integrand(const VectorField3& v) {
  return curl(v).max_norm();
}

SeriesAccumulation accumulate_series(const std::vector<double>& times,
                                     const std::vector<double>& bkm,
                                     const std::vector<double>& linf) {
  if (times.size() != bkm.size() || times.size() != linf.size())
    throw ValidationError("series", "mismatched series lengths");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("series", "time stamps must increase strictly");
  SeriesAccumulation acc;
  for (std::size_t i = 1; i < times.size(); ++i) {
    double dt = times[i] - times[i - 1];
    acc.bkm_integral += 0.5 * dt * (bkm[i] + bkm[i - 1]);
    acc.l2linf_integral +=
        0.5 * dt * (linf[i] * linf[i] + linf[i - 1] * linf[i - 1]);
  }
  return acc;
}

double decay_check(const VectorField3& v, double R) {
  const Grid3& g = v.grid();
  if (!(R < g.half_width))
    throw ValidationError("nlc", "decay radius must be below the half-width");
  double best = 0.0;
  std::size_t count = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Vec3 x = g.node(i, j, k);
        double rx = norm(x);
        if (rx <= R) continue;
        ++count;
        Vec3 w = v.at(i, j, k);
        best = std::max(best, rx * norm(w));
      }
  if (count == 0)
    throw ValidationError("nlc", "no grid nodes beyond the decay radius");
  return best;
}

// --- monitor -------------------------------------------------------------------

NlcReport monitor_snapshot(const Snapshot& snap, const NlcConfig& cfg,
                           bool quiet) {
  const VectorField3& v = snap.field;
  const Grid3& g = v.grid();
  NlcReport rep;
  rep.t = snap.time;

  std::vector<MaxPoint> mps = find_max_points(v, cfg.tie_tol, snap.time);
  const MaxPoint& mp = mps.front();
  Frame fr = build_frame(v, mp);
  FramedField framed = to_frame(v, fr, mp.location);

  InfimizeResult inf =
      infimize_nlc(framed.u, cfg.vspec, cfg.resolve_window_radii(g));
  rep.functional = inf.value;
  rep.window_radius = inf.dec.window_radius;

  int o = g.origin_index();
  rep.u3_origin = framed.u.comp(2).at(o, o, o);
  rep.threshold = nlc_threshold(cfg, snap.time, rep.u3_origin);

  PressureDerivativeReport pd = pressure_derivative_origin(inf.dec);
  rep.via_full = pd.via_full;
  rep.via_remainder = pd.via_remainder;
  rep.symmetric_part = pd.symmetric_part;

  LemmaReport lemma = lemma_checks(framed);
  rep.u3_lap_u3 = lemma.u3_lap_u3;

  rep.bkm = bkm_integrand(v);
  rep.linf_speed = v.max_norm();
  rep.decay_const = decay_check(v, cfg.decay_radius_rel * g.half_width);

  // sigma bookkeeping: the Riesz step needs vanishing means of the mixed
  // products; on the torus these are exactly computable, so log violations
  // instead of failing.
  double sigma_max = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      sigma_max = std::max(
          sigma_max,
          std::fabs(
              pointwise(derivative(inf.dec.rem.comp(i), 2), inf.dec.sym.comp(j))
                  .mean()));
      sigma_max = std::max(
          sigma_max,
          std::fabs(
              pointwise(inf.dec.rem.comp(i), derivative(inf.dec.sym.comp(j), 2))
                  .mean()));
      sigma_max = std::max(
          sigma_max,
          std::fabs(
              pointwise(inf.dec.rem.comp(i), derivative(inf.dec.rem.comp(j), 2))
                  .mean()));
    }
  rep.sigma_max = sigma_max;
  double scale = rep.linf_speed * rep.linf_speed / g.half_width;
  if (!quiet && sigma_max > 1e-6 * std::max(scale, 1e-300))
    std::cerr << "[monitor] t=" << snap.time
              << ": nonzero sigma on mixed products (max |mean| = "
              << sigma_max << ")\n";

  rep.satisfied = rep.functional <= rep.threshold;
  return rep;
}

MonitorResult monitor_run(const std::vector<std::string>& snapshot_paths,
                          const NlcConfig& cfg, bool quiet) {
  cfg.validate();
  if (snapshot_paths.empty())
    throw ValidationError("ingest", "no snapshots to monitor");
  MonitorResult result;
  std::vector<double> times, bkms, linfs;
  for (const std::string& path : snapshot_paths) {
    NlcReport rep;
    try {
      Snapshot snap = read_snapshot(path);
      rep.t = snap.time;
      rep = monitor_snapshot(snap, cfg, quiet);
    } catch (const Error& e) {
      rep.failed = true;
      rep.error = e.what();
      rep.satisfied = false;
      double qnan = std::numeric_limits<double>::quiet_NaN();
      rep.functional = rep.threshold = rep.u3_origin = qnan;
      rep.via_full = rep.via_remainder = rep.symmetric_part = qnan;
      rep.u3_lap_u3 = rep.bkm = rep.linf_speed = rep.decay_const = qnan;
      if (!quiet)
        std::cerr << "[monitor] snapshot " << path << " failed: " << e.what()
                  << "\n";
      ++result.failures;
    }
    if (!rep.failed) {
      times.push_back(rep.t);
      bkms.push_back(rep.bkm);
      linfs.push_back(rep.linf_speed);
    }
    result.reports.push_back(std::move(rep));
  }
  result.verdict = result.failures == 0;
  for (const NlcReport& r : result.reports)
    if (!r.failed && !r.satisfied) result.verdict = false;
  if (times.size() >= 2) result.series = accumulate_series(times, bkms, linfs);
  return result;
}

void write_monitor_csv(const MonitorResult& result, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ValidationError("monitor", "cannot open for writing: " + path);
  os << "t,functional,threshold,u3_origin,via_full,via_remainder,"
        "symmetric_part,u3_lap_u3,bkm,linf_speed,decay_const,verdict_flag\n";
  for (const NlcReport& r : result.reports) {
    os << format_double(r.t) << ',' << format_double(r.functional) << ','
       << format_double(r.threshold) << ',' << format_double(r.u3_origin)
       << ',' << format_double(r.via_full) << ','
       << format_double(r.via_remainder) << ','
       << format_double(r.symmetric_part) << ','
       << format_double(r.u3_lap_u3) << ',' << format_double(r.bkm) << ','
       << format_double(r.linf_speed) << ',' << format_double(r.decay_const)
       << ',' << (r.satisfied ? 1 : 0) << '\n';
  }
  os.flush();
  if (!os) throw ValidationError("monitor", "write failed: " + path);
}

}  // namespace nscv
