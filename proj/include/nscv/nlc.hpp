#ifndef NSCV_NLC_HPP
#define NSCV_NLC_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nscv/frame.hpp"
#include "nscv/grid.hpp"
#include "nscv/growth.hpp"
#include "nscv/norms.hpp"

namespace nscv {

// The space V in which the collapse functional measures the decomposition:
// pointed Campanato with exponent p and growth phi over a declared ball
// family. Defaults are the specific instantiation n=3, p=4, alpha=1/2,
// alpha_tilde = beta = -3/4. stride 0 resolves to N/8 per grid; an empty
// radius list resolves to {L/8, L/4, L/2} clipped to admissible range.
struct VSpec {
  double p = 4.0;
  GrowthFunction phi;
  BallStrategy balls;
  static VSpec defaults();
  std::vector<Ball> resolve_balls(const Grid3& g) const;
  std::string family_label(const Grid3& g) const;
};

struct NlcConfig {
  VSpec vspec;
  double C = 1.0;
  double alpha = 0.5;  // must stay < 2
  double T = 2.0;      // candidate blowup time
  std::vector<double> window_radii;           // absolute; empty -> relative
  std::vector<double> window_radii_rel{0.25, 0.4};  // fractions of L
  double tie_tol = 1e-9;
  double decay_radius_rel = 0.5;
  static NlcConfig defaults();
  void validate() const;
  std::vector<double> resolve_window_radii(const Grid3& g) const;
};

struct NlcBreakdown {
  std::array<double, 3> norm_r{};    // ||r_i||_V
  std::array<double, 3> norm_dr{};   // ||d3 r_i||_V
  std::array<double, 3> norm_u{};    // ||U_j||_V
  std::array<double, 3> norm_du{};   // ||d3 U_j||_V
  double value = 0.0;
};

// Sum over i,j of ||d3 r_i|| ||U_j|| + ||r_i|| ||d3 U_j|| + ||r_i|| ||d3 r_j||,
// all norms pointed Campanato over the VSpec family.
NlcBreakdown nlc_functional_breakdown(const Decomposition& dec,
                                      const VSpec& vspec);
double nlc_functional(const Decomposition& dec, const VSpec& vspec);

// C (T - t)^(-alpha) / u3(0, t); domain error when t >= T or u3 <= 0.
double nlc_threshold(const NlcConfig& cfg, double t, double u3_at_origin);

// Chooses the functional-minimizing decomposition among the unwindowed
// parity projection and the windowed variants (an upper bound for the
// definition's infimum over all decompositions).
InfimizeResult infimize_nlc(const VectorField3& u, const VSpec& vspec,
                            const std::vector<double>& window_radii);

struct PressureDerivativeReport {
  double via_full = 0.0;       // sum R_i R_j d3 (u_i u_j) at the origin
  double via_remainder = 0.0;  // sum over r_i U_j + U_i r_j + r_i r_j
  double symmetric_part = 0.0; // sum over U_i U_j
};
PressureDerivativeReport pressure_derivative_origin(const Decomposition& dec);

struct LemmaReport {
  double u3_dp3 = 0.0;      // (u3 d3 p)(0) through the remainder formula
  double u3_lap_u3 = 0.0;   // (u3 Delta_h u3)(0), 2nd-order stencil
};
// origin_tol: allowed relative deficit of |u(0)| against the node max.
LemmaReport lemma_checks(const FramedField& framed, double origin_tol = 0.05);

// ||curl v||_inf over nodes (spectral curl).
double bkm_integrand(const VectorField3& v);

struct SeriesAccumulation {
  double bkm_integral = 0.0;     // trapezoid of ||curl v||_inf dt
  double l2linf_integral = 0.0;  // trapezoid of ||v||_inf^2 dt
};
SeriesAccumulation accumulate_series(const std::vector<double>& times,
                                     const std::vector<double>& bkm,
                                     const std::vector<double>& linf);

// sup over nodes with |x| > R of |x| |v(x)| (plain Euclidean |x|).
double decay_check(const VectorField3& v, double R);

struct NlcReport {
  double t = 0.0;
  double functional = 0.0;
  double threshold = 0.0;
  double u3_origin = 0.0;
  double via_full = 0.0;
  double via_remainder = 0.0;
  double symmetric_part = 0.0;
  double u3_lap_u3 = 0.0;
  double bkm = 0.0;
  double linf_speed = 0.0;
  double decay_const = 0.0;
  bool satisfied = false;
  bool failed = false;
  std::string error;
  double sigma_max = 0.0;
  std::optional<double> window_radius;
};

struct MonitorResult {
  std::vector<NlcReport> reports;
  bool verdict = false;  // functional <= threshold on every snapshot
  int failures = 0;
  SeriesAccumulation series;
};

// Full per-snapshot pipeline over a time series of snapshot files. Stage
// errors are recorded per snapshot and the run continues.
MonitorResult monitor_run(const std::vector<std::string>& snapshot_paths,
                          const NlcConfig& cfg, bool quiet = true);
NlcReport monitor_snapshot(const Snapshot& snap, const NlcConfig& cfg,
                           bool quiet = true);

void write_monitor_csv(const MonitorResult& result, const std::string& path);

}  // namespace nscv

#endif
