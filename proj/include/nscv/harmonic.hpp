#ifndef NSCV_HARMONIC_HPP
#define NSCV_HARMONIC_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nscv/grid.hpp"

namespace nscv {

// Generic Fourier multiplier operator. The symbol receives the physical
// frequency xi = (pi/L) * k and must satisfy symbol(-xi) = conj(symbol(xi))
// for real output; the zero mode is set separately (0 for all singular
// operators, which realizes the modulo-constants convention).
struct MultiplierOp {
  std::function<std::complex<double>(const Vec3& xi)> symbol;
  std::complex<double> zero_mode{0.0, 0.0};
  bool zero_nyquist = true;
};

ScalarField apply(const MultiplierOp& op, const ScalarField& f);

// Spectral Riesz transform R_j (symbol -i xi_j / |xi|) and the iterated
// transform R_i R_j (symbol -xi_i xi_j / |xi|^2). j, i in {1, 2, 3}.
ScalarField riesz(const ScalarField& f, int j);
ScalarField riesz_pair(const ScalarField& f, int i, int j);

// c_n for n = 3: Gamma(2) * pi^-2.
double riesz_normalization();
// The Riesz kernel c_3 (x_j - y_j)/|x - y|^4 (plain Euclidean displacement).
double riesz_kernel(int j, const Vec3& x, const Vec3& y);

// Direct-quadrature realizations over the box (midpoint rule on nodes,
// minimal-image displacement). eps must be >= 2h.
ScalarField riesz_truncated(const ScalarField& f, int j, double eps);
double riesz_truncated_at(const ScalarField& f, int j, double eps,
                          const Vec3& x);
// Modified transform: kernel minus (-y_j)(1 - chi_{B(0,1)}(y)) / |y|^4,
// well defined on non-decaying data.
ScalarField modified_riesz(const ScalarField& f, int j, double eps);
double modified_riesz_at(const ScalarField& f, int j, double eps,
                         const Vec3& x);
// Crude bound for the mass the box-restricted quadrature cannot see.
double riesz_tail_estimate(const ScalarField& f);

// Parity bookkeeping: even f (in y3) maps to even R_1 f, R_2 f and odd
// R_3 f, and the swapped statement. Defects are absolute sups over nodes,
// with `scale` = max |R_j part| for relative reporting.
struct ParityReport {
  double defects[3][2] = {{0, 0}, {0, 0}, {0, 0}};  // [j][even_in, odd_in]
  double max_defect = 0.0;
  double max_relative_defect = 0.0;
};
ParityReport parity_check(const ScalarField& f);

// Spot checks of the size / kappa-smoothness / cancellation conditions for a
// singular kernel of type kappa. Annulus integrals use antithetic sampling
// (pairs y, 2x - y), so odd kernels cancel to rounding level.
struct KernelSample {
  Vec3 x, y, z;
};
std::vector<KernelSample> standard_kernel_samples(std::uint64_t seed,
                                                  int count);

struct KernelConditionReport {
  double size_constant = 0.0;
  double smoothness_constant = 0.0;
  double max_annulus_integral = 0.0;
  int sample_count = 0;
};
KernelConditionReport check_kernel_conditions(
    const std::function<double(const Vec3&, const Vec3&)>& kernel, double kappa,
    const std::vector<KernelSample>& samples,
    const std::vector<std::pair<double, double>>& annuli, int quad_points,
    std::uint64_t seed);

// Invariant table backing `nscv verify riesz`.
struct VerifyRow {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};
std::vector<VerifyRow> verify_riesz_table(int n, double half_width);

}  // namespace nscv

#endif
