#ifndef NSCV_GROWTH_HPP
#define NSCV_GROWTH_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nscv/vec3.hpp"

namespace nscv {

// Variable growth functions phi(x, r) > 0. The piecewise-power family uses
// exponent alpha on {|x|<=2, r<=2}, beta on {r>2}, and alpha_tilde (phi) or
// delta (psi) on {|x|>2, r<=2}. Dini-type integrals have closed forms for
// every non-Custom kind; Custom falls back to adaptive quadrature.
enum class GrowthKind {
  PiecewisePowerPhi,
  PiecewisePowerPsi,
  ConstantOne,
  PowerAlpha,
  MorreyCritical,
  Custom,
};

struct GrowthParams {
  int n = 3;
  double p = 4.0;
  double alpha = 0.5;
  double alpha_tilde = -0.75;
  double beta = -0.75;
  double delta = -1.5;  // psi exponent on the |x|>2, 0<r<=2 branch
};

class GrowthFunction {
 public:
  using Evaluator = std::function<double(const Vec3&, double)>;

  GrowthKind kind() const { return kind_; }
  const GrowthParams& params() const { return params_; }

  // Branch-exact pointwise value; throws ValidationError for r <= 0.
  double eval(const Vec3& x, double r) const;

  static GrowthFunction constant_one();
  static GrowthFunction power(double alpha);
  static GrowthFunction morrey_critical(int n, double p);
  static GrowthFunction custom(Evaluator f, std::string label = "custom");

  const std::string& label() const { return label_; }

 private:
  friend GrowthFunction make_phi(int, double, double, double, double, bool);
  friend GrowthFunction make_psi(int, double, double, double, double, bool);
  friend GrowthFunction make_psi_explicit(int, double, double, double, double);

  GrowthKind kind_ = GrowthKind::ConstantOne;
  GrowthParams params_;
  Evaluator custom_;
  std::string label_;
};

// Constructors for the specific phi / psi pair. Parameter ranges are
// enforced (p > 2, -n/p <= alpha_tilde < 0 < alpha < 1, -n/p <= beta < 0);
// `allow_extended_beta` additionally admits the degenerate beta = 2*alpha_tilde
// = -2n/p reading, which conflicts with -n/p <= beta and is therefore opt-in.
GrowthFunction make_phi(int n, double p, double alpha, double alpha_tilde,
                        double beta, bool allow_extended_beta = false);
GrowthFunction make_psi(int n, double p, double alpha, double alpha_tilde,
                        double beta, bool allow_extended_beta = false);
// Psi with a freely chosen short-range exponent delta in [-n/(p/2), 0).
GrowthFunction make_psi_explicit(int n, double p, double alpha, double delta,
                                 double beta);

// Finite families over which the universally quantified conditions are
// probed. Defaults: 5^3 centers in [-4,4]^3 and 32 log-spaced radii in
// [2^-6, 2^6].
struct GrowthSampleSpec {
  std::vector<Vec3> centers;
  std::vector<double> radii;
  static GrowthSampleSpec standard();
};

struct ConditionEntry {
  bool holds = false;
  double constant = 0.0;  // max observed ratio over the sample family
};

struct ConditionReport {
  ConditionEntry doubling;
  ConditionEntry nearness;
  ConditionEntry almost_increasing;
  std::optional<double> dini_lower_constant;
  std::optional<double> dini_upper_constant;
  int sample_count = 0;
};

ConditionEntry check_doubling(const GrowthFunction& gf,
                              const GrowthSampleSpec& spec);
ConditionEntry check_nearness(const GrowthFunction& gf,
                              const GrowthSampleSpec& spec);
ConditionEntry check_almost_increasing(const GrowthFunction& gf,
                                       const GrowthSampleSpec& spec);
ConditionReport check_conditions(const GrowthFunction& gf,
                                 const GrowthSampleSpec& spec);

// int_0^r phi(x,t)/t dt and int_r^inf phi(x,t)/t dt. Closed-form for
// non-Custom kinds; divergent cases raise NumericalError.
double dini_lower(const GrowthFunction& gf, const Vec3& x, double r);
double dini_upper(const GrowthFunction& gf, const Vec3& x, double r);
// r^kappa int_r^inf phi(x,t)/t^{1+kappa} dt (kappa-smoothing weight).
double dini_upper_weighted(const GrowthFunction& gf, const Vec3& x, double r,
                           double kappa);

// Phi*(x,r) = int_1^{max(2,|x|,r)} phi(0,t)/t dt,
// Phi**(x,r) = int_r^{max(2,|x|,r)} phi(x,t)/t dt (0 on an empty range).
double phi_star(const GrowthFunction& gf, const Vec3& x, double r);
double phi_star_star(const GrowthFunction& gf, const Vec3& x, double r);

// phi * (Phi* + Phi**) as a growth function (the product that Proposition-6.1
// style arguments compare against make_psi).
GrowthFunction psi_from_phi(const GrowthFunction& gf);

struct RatioScan {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};
RatioScan compare_growth(const GrowthFunction& a, const GrowthFunction& b,
                         const GrowthSampleSpec& spec);

// Adaptive Gauss-Kronrod integral of f over [lo, hi], relative tolerance
// `tol`. Exposed for the dual-route checks in tests.
double adaptive_integrate(const std::function<double(double)>& f, double lo,
                          double hi, double tol = 1e-12);

}  // namespace nscv

#endif
