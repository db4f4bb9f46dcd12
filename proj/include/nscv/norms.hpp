#ifndef NSCV_NORMS_HPP
#define NSCV_NORMS_HPP

#include <optional>
#include <string>
#include <vector>

#include "nscv/grid.hpp"
#include "nscv/growth.hpp"

namespace nscv {

// Result of one sampled-sup norm computation. `value` is the reported norm
// (seminorm plus point term for pointed kinds); the argmax member of the
// family is recorded so runs are reproducible. Every sup here is a lower
// bound for the continuum sup, exact over the declared finite family.
struct NormReport {
  double value = 0.0;
  double seminorm = 0.0;
  double point_term = 0.0;
  Ball argmax_ball;
  Vec3 argmax_x{0, 0, 0};
  Vec3 argmax_y{0, 0, 0};
  bool pair_based = false;
  std::string family;
  std::size_t family_size = 0;
  std::size_t skipped = 0;  // balls under the 8-node floor, not evaluated
};

// phi(B) for a concrete sampled ball. MorreyCritical evaluates to
// |B|^{-1/p} with the discrete measure (member count * h^3), which makes the
// Morrey norm with that weight equal the grid L^p norm exactly.
double phi_ball_value(const GrowthFunction& phi, const Vec3& center,
                      double radius, double discrete_measure);

NormReport campanato_norm(const ScalarField& f, double p,
                          const GrowthFunction& phi,
                          const std::vector<Ball>& balls,
                          const std::string& family = "");
NormReport pointed_campanato_norm(const ScalarField& f, double p,
                                  const GrowthFunction& phi,
                                  const std::vector<Ball>& balls,
                                  const std::string& family = "");
NormReport morrey_norm(const ScalarField& f, double p,
                       const GrowthFunction& phi,
                       const std::vector<Ball>& balls,
                       const std::string& family = "");

// Deterministic node-pair family for the Holder-type norms: both endpoints
// run over the stride-sublattice. stride = 0 picks all pairs for N <= 16 and
// N/16 otherwise.
struct PairFamily {
  int stride = 0;
  std::string describe(const Grid3& g) const;
  int effective_stride(const Grid3& g) const;
};

NormReport holder_norm(const ScalarField& f, const GrowthFunction& phi,
                       const PairFamily& pairs = {});
NormReport pointed_holder_norm(const ScalarField& f, const GrowthFunction& phi,
                               const PairFamily& pairs = {});

// sup over node pairs in B* of |f(x)-f(y)| / |x-y|^alpha.
double lip_norm_on_ball(const ScalarField& f, double alpha, const Ball& bstar);

// Torus realization of sigma(f) = lim_{r->inf} f_{B(0,r)}: the global mean.
double sigma_limit(const ScalarField& f);

// Mean plus origin ball averages at the three largest admissible radii, for
// decayed fields where the extrapolation reading makes sense.
struct SigmaReport {
  double mean = 0.0;
  std::vector<double> radii;
  std::vector<double> ball_averages;
  double spread = 0.0;
};
SigmaReport sigma_report(const ScalarField& f);

struct EquivalenceRow {
  double camp_p1 = 0.0;
  double camp_p2 = 0.0;
  std::optional<double> holder;
  std::optional<double> morrey_centered;
  double ratio_p = 0.0;  // camp_p1 / camp_p2
  std::optional<double> ratio_holder;
  std::optional<double> ratio_morrey;
};

struct EquivalenceTable {
  ConditionReport conditions;
  std::vector<EquivalenceRow> rows;
  std::size_t skipped_constant_fields = 0;
  double min_ratio_p = 0.0, max_ratio_p = 0.0;
  std::optional<double> min_ratio_holder, max_ratio_holder;
  std::optional<double> min_ratio_morrey, max_ratio_morrey;
};

// Numerical-equivalence harness: p1-vs-p2 Campanato ratios always; the
// Holder ratio when the lower Dini integral converges; the Morrey ratio of
// f - sigma(f) when the upper Dini integral converges. phi must pass the
// doubling / nearness / almost-increasing sampled checks.
EquivalenceTable equivalence_harness(const std::vector<ScalarField>& fields,
                                     double p1, double p2,
                                     const GrowthFunction& phi,
                                     const std::vector<Ball>& balls,
                                     const PairFamily& pairs = {});

}  // namespace nscv

#endif
