#ifndef NSCV_FRAME_HPP
#define NSCV_FRAME_HPP

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "nscv/grid.hpp"

namespace nscv {

struct MaxPoint {
  Vec3 location{0, 0, 0};
  double speed = 0.0;
  double time = 0.0;
  std::array<int, 3> index{0, 0, 0};
};

// All grid nodes whose speed reaches (1 - tie_tol) * max, in index order;
// the first entry is the canonical choice.
std::vector<MaxPoint> find_max_points(const VectorField3& v,
                                      double tie_tol = 1e-9,
                                      double time = 0.0);

// Right-handed orthonormal frame {n1, n2, tau} with tau the flow direction
// at the maximum point: n1 from the coordinate axis least aligned with tau
// (lowest index on ties), n2 = tau x n1.
struct Frame {
  Vec3 tau{0, 0, 1};
  Vec3 n1{1, 0, 0};
  Vec3 n2{0, 1, 0};
};

Frame build_frame(const Vec3& velocity_at_max);
Frame build_frame(const VectorField3& v, const MaxPoint& mp);

enum class ResampleMethod { Trilinear, Spectral };

// Velocity expressed in frame coordinates y: component k of u at node y is
// v(x_M + n1 y1 + n2 y2 + tau y3) projected onto frame axis k. Spectral
// resampling evaluates the trigonometric interpolant exactly (band-limited
// data, Nyquist modes dropped); trilinear is the cheap cross-check.
struct FramedField {
  VectorField3 u;
  Frame frame;
  Vec3 origin{0, 0, 0};
};

FramedField to_frame(const VectorField3& v, const Frame& frame, const Vec3& xm,
                     ResampleMethod method = ResampleMethod::Spectral);

// u = U + r with U the parity projection: U1, U2 odd and U3 even in y3.
// Reflection is an index permutation, so the parity of U is exact at node
// level. window_radius set when the projection was cut off by windowed_symmetrize.
struct Decomposition {
  VectorField3 sym;
  VectorField3 rem;
  std::optional<double> window_radius;
};

Decomposition symmetrize(const VectorField3& u);
// U = chi * (parity projection), chi a smooth radial cutoff, 1 on
// B(0, radius), 0 outside B(0, 2 radius); chi is evaluated from index
// offsets so it is exactly even in y3.
Decomposition windowed_symmetrize(const VectorField3& u, double radius);

// Minimum of `objective` over the candidate decompositions {unwindowed,
// windowed(radius) for each listed radius}; an upper bound for the
// inf over all decompositions. Ties keep the earliest candidate.
struct InfimizeResult {
  Decomposition dec;
  double value = 0.0;
  std::size_t candidate_index = 0;
};
InfimizeResult infimize_decomposition(
    const VectorField3& u, const std::vector<double>& window_radii,
    const std::function<double(const Decomposition&)>& objective);

// Remark-2.1-style family: a radial speed bump m0 exp(-|y|^2/w^2) steered by
// an angle theta1 = lambda * y3 * exp(-|y|^2/w_theta^2) (odd in y3), with
// theta3 = theta3_scale * theta1 and theta2 derived so the component squares
// sum to the speed squared (clamped at zero). The default profile is an
// exact symmetric flow whose frame-origin curl component is m0 * lambda.
struct AngularProfile {
  double magnitude = 1.0;
  double bump_width = 0.5;
  double lambda = 0.0;
  double theta_width = 0.5;
  double theta3_scale = 1.0;
};

VectorField3 counterexample_field(const Grid3& g, const AngularProfile& p);

}  // namespace nscv

#endif
