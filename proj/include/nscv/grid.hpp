#ifndef NSCV_GRID_HPP
#define NSCV_GRID_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nscv/vec3.hpp"

namespace nscv {

// Uniform periodic box [-L, L)^3 with N nodes per axis at -L + k*h,
// h = 2L/N. N is a power of two so wrap-around is a bitmask and the origin
// (k = N/2 per axis) is an exact node.
struct Grid3 {
  int n = 0;
  double half_width = 0.0;
  double spacing = 0.0;

  static Grid3 make(int n, double half_width);

  std::size_t size() const { return std::size_t(n) * n * n; }
  double coord(int k) const { return -half_width + k * spacing; }
  int origin_index() const { return n / 2; }
  std::size_t idx(int i, int j, int k) const {
    return (std::size_t(i) * n + j) * n + k;
  }
  Vec3 node(int i, int j, int k) const {
    return {coord(i), coord(j), coord(k)};
  }
  // Signed minimal-image difference a - b on the circle of circumference 2L.
  double min_image(double d) const;
  double periodic_distance(const Vec3& a, const Vec3& b) const;

  bool operator==(const Grid3& other) const {
    return n == other.n && half_width == other.half_width;
  }
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid3& g) : grid_(g), v_(g.size(), 0.0) {}
  static ScalarField from_function(const Grid3& g,
                                   const std::function<double(const Vec3&)>& f);

  const Grid3& grid() const { return grid_; }
  const double* data() const { return v_.data(); }
  double* data() { return v_.data(); }
  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  double& operator[](std::size_t i) { return v_[i]; }
  double at(int i, int j, int k) const { return v_[grid_.idx(i, j, k)]; }
  double& at(int i, int j, int k) { return v_[grid_.idx(i, j, k)]; }

  double mean() const;
  double max_abs() const;

 private:
  Grid3 grid_;
  std::vector<double> v_;
};

class VectorField3 {
 public:
  VectorField3() = default;
  explicit VectorField3(const Grid3& g)
      : c_{ScalarField(g), ScalarField(g), ScalarField(g)} {}
  static VectorField3 from_function(const Grid3& g,
                                    const std::function<Vec3(const Vec3&)>& f);

  const Grid3& grid() const { return c_[0].grid(); }
  ScalarField& comp(int a) { return c_[a]; }
  const ScalarField& comp(int a) const { return c_[a]; }
  Vec3 at(int i, int j, int k) const {
    return {c_[0].at(i, j, k), c_[1].at(i, j, k), c_[2].at(i, j, k)};
  }
  double max_norm() const;  // max over nodes of |v|
  ScalarField magnitude() const;

 private:
  std::array<ScalarField, 3> c_;
};

// Elementwise arithmetic (fields must share a grid).
ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
ScalarField scaled(double c, const ScalarField& a);
ScalarField pointwise(const ScalarField& a, const ScalarField& b);
VectorField3 add(const VectorField3& a, const VectorField3& b);
VectorField3 sub(const VectorField3& a, const VectorField3& b);
VectorField3 scaled(double c, const VectorField3& a);

struct Ball {
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 0.0;
};

// Node-index offsets reaching every node strictly inside a node-centered
// ball of the given radius. Cached per (grid, radius).
struct BallOffsets {
  std::vector<std::array<int, 3>> offsets;
};
const BallOffsets& node_ball_offsets(const Grid3& g, double radius);

// Arithmetic mean of f over grid nodes with periodic distance < B.radius
// from B.center. Throws if the ball holds fewer than 8 nodes or the radius
// is out of range.
double ball_average(const ScalarField& f, const Ball& b);
// Number of member nodes (same membership rule).
std::size_t ball_node_count(const Grid3& g, const Ball& b);
// Invokes fn(linear_index) for every member node, deterministic order.
void for_each_ball_node(const Grid3& g, const Ball& b,
                        const std::function<void(std::size_t)>& fn);

struct BallStrategy {
  enum class Kind { Exhaustive, Dyadic };
  Kind kind = Kind::Exhaustive;
  int stride = 1;
  std::vector<double> radii;  // empty: dyadic defaults h*2^k, k >= 1, < L

  static BallStrategy exhaustive(std::vector<double> radii = {});
  static BallStrategy dyadic(int stride, std::vector<double> radii = {});
  std::string describe(const Grid3& g) const;
};

std::vector<double> default_dyadic_radii(const Grid3& g);
// Deterministic center-major enumeration: node centers (strided for Dyadic)
// in index order, radii ascending within each center.
std::vector<Ball> sample_balls(const Grid3& g, const BallStrategy& strategy);

enum class DiffMethod { Spectral, Fd2 };

// Applies a Fourier multiplier given as a function of the signed integer
// modes (k1, k2, k3); the physical frequency is (pi/L) * k. With
// `zero_nyquist` set, every mode with an index on a Nyquist plane is
// dropped, which keeps odd symbols Hermitian on the half-spectrum storage.
ScalarField apply_mode_multiplier(
    const ScalarField& f,
    const std::function<std::complex<double>(int, int, int)>& symbol,
    bool zero_nyquist);

ScalarField derivative(const ScalarField& f, int axis,
                       DiffMethod method = DiffMethod::Spectral);
VectorField3 gradient(const ScalarField& f,
                      DiffMethod method = DiffMethod::Spectral);
ScalarField divergence(const VectorField3& v,
                       DiffMethod method = DiffMethod::Spectral);
VectorField3 curl(const VectorField3& v,
                  DiffMethod method = DiffMethod::Spectral);
ScalarField laplacian(const ScalarField& f,
                      DiffMethod method = DiffMethod::Spectral);
VectorField3 laplacian(const VectorField3& v,
                       DiffMethod method = DiffMethod::Spectral);

// f(y1, y2, -y3): the periodic index reflection k -> (N - k) mod N on axis 3.
ScalarField reflect_y3(const ScalarField& f);
VectorField3 reflect_y3(const VectorField3& v);

// Snapshot container: a velocity field with its time stamp and viscosity.
struct Snapshot {
  VectorField3 field;
  double time = 0.0;
  double viscosity = 1.0;
};

void write_snapshot(const std::string& path, const VectorField3& field,
                    double time, double viscosity);
Snapshot read_snapshot(const std::string& path);

}  // namespace nscv

#endif
