#include "nscv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>

#include "nscv/errors.hpp"
#include "nscv/fft.hpp"
#include "nscv/kernels.hpp"

namespace nscv {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid3 Grid3::make(int n, double half_width) {
  if (!power_of_two(n) || n < 8)
    throw ValidationError("grid", "grid size must be a power of two >= 8");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ValidationError("grid", "box half-width must be positive");
  Grid3 g;
  g.n = n;
  g.half_width = half_width;
  g.spacing = 2.0 * half_width / n;
  return g;
}

double Grid3::min_image(double d) const {
  return std::remainder(d, 2.0 * half_width);
}

double Grid3::periodic_distance(const Vec3& a, const Vec3& b) const {
  double d0 = min_image(a[0] - b[0]);
  double d1 = min_image(a[1] - b[1]);
  double d2 = min_image(a[2] - b[2]);
  return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

ScalarField ScalarField::from_function(
    const Grid3& g, const std::function<double(const Vec3&)>& f) {
  ScalarField out(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) out.at(i, j, k) = f(g.node(i, j, k));
  return out;
}

double ScalarField::mean() const {
  return kernels::sum(v_.data(), v_.size()) / double(v_.size());
}

double ScalarField::max_abs() const {
  return kernels::max_abs(v_.data(), v_.size());
}

VectorField3 VectorField3::from_function(
    const Grid3& g, const std::function<Vec3(const Vec3&)>& f) {
  VectorField3 out(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Vec3 v = f(g.node(i, j, k));
        out.comp(0).at(i, j, k) = v[0];
        out.comp(1).at(i, j, k) = v[1];
        out.comp(2).at(i, j, k) = v[2];
      }
  return out;
}

double VectorField3::max_norm() const {
  const double* a = c_[0].data();
  const double* b = c_[1].data();
  const double* c = c_[2].data();
  double m = 0.0;
  for (std::size_t i = 0; i < c_[0].size(); ++i) {
    double s = a[i] * a[i] + b[i] * b[i] + c[i] * c[i];
    if (s > m) m = s;
  }
  return std::sqrt(m);
}

ScalarField VectorField3::magnitude() const {
  ScalarField out(grid());
  const double* a = c_[0].data();
  const double* b = c_[1].data();
  const double* c = c_[2].data();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]);
  return out;
}

namespace {
void require_same_grid(const Grid3& a, const Grid3& b) {
  if (!(a == b))
    throw ValidationError("grid", "fields live on different grids");
}
}  // namespace

ScalarField add(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  ScalarField out = a;
  kernels::axpby(1.0, b.data(), 1.0, out.data(), out.size());
  return out;
}

ScalarField sub(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  ScalarField out = a;
  kernels::axpby(-1.0, b.data(), 1.0, out.data(), out.size());
  return out;
}

ScalarField scaled(double c, const ScalarField& a) {
  ScalarField out = a;
  kernels::axpby(0.0, a.data(), c, out.data(), out.size());
  return out;
}

ScalarField pointwise(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  ScalarField out(a.grid());
  kernels::multiply(a.data(), b.data(), out.data(), out.size());
  return out;
}

VectorField3 add(const VectorField3& a, const VectorField3& b) {
  VectorField3 out(a.grid());
  for (int c = 0; c < 3; ++c) out.comp(c) = add(a.comp(c), b.comp(c));
  return out;
}

VectorField3 sub(const VectorField3& a, const VectorField3& b) {
  VectorField3 out(a.grid());
  for (int c = 0; c < 3; ++c) out.comp(c) = sub(a.comp(c), b.comp(c));
  return out;
}

VectorField3 scaled(double c, const VectorField3& a) {
  VectorField3 out(a.grid());
  for (int k = 0; k < 3; ++k) out.comp(k) = scaled(c, a.comp(k));
  return out;
}

// --- ball geometry ----------------------------------------------------------

namespace {

struct OffsetsKey {
  int n;
  std::uint64_t h_bits;
  std::uint64_t r_bits;
  bool operator<(const OffsetsKey& o) const {
    if (n != o.n) return n < o.n;
    if (h_bits != o.h_bits) return h_bits < o.h_bits;
    return r_bits < o.r_bits;
  }
};

std::uint64_t bits_of(double d) {
  std::uint64_t u;
  std::memcpy(&u, &d, sizeof(u));
  return u;
}

}  // namespace

const BallOffsets& node_ball_offsets(const Grid3& g, double radius) {
  static std::mutex mutex;
  static std::map<OffsetsKey, BallOffsets> cache;
  OffsetsKey key{g.n, bits_of(g.spacing), bits_of(radius)};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  BallOffsets offs;
  double h = g.spacing;
  double h2 = h * h;
  double r2 = radius * radius;
  int w = int(std::ceil(radius / h));
  w = std::min(w, g.n / 2);
  for (int d1 = -w; d1 <= w; ++d1)
    for (int d2 = -w; d2 <= w; ++d2)
      for (int d3 = -w; d3 <= w; ++d3) {
        double s = double(d1 * d1 + d2 * d2 + d3 * d3);
        if (s * h2 < r2) offs.offsets.push_back({d1, d2, d3});
      }
  return cache.emplace(key, std::move(offs)).first->second;
}

namespace {

void validate_ball(const Grid3& g, const Ball& b) {
  if (!(b.radius > 0.0))
    throw ValidationError("grid", "ball radius must be positive");
  if (b.radius >= g.half_width)
    throw ValidationError("grid",
                          "ball radius must be smaller than the box half-width");
}

// Visits every node with periodic distance < radius from an arbitrary
// center. visitor(idx, value not passed).
template <typename Fn>
std::size_t visit_ball_nodes(const Grid3& g, const Ball& b, Fn&& visitor) {
  validate_ball(g, b);
  double h = g.spacing;
  double r2 = b.radius * b.radius;
  int w = int(std::ceil(b.radius / h)) + 1;
  int full = 2 * w + 1 >= g.n ? 1 : 0;
  int base[3];
  for (int a = 0; a < 3; ++a)
    base[a] = int(std::lround((b.center[a] + g.half_width) / h));
  std::size_t count = 0;
  int mask = g.n - 1;
  int lo = full ? 0 : -w;
  int hi = full ? g.n - 1 : w;
  for (int o1 = lo; o1 <= hi; ++o1) {
    int k1 = (full ? o1 : (base[0] + o1)) & mask;
    double d1 = g.min_image(g.coord(k1) - b.center[0]);
    double s1 = d1 * d1;
    if (s1 >= r2) continue;
    for (int o2 = lo; o2 <= hi; ++o2) {
      int k2 = (full ? o2 : (base[1] + o2)) & mask;
      double d2 = g.min_image(g.coord(k2) - b.center[1]);
      double s2 = s1 + d2 * d2;
      if (s2 >= r2) continue;
      for (int o3 = lo; o3 <= hi; ++o3) {
        int k3 = (full ? o3 : (base[2] + o3)) & mask;
        double d3 = g.min_image(g.coord(k3) - b.center[2]);
        if (s2 + d3 * d3 < r2) {
          visitor(g.idx(k1, k2, k3));
          ++count;
        }
      }
    }
  }
  return count;
}

}  // namespace

std::size_t ball_node_count(const Grid3& g, const Ball& b) {
  return visit_ball_nodes(g, b, [](std::size_t) {});
}

void for_each_ball_node(const Grid3& g, const Ball& b,
                        const std::function<void(std::size_t)>& fn) {
  visit_ball_nodes(g, b, fn);
}

double ball_average(const ScalarField& f, const Ball& b) {
  const Grid3& g = f.grid();
  double acc = 0.0;
  std::size_t count =
      visit_ball_nodes(g, b, [&](std::size_t i) { acc += f[i]; });
  if (count < 8) {
    std::ostringstream os;
    os << "ball of radius " << b.radius << " contains only " << count
       << " grid nodes (need >= 8)";
    throw ValidationError("grid", os.str());
  }
  return acc / double(count);
}

BallStrategy BallStrategy::exhaustive(std::vector<double> radii) {
  BallStrategy s;
  s.kind = Kind::Exhaustive;
  s.stride = 1;
  s.radii = std::move(radii);
  return s;
}

BallStrategy BallStrategy::dyadic(int stride, std::vector<double> radii) {
  BallStrategy s;
  s.kind = Kind::Dyadic;
  s.stride = stride;
  s.radii = std::move(radii);
  return s;
}

std::vector<double> default_dyadic_radii(const Grid3& g) {
  std::vector<double> radii;
  for (double r = 2.0 * g.spacing; r < g.half_width; r *= 2.0)
    radii.push_back(r);
  return radii;
}

std::string BallStrategy::describe(const Grid3& g) const {
  std::ostringstream os;
  os << (kind == Kind::Exhaustive ? "exhaustive" : "dyadic");
  os << "(stride=" << (kind == Kind::Exhaustive ? 1 : stride) << ",radii=[";
  const std::vector<double> r = radii.empty() ? default_dyadic_radii(g) : radii;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) os << ",";
    os << r[i];
  }
  os << "])";
  return os.str();
}

std::vector<Ball> sample_balls(const Grid3& g, const BallStrategy& strategy) {
  int stride = strategy.kind == BallStrategy::Kind::Exhaustive
                   ? 1
                   : std::max(1, strategy.stride);
  std::vector<double> radii =
      strategy.radii.empty() ? default_dyadic_radii(g) : strategy.radii;
  std::sort(radii.begin(), radii.end());
  for (double r : radii) {
    if (!(r > 0.0) || r >= g.half_width)
      throw ValidationError("grid",
                            "ball family radius must lie in (0, half-width)");
  }
  std::vector<Ball> balls;
  balls.reserve((std::size_t(g.n / stride) + 1) * (g.n / stride) *
                (g.n / stride) * radii.size());
  for (int i = 0; i < g.n; i += stride)
    for (int j = 0; j < g.n; j += stride)
      for (int k = 0; k < g.n; k += stride)
        for (double r : radii) balls.push_back(Ball{g.node(i, j, k), r});
  return balls;
}

// --- differential operators --------------------------------------------------

ScalarField apply_mode_multiplier(
    const ScalarField& f,
    const std::function<std::complex<double>(int, int, int)>& symbol,
    bool zero_nyquist) {
  const Grid3& g = f.grid();
  const SpectralTransform& tr = SpectralTransform::get(g.n);
  Spectrum spec(tr.spec_size());
  tr.forward(f.data(), spec.data());
  int half = g.n / 2;
  for (int m1 = 0; m1 < g.n; ++m1) {
    int k1 = tr.signed_mode(m1);
    for (int m2 = 0; m2 < g.n; ++m2) {
      int k2 = tr.signed_mode(m2);
      for (int m3 = 0; m3 <= half; ++m3) {
        int k3 = m3;
        std::complex<double>& c = spec[tr.spec_idx(m1, m2, m3)];
        if (zero_nyquist &&
            (m1 == half || m2 == half || m3 == half)) {
          c = 0.0;
          continue;
        }
        c *= symbol(k1, k2, k3);
      }
    }
  }
  ScalarField out(g);
  tr.inverse(spec.data(), out.data());
  return out;
}

ScalarField derivative(const ScalarField& f, int axis, DiffMethod method) {
  const Grid3& g = f.grid();
  if (axis < 0 || axis > 2)
    throw ValidationError("grid", "derivative axis must be 0, 1 or 2");
  if (method == DiffMethod::Spectral) {
    double xi0 = M_PI / g.half_width;
    return apply_mode_multiplier(
        f,
        [&](int k1, int k2, int k3) {
          int k = axis == 0 ? k1 : axis == 1 ? k2 : k3;
          return std::complex<double>(0.0, xi0 * k);
        },
        true);
  }
  // 2nd-order central differences, periodic wrap.
  ScalarField out(g);
  int mask = g.n - 1;
  double inv2h = 1.0 / (2.0 * g.spacing);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        int ip = i, im = i, jp = j, jm = j, kp = k, km = k;
        if (axis == 0) {
          ip = (i + 1) & mask;
          im = (i - 1) & mask;
        } else if (axis == 1) {
          jp = (j + 1) & mask;
          jm = (j - 1) & mask;
        } else {
          kp = (k + 1) & mask;
          km = (k - 1) & mask;
        }
        out.at(i, j, k) = (f.at(ip, jp, kp) - f.at(im, jm, km)) * inv2h;
      }
  return out;
}

VectorField3 gradient(const ScalarField& f, DiffMethod method) {
  VectorField3 out(f.grid());
  for (int a = 0; a < 3; ++a) out.comp(a) = derivative(f, a, method);
  return out;
}

ScalarField divergence(const VectorField3& v, DiffMethod method) {
  ScalarField out = derivative(v.comp(0), 0, method);
  out = add(out, derivative(v.comp(1), 1, method));
  out = add(out, derivative(v.comp(2), 2, method));
  return out;
}

VectorField3 curl(const VectorField3& v, DiffMethod method) {
  VectorField3 out(v.grid());
  out.comp(0) =
      sub(derivative(v.comp(2), 1, method), derivative(v.comp(1), 2, method));
  out.comp(1) =
      sub(derivative(v.comp(0), 2, method), derivative(v.comp(2), 0, method));
  out.comp(2) =
      sub(derivative(v.comp(1), 0, method), derivative(v.comp(0), 1, method));
  return out;
}

ScalarField laplacian(const ScalarField& f, DiffMethod method) {
  const Grid3& g = f.grid();
  if (method == DiffMethod::Spectral) {
    double xi0 = M_PI / g.half_width;
    return apply_mode_multiplier(
        f,
        [&](int k1, int k2, int k3) {
          double s = xi0 * xi0 * double(k1 * k1 + k2 * k2 + k3 * k3);
          return std::complex<double>(-s, 0.0);
        },
        false);
  }
  ScalarField out(g);
  int mask = g.n - 1;
  double invh2 = 1.0 / (g.spacing * g.spacing);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        double c = f.at(i, j, k);
        double s = f.at((i + 1) & mask, j, k) + f.at((i - 1) & mask, j, k) +
                   f.at(i, (j + 1) & mask, k) + f.at(i, (j - 1) & mask, k) +
                   f.at(i, j, (k + 1) & mask) + f.at(i, j, (k - 1) & mask) -
                   6.0 * c;
        out.at(i, j, k) = s * invh2;
      }
  return out;
}

VectorField3 laplacian(const VectorField3& v, DiffMethod method) {
  VectorField3 out(v.grid());
  for (int a = 0; a < 3; ++a) out.comp(a) = laplacian(v.comp(a), method);
  return out;
}

ScalarField reflect_y3(const ScalarField& f) {
  const Grid3& g = f.grid();
  ScalarField out(g);
  int mask = g.n - 1;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        out.at(i, j, k) = f.at(i, j, (g.n - k) & mask);
  return out;
}

VectorField3 reflect_y3(const VectorField3& v) {
  VectorField3 out(v.grid());
  for (int a = 0; a < 3; ++a) out.comp(a) = reflect_y3(v.comp(a));
  return out;
}

}  // namespace nscv
