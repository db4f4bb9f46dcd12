#ifndef NSCV_SOLVER_HPP
#define NSCV_SOLVER_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nscv/fft.hpp"
#include "nscv/grid.hpp"

namespace nscv {

// Incompressible Navier-Stokes state in spectral space (r2c half storage,
// divergence-free, dealiased by the 2/3 rule). Time stepping is classical
// explicit RK4 on the projected rotational-form nonlinearity with the
// viscous term kept inside the stages, so the Beltrami benchmark exhibits a
// clean dt^4 error signal.
struct SpectralState {
  Grid3 grid;
  std::array<Spectrum, 3> uhat;
  double t = 0.0;
  double nu = 1.0;
};

struct InitialData {
  enum class Kind { Beltrami, TaylorGreen, RandomBandLimited, GaussianVortex };
  Kind kind = Kind::Beltrami;
  double A = 1.0, B = 1.0, C = 1.0;  // Beltrami amplitudes
  std::uint64_t seed = 1;            // random band-limited
  int kmax = 5;
  double width = 0.0;  // Gaussian vortex; 0 resolves to L/6

  static InitialData beltrami(double A = 1.0, double B = 1.0, double C = 1.0);
  static InitialData taylor_green();
  static InitialData random_band_limited(std::uint64_t seed, int kmax = 5);
  static InitialData gaussian_vortex(double width = 0.0);
};

SpectralState make_state(const Grid3& g, const InitialData& init,
                         double nu = 1.0);
VectorField3 to_physical(const SpectralState& s);
VectorField3 vorticity_physical(const SpectralState& s);

// Per-mode Leray projector I - k k^T / |k|^2; zero mode untouched.
void project_div_free(std::array<Spectrum, 3>& uhat, const Grid3& g);
// max over modes of |k . uhat| / max-coefficient scale.
double max_spectral_divergence(const SpectralState& s);
void dealias_two_thirds(std::array<Spectrum, 3>& uhat, const Grid3& g);

double energy(const SpectralState& s);

// One RK4 step; enforces the advective CFL bound dt <= 0.5 h / max|u| and
// throws on non-finite state after the update.
void step(SpectralState& s, double dt);

// p = sum_ij R_i R_j (u_i u_j), mean zero.
ScalarField pressure_from_velocity(const SpectralState& s);

VectorField3 cross_field(const VectorField3& a, const VectorField3& b);

struct RunResult {
  std::vector<std::string> paths;
  std::vector<double> times;
  std::vector<double> step_energies;
  bool completed = false;
  std::string error;
};

// Steps to t_end writing snapshots (initial state always; then at every
// multiple of snapshot_every; snapshot_every <= 0 means initial and final
// only). Step failures flag the partial series instead of throwing.
RunResult run(const Grid3& g, const InitialData& init, double nu, double dt,
              double t_end, double snapshot_every, const std::string& out_dir);

}  // namespace nscv

#endif
