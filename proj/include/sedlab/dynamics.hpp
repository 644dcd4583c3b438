#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sedlab/core.hpp"
#include "sedlab/noise.hpp"
#include "sedlab/spectra.hpp"

namespace sedlab {

/// Positions, velocities and canonical momenta of one realization on
/// t_i = t0 + i dt.  Series that were not produced are left empty.
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> p;
  SystemParams params;

  std::size_t size() const { return x.size(); }
  double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

/// Exact one-step propagator of  x'' + gamma x' + w^2 x = eps  with eps held
/// constant over the step (underdamped, gamma < 2 w).
class OscillatorStepper {
 public:
  OscillatorStepper(double omega, double gamma, double dt);

  void step(double& x, double& v, double eps) const {
    const double xn = phi_[0] * x + phi_[1] * v + drive_[0] * eps;
    const double vn = phi_[2] * x + phi_[3] * v + drive_[1] * eps;
    x = xn;
    v = vn;
  }

 private:
  std::array<double, 4> phi_{};
  std::array<double, 2> drive_{};
};

struct OscillatorOptions {
  double x0 = 0.0;
  double v0 = 0.0;
  /// Discarded transient; defaults to 10 / (tau omega0^2).
  std::optional<double> burn_in;
  /// Deterministic displacement added to (x, v) at the first retained sample.
  double kick_x = 0.0;
  double kick_v = 0.0;
  bool with_momentum = true;
};

/// Integrates m x'' = -m w0^2 x - m tau w0^2 x' + m eps(t), the radiation
/// reaction reduced with x''' ~ -w0^2 x'.  Samples before the burn-in are
/// dropped; p is attached via canonical_momentum when requested.
Trajectory simulate_oscillator(const SystemParams& params, const FieldRealization& field,
                               const OscillatorOptions& options = {});

/// p(t) = p(0) - m w0^2 int_0^t x ds (trapezoidal), p(0) chosen so the series
/// has zero mean.
std::vector<double> canonical_momentum(const Trajectory& traj, const SystemParams& params);

/// Free-particle path: x synthesized directly from the process spectrum S_x
/// (j = 0 mode excluded), v as the exact spectral derivative when requested,
/// p identically zero (its spectrum vanishes at omega0 = 0).
Trajectory sample_from_spectrum(const ProcessSpectrum& position_spectrum,
                                const SystemParams& params, double dt, std::size_t n,
                                double omega_cut, std::uint64_t seed,
                                bool with_velocity = false);

struct DipoleTrajectories {
  Trajectory first;
  Trajectory second;
  Trajectory plus;   // mode with omega_+^2 = omega0^2 - K/m, driven by eps_+
  Trajectory minus;  // mode with omega_-^2 = omega0^2 + K/m, driven by eps_-
};

/// Two dipoles coupled by -K x1 x2, solved in normal modes and transformed
/// back with x1 = (x+ + x-)/sqrt 2, x2 = (x+ - x-)/sqrt 2.  Both modes share
/// one burn-in (the longer of the two).
DipoleTrajectories simulate_dipoles(const SystemParams& params, const FieldPair& pair,
                                    bool with_momentum = true);

/// A cos(w0 t + phi) exp(-tau w0^2 t / 2).
double mean_trajectory(double amplitude, double phase, const SystemParams& params, double t);

/// Stationarity diagnostic: variance of the second half against the last
/// quarter, passing when they agree within `n_sigma` standard errors given
/// `corr_samples` samples per independent block.
bool looks_stationary(std::span<const double> series, double corr_samples, double n_sigma = 3.0);

/// Writes `<stem>.bin` with x, v, p concatenated and a JSON sidecar.
void dump_trajectory(const Trajectory& traj, std::uint64_t seed, const std::string& stem);

}  // namespace sedlab
