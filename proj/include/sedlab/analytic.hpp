#pragma once

#include <cstddef>

#include "sedlab/core.hpp"

namespace sedlab::analytic {

/// Zero-mean Gaussian density of a given variance.
struct GaussianDensity {
  double variance = 1.0;
  double pdf(double x) const;
  double cdf(double x) const;
};

/// Exponential density on [0, inf) with a given mean.
struct ExponentialDensity {
  double mean = 1.0;
  double pdf(double u) const;
  double cdf(double u) const;
};

/// Stationary oscillator in the zeropoint field, tau -> 0.  Densities are
/// built from the variances (hbar / 2 m w0 for x), not from printed exponents.
struct GroundStateStats {
  double x_var = 0.0;
  double p_var = 0.0;
  double v_var = 0.0;         // tau -> 0 value hbar w0 / 2m
  double v_var_cutoff = 0.0;  // quadrature of w^2 S_x up to omega_v_cut
  double mean_energy = 0.0;
  GaussianDensity x_density;
  GaussianDensity v_density;
  ExponentialDensity energy_density;
};

GroundStateStats ground_state(const SystemParams& params, double omega_v_cut = 0.0);

struct Commutators {
  double c_xx = 0.0;
  double c_pp = 0.0;
  double c_xp = 0.0;
};

/// c_xx = (hbar/m w0)[sin w0 t + tau w0 sign(t) cos w0 t] e^{-tau w0^2 |t|/2},
/// c_pp = hbar m w0 sin(w0 t) e^{-tau w0^2 |t|/2}, c_xp = hbar cos(w0 t).
Commutators commutator_closed(const SystemParams& params, double t);

struct EnergyFluctuation {
  /// (hbar w0 / 2) sqrt((1 - e^{-x}) / x), x = tau w0^2 T.
  double recomputed = 0.0;
  /// hbar (1 - e^{-x}) / (2 T w0 tau), reported for comparison only.
  double printed = 0.0;
  /// Full double time integral of the Gaussian-factorized variance:
  /// (hbar w0 / 2) sqrt(2 (x - 1 + e^{-x}) / x^2).
  double double_integral = 0.0;
};

EnergyFluctuation energy_fluctuation(const SystemParams& params, double T);

struct FreeParticle {
  double thermal_dx2 = 0.0;       // 2 tau kT dt / m
  double thermal_v_var = 0.0;     // kT / m
  double thermal_dv2_asymptote = 0.0;  // 2 kT / m, structure-function limit
  double zpf_dx2 = 0.0;           // (2 hbar tau / pi m)[C + ln(dt / tau)]
  double zpf_log_slope = 0.0;     // 2 hbar tau / pi m
  double zpf_dv2 = 0.0;           // (2 hbar / pi m tau) ln(omega_c tau)
  bool zpf_dv2_nonphysical = false;  // zpf_dv2 > c^2
  double electron_size = 0.0;     // sqrt(4 C hbar tau / 3 pi m), order of magnitude
};

FreeParticle free_particle(const SystemParams& params, double kT, double dt, double omega_c);

/// x_var * p_var for the oscillator ground state, hbar^2 / 4.
double heisenberg_product(const SystemParams& params);

struct DipolePrediction {
  double K = 0.0;
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double x_plus_var = 0.0;
  double x_minus_var = 0.0;
  double v_plus_var = 0.0;
  double v_minus_var = 0.0;
  double x1x2 = 0.0;  // (x_plus_var - x_minus_var) / 2
  double mean_H = 0.0;
  double E_int_exact = 0.0;
  double E_int_paper_series = 0.0;  // -K^2 hbar / (2 m^2 w0^3)
  double E_int_exact_series = 0.0;  // -K^2 hbar / (8 m^2 w0^3)
  double hbar = 1.0;
  double m = 1.0;
  double omega0 = 1.0;

  double rho_plus(double x) const;
  double rho_minus(double x) const;
  /// rho_plus(x+) rho_minus(x-) in dipole coordinates.
  double joint_density(double x1, double x2) const;
  /// Square of the first-order perturbed ground state built from the
  /// oscillator eigenfunctions; qualitative comparison only.
  double quantum_joint_density(double x1, double x2) const;
};

DipolePrediction dipole_prediction(const SystemParams& params, double K);

struct PlanckPrediction {
  double kT = 0.0;
  double mean_energy = 0.0;  // (hbar w0 / 2) coth(hbar w0 / 2kT)
  ExponentialDensity energy_density;
  double hbar = 1.0;
  double omega0 = 1.0;

  /// Quantum reference levels (n + 1/2) hbar w0.
  double level(std::size_t n) const;
};

PlanckPrediction planck_prediction(const SystemParams& params, double kT);

struct QuantumDensities {
  double x_var = 0.0;
  double rho0(double x) const;
  double rho1(double x) const;
};

QuantumDensities quantum_reference_densities(const SystemParams& params);

}  // namespace sedlab::analytic
