#include "sedlab/analytic.hpp"

#include <cmath>
#include <numbers>

#include "sedlab/spectra.hpp"

namespace sedlab::analytic {
namespace {

void require_oscillator(const SystemParams& p) {
  validate_params(p);
  if (!(p.omega0 > 0)) throw Error(ErrorKind::InvalidParams, "oscillator closed forms need omega0 > 0");
}

double gaussian(double x, double var) {
  return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

// (1 - e^{-x}) / x without cancellation at small x
double one_minus_exp_over(double x) {
  return x < 1e-8 ? 1.0 - 0.5 * x : -std::expm1(-x) / x;
}

}  // namespace

double GaussianDensity::pdf(double x) const { return gaussian(x, variance); }
double GaussianDensity::cdf(double x) const {
  return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

double ExponentialDensity::pdf(double u) const { return u < 0 ? 0.0 : std::exp(-u / mean) / mean; }
double ExponentialDensity::cdf(double u) const { return u < 0 ? 0.0 : -std::expm1(-u / mean); }

GroundStateStats ground_state(const SystemParams& p, double omega_v_cut) {
  require_oscillator(p);
  GroundStateStats s;
  s.x_var = p.hbar / (2.0 * p.m * p.omega0);
  s.p_var = p.m * p.hbar * p.omega0 / 2.0;
  s.v_var = p.hbar * p.omega0 / (2.0 * p.m);
  s.mean_energy = 0.5 * p.hbar * p.omega0;
  if (omega_v_cut > 0) {
    const auto model = SpectrumModel::zpf();
    auto sx = [&](double w) { return position_spectrum(model, p, w); };
    s.v_var_cutoff = spectral_moment(sx, 2, 0.0, omega_v_cut, p).value;
  }
  s.x_density = {s.x_var};
  s.v_density = {s.v_var};
  s.energy_density = {s.mean_energy};
  return s;
}

Commutators commutator_closed(const SystemParams& p, double t) {
  require_oscillator(p);
  const double w = p.omega0;
  const double env = std::exp(-0.5 * p.gamma() * std::abs(t));
  const double sign = t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
  Commutators c;
  c.c_xx = p.hbar / (p.m * w) * (std::sin(w * t) + p.tau * w * sign * std::cos(w * t)) * env;
  c.c_pp = p.hbar * p.m * w * std::sin(w * t) * env;
  c.c_xp = p.hbar * std::cos(w * t);
  return c;
}

EnergyFluctuation energy_fluctuation(const SystemParams& p, double T) {
  require_oscillator(p);
  if (!(T > 0)) throw Error(ErrorKind::InvalidParams, "window length must be positive");
  const double x = p.gamma() * T;
  const double half = 0.5 * p.hbar * p.omega0;
  EnergyFluctuation f;
  f.recomputed = half * std::sqrt(one_minus_exp_over(x));
  f.printed = p.hbar * (-std::expm1(-x)) / (2.0 * T * p.omega0 * p.tau);
  // 2 (x - 1 + e^{-x}) / x^2 -> 1 - x/3 as x -> 0
  const double ratio = x < 1e-4 ? 1.0 - x / 3.0 + x * x / 12.0
                                : 2.0 * (x + std::expm1(-x)) / (x * x);
  f.double_integral = half * std::sqrt(ratio);
  return f;
}

FreeParticle free_particle(const SystemParams& p, double kT, double dt, double omega_c) {
  validate_params(p);
  if (!(dt > 0)) throw Error(ErrorKind::InvalidParams, "time lag must be positive");
  constexpr double C = std::numbers::egamma;
  FreeParticle f;
  f.thermal_dx2 = 2.0 * p.tau * kT * dt / p.m;
  f.thermal_v_var = kT / p.m;
  f.thermal_dv2_asymptote = 2.0 * kT / p.m;
  f.zpf_log_slope = 2.0 * p.hbar * p.tau / (std::numbers::pi * p.m);
  f.zpf_dx2 = f.zpf_log_slope * (C + std::log(dt / p.tau));
  f.zpf_dv2 = omega_c > 0 ? 2.0 * p.hbar / (std::numbers::pi * p.m * p.tau) * std::log(omega_c * p.tau)
                          : 0.0;
  const double c = p.c();
  f.zpf_dv2_nonphysical = f.zpf_dv2 > c * c;
  f.electron_size = std::sqrt(4.0 * C * p.hbar * p.tau / (3.0 * std::numbers::pi * p.m));
  return f;
}

double heisenberg_product(const SystemParams& p) {
  const auto gs = ground_state(p);
  return gs.x_var * gs.p_var;
}

double DipolePrediction::rho_plus(double x) const { return gaussian(x, x_plus_var); }
double DipolePrediction::rho_minus(double x) const { return gaussian(x, x_minus_var); }

double DipolePrediction::joint_density(double x1, double x2) const {
  const double r = 1.0 / std::numbers::sqrt2;
  return rho_plus(r * (x1 + x2)) * rho_minus(r * (x1 - x2));
}

double DipolePrediction::quantum_joint_density(double x1, double x2) const {
  // psi = N [psi0 psi0 + c psi1 psi1], psi1(x) = sqrt(2 m w0 / hbar) x psi0(x)
  const double coef = K / (2.0 * m * omega0 * omega0);
  const double var = hbar / (2.0 * m * omega0);
  const double norm = 1.0 / (1.0 + coef * coef);
  const double bracket = 1.0 + coef * (2.0 * m * omega0 / hbar) * x1 * x2;
  return norm * bracket * bracket * gaussian(x1, var) * gaussian(x2, var);
}

DipolePrediction dipole_prediction(const SystemParams& p, double K) {
  require_oscillator(p);
  const double w0sq = p.omega0 * p.omega0;
  if (!(std::abs(K) < p.m * w0sq)) {
    throw Error(ErrorKind::InvalidParams, "|K| must be below m*omega0^2 for real normal modes");
  }
  DipolePrediction d;
  d.K = K;
  d.hbar = p.hbar;
  d.m = p.m;
  d.omega0 = p.omega0;
  d.omega_plus = std::sqrt(w0sq - K / p.m);
  d.omega_minus = std::sqrt(w0sq + K / p.m);
  d.x_plus_var = p.hbar / (2.0 * p.m * d.omega_plus);
  d.x_minus_var = p.hbar / (2.0 * p.m * d.omega_minus);
  d.v_plus_var = p.hbar * d.omega_plus / (2.0 * p.m);
  d.v_minus_var = p.hbar * d.omega_minus / (2.0 * p.m);
  d.x1x2 = 0.5 * (d.x_plus_var - d.x_minus_var);
  d.mean_H = 0.5 * p.hbar * (d.omega_plus + d.omega_minus);
  d.E_int_exact = d.mean_H - p.hbar * p.omega0;
  const double w03 = w0sq * p.omega0;
  d.E_int_paper_series = -K * K * p.hbar / (2.0 * p.m * p.m * w03);
  d.E_int_exact_series = -K * K * p.hbar / (8.0 * p.m * p.m * w03);
  return d;
}

double PlanckPrediction::level(std::size_t n) const {
  return (static_cast<double>(n) + 0.5) * hbar * omega0;
}

PlanckPrediction planck_prediction(const SystemParams& p, double kT) {
  require_oscillator(p);
  if (!(kT >= 0)) throw Error(ErrorKind::InvalidParams, "kT must be >= 0");
  PlanckPrediction pp;
  pp.kT = kT;
  pp.hbar = p.hbar;
  pp.omega0 = p.omega0;
  const double half = 0.5 * p.hbar * p.omega0;
  if (kT == 0.0) {
    pp.mean_energy = half;
  } else {
    const double x = half / kT;
    pp.mean_energy = x > 40.0 ? half : half / std::tanh(x);
  }
  pp.energy_density = {pp.mean_energy};
  return pp;
}

double QuantumDensities::rho0(double x) const { return gaussian(x, x_var); }

double QuantumDensities::rho1(double x) const {
  // |psi1|^2 = (x^2 / var) rho0(x)
  return x * x / x_var * gaussian(x, x_var);
}

QuantumDensities quantum_reference_densities(const SystemParams& p) {
  require_oscillator(p);
  return {p.hbar / (2.0 * p.m * p.omega0)};
}

}  // namespace sedlab::analytic
