#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sedlab/core.hpp"

namespace sedlab {

enum class SpectrumKind { ZPF, Planck, RayleighJeans, Tabulated };

const char* to_string(SpectrumKind kind);
SpectrumKind spectrum_kind_from_string(const std::string& name);

/// One-sided spectral density family of the reduced driving field
/// eps(t) = e E(t) / m.  Variance = integral over omega >= 0.
struct SpectrumModel {
  SpectrumKind kind = SpectrumKind::ZPF;
  double kT = 0.0;
  /// (omega, S) knots, strictly increasing omega; Tabulated only.
  std::vector<std::pair<double, double>> table;

  static SpectrumModel zpf() { return {}; }
  static SpectrumModel planck(double kT) { return {SpectrumKind::Planck, kT, {}}; }
  static SpectrumModel rayleigh_jeans(double kT) { return {SpectrumKind::RayleighJeans, kT, {}}; }
  static SpectrumModel tabulated(std::vector<std::pair<double, double>> knots);
};

/// Parses a two-column `omega,S` CSV (header optional). Throws Error(Io) or
/// Error(InvalidParams) for unordered or negative entries.
SpectrumModel load_tabulated_csv(std::istream& in);
SpectrumModel load_tabulated_csv(const std::string& path);

using ProcessSpectrum = std::function<double(double)>;

/// S_eps(omega).  ZPF: hbar tau w^3 / (pi m); Planck: ZPF * coth(hbar w / 2kT);
/// Rayleigh-Jeans: 2 kT tau w^2 / (pi m).
double field_spectrum(const SpectrumModel& model, const SystemParams& params, double omega);

/// 1 / [(w0^2 - w^2)^2 + tau^2 w^6]; +inf at omega = 0 for the free particle.
double position_transfer(double omega, const SystemParams& params);

double position_spectrum(const SpectrumModel& model, const SystemParams& params, double omega);

/// m^2 w0^4 S_x / w^2.  Identically zero for the free particle.
double momentum_spectrum(const SpectrumModel& model, const SystemParams& params, double omega);

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
};

/// Adaptive Gauss-Kronrod evaluation of the integral of w^power S(w) on
/// [lo, hi].  The range is split at every breakpoint inside it.  Throws
/// Error(QuadratureFailure) unless abs_error <= 1e-9 |value| + 1e-14.
QuadratureResult spectral_moment(const ProcessSpectrum& spectrum, int power, double lo,
                                 double hi, std::vector<double> breakpoints = {});

/// Same, with the resonance of `params` (omega0 and omega0 +- 5 tau omega0^2)
/// forced as breakpoints.
QuadratureResult spectral_moment(const ProcessSpectrum& spectrum, int power, double lo,
                                 double hi, const SystemParams& params);

}  // namespace sedlab
