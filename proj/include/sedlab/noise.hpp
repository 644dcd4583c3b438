#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sedlab/core.hpp"
#include "sedlab/spectra.hpp"

namespace sedlab {

/// One sampled realization of the reduced field eps(t) on t_i = i dt.
/// The realization is periodic with period n dt.
struct FieldRealization {
  double dt = 0.0;
  std::vector<double> samples;
  SpectrumModel model;
  std::uint64_t seed = 0;
  double omega_cut = 0.0;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t i) const { return dt * static_cast<double>(i); }
};

/// Output of the harmonic-superposition generator.
struct SynthesizedProcess {
  std::vector<double> values;
  /// Exact time derivative of `values`; empty unless requested.
  std::vector<double> derivative;
};

/// Harmonic superposition on the lattice w_j = j dw, dw = 2 pi / (n dt),
/// 1 <= j <= omega_cut / dw:
///   y(t) = sum_j sqrt(S(w_j) dw) [a_j cos w_j t + b_j sin w_j t]
/// with a_j, b_j iid standard normal drawn from `seed`.  The j = 0 mode is
/// never populated.  Throws GridTooCoarse when omega_cut exceeds the Nyquist
/// frequency or no lattice mode lies in the band.
SynthesizedProcess synthesize_process(const ProcessSpectrum& spectrum, double dt, std::size_t n,
                                      double omega_cut, std::uint64_t seed,
                                      bool with_derivative = false);

/// Field realization for `model`.  Requires a valid grid and, for omega0 > 0,
/// a lattice fine enough to resolve the resonance (dw <= tau omega0^2 / 4).
FieldRealization synthesize_field(const SpectrumModel& model, const SystemParams& params,
                                  const GridSpec& grid, std::uint64_t seed);

struct FieldPair {
  FieldRealization first;
  FieldRealization second;
  FieldRealization plus;   // (first + second) / sqrt(2)
  FieldRealization minus;  // (first - second) / sqrt(2)
};

/// Two independent realizations (sub-seeds 0 and 1 of `seed`) and their
/// orthogonal combinations.
FieldPair synthesize_pair(const SpectrumModel& model, const SystemParams& params,
                          const GridSpec& grid, std::uint64_t seed);

/// Writes `<stem>.bin` (little-endian float64) and `<stem>.json` (dt, n,
/// seed, model, omega_cut).
void dump_field(const FieldRealization& field, const std::string& stem);

}  // namespace sedlab
