#include "sedlab/noise.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fft.hpp"
#include "io.hpp"

namespace sedlab {

SynthesizedProcess synthesize_process(const ProcessSpectrum& spectrum, double dt, std::size_t n,
                                      double omega_cut, std::uint64_t seed,
                                      bool with_derivative) {
  if (n < 2 || dt <= 0) throw Error(ErrorKind::InvalidParams, "empty synthesis grid");
  const double dw = 2.0 * std::numbers::pi / (dt * static_cast<double>(n));
  const auto top = static_cast<std::size_t>(std::floor(omega_cut / dw * (1.0 + 1e-12)));
  if (top > n / 2) {
    std::ostringstream os;
    os << "omega_cut " << omega_cut << " exceeds the Nyquist frequency " << std::numbers::pi / dt;
    throw Error(ErrorKind::GridTooCoarse, os.str());
  }
  if (top < 1) throw Error(ErrorKind::GridTooCoarse, "no lattice mode below omega_cut");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<fft::cplx> half(n / 2 + 1, fft::cplx{});
  std::vector<fft::cplx> dhalf;
  if (with_derivative) dhalf.assign(n / 2 + 1, fft::cplx{});

  for (std::size_t j = 1; j <= top; ++j) {
    const double a = normal(rng);
    const double b = normal(rng);
    const double w = dw * static_cast<double>(j);
    const double s = spectrum(w);
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw Error(ErrorKind::InvalidParams, "spectrum is negative or non-finite inside the band");
    }
    // a cos + b sin has unit variance, so each mode carries S dw
    const double amp = std::sqrt(s * dw);
    // c2r sums X_j e^{+i w_j t} + conj over the Hermitian extension, so the
    // half-spectrum coefficient is amp (a - i b) / 2; the Nyquist term appears once.
    fft::cplx coef = (j == n / 2 && n % 2 == 0) ? fft::cplx{amp * a, 0.0}
                                                : 0.5 * amp * fft::cplx{a, -b};
    half[j] = coef;
    if (with_derivative && !(j == n / 2 && n % 2 == 0)) dhalf[j] = fft::cplx{0.0, w} * coef;
  }

  SynthesizedProcess out;
  out.values = fft::backward(half, n);
  if (with_derivative) out.derivative = fft::backward(dhalf, n);
  return out;
}

FieldRealization synthesize_field(const SpectrumModel& model, const SystemParams& params,
                                  const GridSpec& grid, std::uint64_t seed) {
  validate(params, grid);
  const double dw = grid.domega();
  if (params.omega0 > 0 && dw > params.gamma() / 4.0) {
    std::ostringstream os;
    os << "lattice spacing " << dw << " does not resolve the resonance width "
       << params.gamma() << " (need dw <= tau*omega0^2/4)";
    throw Error(ErrorKind::GridTooCoarse, os.str());
  }
  auto spectrum = [&](double w) { return field_spectrum(model, params, w); };
  FieldRealization f;
  f.dt = grid.dt;
  f.model = model;
  f.seed = seed;
  f.omega_cut = grid.omega_cut;
  f.samples = synthesize_process(spectrum, grid.dt, grid.n_samples, grid.omega_cut, seed).values;
  return f;
}

FieldPair synthesize_pair(const SpectrumModel& model, const SystemParams& params,
                          const GridSpec& grid, std::uint64_t seed) {
  FieldPair pair;
  pair.first = synthesize_field(model, params, grid, derive_seed(seed, 0));
  pair.second = synthesize_field(model, params, grid, derive_seed(seed, 1));
  pair.plus = pair.first;
  pair.minus = pair.first;
  pair.plus.seed = pair.minus.seed = seed;
  const double r = 1.0 / std::numbers::sqrt2;
  for (std::size_t i = 0; i < pair.first.size(); ++i) {
    const double a = pair.first.samples[i];
    const double b = pair.second.samples[i];
    pair.plus.samples[i] = r * (a + b);
    pair.minus.samples[i] = r * (a - b);
  }
  return pair;
}

void dump_field(const FieldRealization& field, const std::string& stem) {
  nlohmann::ordered_json meta;
  meta["dt"] = field.dt;
  meta["n"] = field.samples.size();
  meta["seed"] = field.seed;
  meta["model"] = to_string(field.model.kind);
  meta["kT"] = field.model.kT;
  meta["omega_cut"] = field.omega_cut;
  meta["arrays"] = {"eps"};
  io::write_binary_with_sidecar(stem, {&field.samples}, meta);
}

}  // namespace sedlab
