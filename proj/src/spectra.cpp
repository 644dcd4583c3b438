#include "sedlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace sedlab {

const char* to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::ZPF: return "zpf";
    case SpectrumKind::Planck: return "planck";
    case SpectrumKind::RayleighJeans: return "rayleigh_jeans";
    case SpectrumKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

SpectrumKind spectrum_kind_from_string(const std::string& name) {
  if (name == "zpf") return SpectrumKind::ZPF;
  if (name == "planck") return SpectrumKind::Planck;
  if (name == "rayleigh_jeans") return SpectrumKind::RayleighJeans;
  if (name == "tabulated") return SpectrumKind::Tabulated;
  throw Error(ErrorKind::InvalidParams, "unknown spectrum kind '" + name + "'");
}

SpectrumModel SpectrumModel::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw Error(ErrorKind::InvalidParams, "tabulated spectrum needs >= 2 knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (knots[i].first < 0 || knots[i].second < 0) {
      throw Error(ErrorKind::InvalidParams, "tabulated spectrum has a negative entry");
    }
    if (i > 0 && !(knots[i].first > knots[i - 1].first)) {
      throw Error(ErrorKind::InvalidParams, "tabulated omega must be strictly increasing");
    }
  }
  return {SpectrumKind::Tabulated, 0.0, std::move(knots)};
}

SpectrumModel load_tabulated_csv(std::istream& in) {
  std::vector<std::pair<double, double>> knots;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double w = 0, s = 0;
    if (!(row >> w >> s)) {
      if (knots.empty() && lineno == 1) continue;  // header
      throw Error(ErrorKind::Io, "malformed spectrum row " + std::to_string(lineno));
    }
    knots.emplace_back(w, s);
  }
  return SpectrumModel::tabulated(std::move(knots));
}

SpectrumModel load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return load_tabulated_csv(in);
}

namespace {

double interpolate(const std::vector<std::pair<double, double>>& table, double omega) {
  if (omega < table.front().first || omega > table.back().first) return 0.0;
  auto hi = std::lower_bound(table.begin(), table.end(), omega,
                             [](const auto& knot, double w) { return knot.first < w; });
  if (hi == table.begin()) return hi->second;
  auto lo = std::prev(hi);
  const double f = (omega - lo->first) / (hi->first - lo->first);
  return lo->second + f * (hi->second - lo->second);
}

// x coth(x) stays finite at 0; S is written as ZPF * coth to keep the kT -> 0 limit exact.
double coth(double x) { return 1.0 / std::tanh(x); }

}  // namespace

double field_spectrum(const SpectrumModel& model, const SystemParams& p, double omega) {
  if (omega < 0) throw Error(ErrorKind::NegativeFrequency, "omega = " + std::to_string(omega));
  if (omega == 0.0) return 0.0;
  const double zpf = p.hbar * p.tau * omega * omega * omega / (std::numbers::pi * p.m);
  switch (model.kind) {
    case SpectrumKind::ZPF:
      return zpf;
    case SpectrumKind::Planck: {
      if (model.kT <= 0.0) return zpf;
      const double x = p.hbar * omega / (2.0 * model.kT);
      if (x > 40.0) return zpf;  // coth(x) == 1 in double precision
      return zpf * coth(x);
    }
    case SpectrumKind::RayleighJeans:
      return 2.0 * model.kT * p.tau * omega * omega / (std::numbers::pi * p.m);
    case SpectrumKind::Tabulated:
      return interpolate(model.table, omega);
  }
  return 0.0;
}

double position_transfer(double omega, const SystemParams& p) {
  if (omega < 0) throw Error(ErrorKind::NegativeFrequency, "omega = " + std::to_string(omega));
  const double detune = p.omega0 * p.omega0 - omega * omega;
  const double w3 = omega * omega * omega;
  const double denom = detune * detune + p.tau * p.tau * w3 * w3;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / denom;
}

double position_spectrum(const SpectrumModel& model, const SystemParams& p, double omega) {
  const double gain = position_transfer(omega, p);
  const double drive = field_spectrum(model, p, omega);
  if (std::isinf(gain)) {
    // free particle at omega = 0: the ratio diverges like 1/omega or 1/omega^2
    return std::numeric_limits<double>::infinity();
  }
  return drive * gain;
}

double momentum_spectrum(const SpectrumModel& model, const SystemParams& p, double omega) {
  if (omega < 0) throw Error(ErrorKind::NegativeFrequency, "omega = " + std::to_string(omega));
  if (p.omega0 == 0.0) return 0.0;
  if (omega == 0.0) {
    throw Error(ErrorKind::ZeroFrequencyMomentum, "S_p carries 1/omega^2 and is undefined at 0");
  }
  const double w0sq = p.omega0 * p.omega0;
  return p.m * p.m * w0sq * w0sq * position_spectrum(model, p, omega) / (omega * omega);
}

QuadratureResult spectral_moment(const ProcessSpectrum& spectrum, int power, double lo,
                                 double hi, std::vector<double> breakpoints) {
  if (!(lo >= 0.0) || !(hi > lo)) {
    throw Error(ErrorKind::InvalidParams, "spectral_moment needs 0 <= lo < hi");
  }
  breakpoints.push_back(lo);
  breakpoints.push_back(hi);
  std::erase_if(breakpoints, [&](double b) { return b < lo || b > hi; });
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  auto integrand = [&](double w) {
    const double s = spectrum(w);
    if (s == 0.0) return 0.0;
    return std::pow(w, power) * s;
  };

  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    double err = 0.0;
    const double piece = Rule::integrate(integrand, breakpoints[i], breakpoints[i + 1], 15,
                                         1e-11, &err);
    total.value += piece;
    total.abs_error += err;
  }
  if (!std::isfinite(total.value) ||
      total.abs_error > 1e-9 * std::abs(total.value) + 1e-14) {
    std::ostringstream os;
    os << "value " << total.value << " with error estimate " << total.abs_error;
    throw Error(ErrorKind::QuadratureFailure, os.str());
  }
  return total;
}

QuadratureResult spectral_moment(const ProcessSpectrum& spectrum, int power, double lo,
                                 double hi, const SystemParams& params) {
  std::vector<double> pts;
  if (params.omega0 > 0) {
    const double w = 5.0 * params.gamma();
    // geometric refinement around the peak
    for (double f : {1.0, 0.2, 0.04, 0.008}) {
      pts.push_back(params.omega0 - w * f);
      pts.push_back(params.omega0 + w * f);
    }
    pts.push_back(params.omega0);
    pts.push_back(0.5 * params.omega0);
    pts.push_back(2.0 * params.omega0);
    for (double w2 = 4.0 * params.omega0; w2 < hi; w2 *= 4.0) pts.push_back(w2);
  }
  return spectral_moment(spectrum, power, lo, hi, std::move(pts));
}

}  // namespace sedlab
