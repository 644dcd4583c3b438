#include "sedlab/core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace sedlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NegativeFrequency: return "NegativeFrequency";
    case ErrorKind::ZeroFrequencyMomentum: return "ZeroFrequencyMomentum";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::BurnInExceedsTrajectory: return "BurnInExceedsTrajectory";
    case ErrorKind::SegmentTooLong: return "SegmentTooLong";
    case ErrorKind::LagTooLong: return "LagTooLong";
    case ErrorKind::WindowTooLong: return "WindowTooLong";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::UnknownScenario: return "UnknownScenario";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

double SystemParams::c() const {
  if (light_speed) return *light_speed;
  if (charge) return std::cbrt(2.0 * *charge * *charge / (3.0 * m * tau));
  // tau = 2 alpha hbar / (3 m c^2)
  return std::sqrt(2.0 * kFineStructure * hbar / (3.0 * m * tau));
}

double SystemParams::e() const {
  if (charge) return *charge;
  const double speed = c();
  return std::sqrt(1.5 * tau * m * speed * speed * speed);
}

double GridSpec::domega() const {
  return 2.0 * std::numbers::pi / duration();
}

namespace {

void params_violations(const SystemParams& p, std::vector<Violation>& out) {
  if (!(p.hbar > 0)) out.push_back({"hbar > 0", p.hbar, 0.0});
  if (!(p.m > 0)) out.push_back({"m > 0", p.m, 0.0});
  if (!(p.omega0 >= 0)) out.push_back({"omega0 >= 0", p.omega0, 0.0});
  if (!(p.tau > 0)) out.push_back({"tau > 0", p.tau, 0.0});
  if (!(p.kT >= 0)) out.push_back({"kT >= 0", p.kT, 0.0});
  const double damping = p.tau * p.omega0;
  if (damping > kHardDampingLimit) {
    out.push_back({"tau*omega0 <= 0.5 (damping bound)", damping, kHardDampingLimit});
  }
  const double stiffness = p.m * p.omega0 * p.omega0;
  if (p.K != 0.0 && !(std::abs(p.K) < stiffness)) {
    out.push_back({"|K| < m*omega0^2 (real normal modes)", std::abs(p.K), stiffness});
  }
  if (p.charge && p.light_speed) {
    const double e = *p.charge;
    const double c = *p.light_speed;
    const double implied = 2.0 * e * e / (3.0 * p.m * c * c * c);
    const double rel = std::abs(implied - p.tau) / p.tau;
    if (rel > 1e-12) out.push_back({"tau == 2e^2/(3mc^3)", implied, p.tau});
  }
}

std::string describe(const std::vector<Violation>& v) {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << "; ";
    os << v[i].invariant << " (actual " << v[i].actual << ", allowed " << v[i].allowed << ")";
  }
  return os.str();
}

}  // namespace

std::vector<Violation> check(const SystemParams& params, const GridSpec& grid) {
  std::vector<Violation> out;
  params_violations(params, out);
  if (!(grid.dt > 0)) out.push_back({"dt > 0", grid.dt, 0.0});
  if (grid.n_samples < 2) out.push_back({"n_samples >= 2", double(grid.n_samples), 2.0});
  if (grid.n_ensemble < 1) out.push_back({"n_ensemble >= 1", double(grid.n_ensemble), 1.0});
  const double nyquist = grid.dt * grid.omega_cut;
  if (nyquist > std::numbers::pi) {
    out.push_back({"dt*omega_cut <= pi (Nyquist)", nyquist, std::numbers::pi});
  }
  if (!(grid.omega_cut > params.omega0)) {
    out.push_back({"omega_cut > omega0", grid.omega_cut, params.omega0});
  }
  if (!(grid.omega_v_cut > 0)) out.push_back({"omega_v_cut > 0", grid.omega_v_cut, 0.0});
  if (params.omega0 > 0) {
    const double needed = 100.0 * 2.0 * std::numbers::pi / params.omega0;
    if (grid.duration() < needed) {
      out.push_back({"n_samples*dt >= 100 periods", grid.duration(), needed});
    }
  }
  return out;
}

ValidatedConfig validate(const SystemParams& params, const GridSpec& grid) {
  auto violations = check(params, grid);
  if (!violations.empty()) throw Error(ErrorKind::InvalidParams, describe(violations));
  ValidatedConfig cfg{params, grid, {}};
  const double damping = params.tau * params.omega0;
  if (damping >= kSoftDampingLimit) {
    std::ostringstream os;
    os << "tau*omega0 = " << damping << " is not small; closed forms assume tau*omega0 << 1";
    cfg.warnings.push_back(os.str());
  }
  return cfg;
}

void validate_params(const SystemParams& params) {
  std::vector<Violation> out;
  params_violations(params, out);
  if (!out.empty()) throw Error(ErrorKind::InvalidParams, describe(out));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 over a mix of both inputs
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master) ^ mix(index + 0x632be59bd9b4e019ULL));
}

}  // namespace sedlab
