#include "sedlab/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "io.hpp"

namespace sedlab {

OscillatorStepper::OscillatorStepper(double omega, double gamma, double dt) {
  const double w2 = omega * omega;
  const double disc = w2 - 0.25 * gamma * gamma;
  if (!(omega > 0) || !(disc > 0)) {
    throw Error(ErrorKind::InvalidParams, "oscillator must be underdamped with omega > 0");
  }
  const double wd = std::sqrt(disc);
  const double decay = std::exp(-0.5 * gamma * dt);
  const double c = std::cos(wd * dt);
  const double s = std::sin(wd * dt);
  phi_ = {decay * (c + 0.5 * gamma / wd * s), decay * s / wd, -decay * w2 * s / wd,
          decay * (c - 0.5 * gamma / wd * s)};
  // (eps / w^2, 0) is the fixed point for constant drive
  drive_ = {(1.0 - phi_[0]) / w2, -phi_[2] / w2};
}

Trajectory simulate_oscillator(const SystemParams& params, const FieldRealization& field,
                               const OscillatorOptions& options) {
  if (!(params.omega0 > 0)) {
    throw Error(ErrorKind::InvalidParams, "time-domain integration needs omega0 > 0");
  }
  validate_params(params);
  const double dt = field.dt;
  const double burn = options.burn_in.value_or(10.0 / params.gamma());
  const auto n_burn = static_cast<std::size_t>(std::ceil(burn / dt - 1e-9));
  const std::size_t n = field.size();
  if (n_burn >= n) {
    std::ostringstream os;
    os << "burn-in " << burn << " >= trajectory duration " << dt * static_cast<double>(n);
    throw Error(ErrorKind::BurnInExceedsTrajectory, os.str());
  }

  const OscillatorStepper stepper(params.omega0, params.gamma(), dt);
  Trajectory traj;
  traj.params = params;
  traj.dt = dt;
  traj.t0 = dt * static_cast<double>(n_burn);
  traj.x.resize(n - n_burn);
  traj.v.resize(n - n_burn);

  double x = options.x0;
  double v = options.v0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= n_burn) {
      if (i == n_burn) {
        x += options.kick_x;
        v += options.kick_v;
      }
      traj.x[i - n_burn] = x;
      traj.v[i - n_burn] = v;
    }
    stepper.step(x, v, field.samples[i]);
  }
  if (options.with_momentum) traj.p = canonical_momentum(traj, params);
  return traj;
}

std::vector<double> canonical_momentum(const Trajectory& traj, const SystemParams& params) {
  const std::size_t n = traj.x.size();
  std::vector<double> p(n, 0.0);
  if (n == 0) return p;
  const double k = params.m * params.omega0 * params.omega0;
  // Neumaier-compensated running integral
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double inc = -k * 0.5 * traj.dt * (traj.x[i - 1] + traj.x[i]);
    const double t = sum + inc;
    comp += std::abs(sum) >= std::abs(inc) ? (sum - t) + inc : (inc - t) + sum;
    sum = t;
    p[i] = sum + comp;
  }
  double mean = 0.0;
  for (double value : p) mean += value;
  mean /= static_cast<double>(n);
  for (double& value : p) value -= mean;
  return p;
}

Trajectory sample_from_spectrum(const ProcessSpectrum& position_spectrum,
                                const SystemParams& params, double dt, std::size_t n,
                                double omega_cut, std::uint64_t seed, bool with_velocity) {
  auto synth = synthesize_process(position_spectrum, dt, n, omega_cut, seed, with_velocity);
  Trajectory traj;
  traj.params = params;
  traj.dt = dt;
  traj.x = std::move(synth.values);
  traj.v = std::move(synth.derivative);
  traj.p.assign(traj.x.size(), 0.0);
  return traj;
}

DipoleTrajectories simulate_dipoles(const SystemParams& params, const FieldPair& pair,
                                    bool with_momentum) {
  validate_params(params);
  const double stiffness = params.m * params.omega0 * params.omega0;
  if (!(std::abs(params.K) < stiffness)) {
    throw Error(ErrorKind::InvalidParams, "|K| must be below m*omega0^2 for real normal modes");
  }
  SystemParams plus_params = params;
  SystemParams minus_params = params;
  plus_params.K = minus_params.K = 0.0;
  plus_params.omega0 = std::sqrt(params.omega0 * params.omega0 - params.K / params.m);
  minus_params.omega0 = std::sqrt(params.omega0 * params.omega0 + params.K / params.m);

  OscillatorOptions opts;
  opts.with_momentum = with_momentum;
  opts.burn_in = 10.0 / std::min(plus_params.gamma(), minus_params.gamma());

  DipoleTrajectories out;
  out.plus = simulate_oscillator(plus_params, pair.plus, opts);
  out.minus = simulate_oscillator(minus_params, pair.minus, opts);

  const double r = 1.0 / std::numbers::sqrt2;
  auto combine = [&](double sign) {
    Trajectory t;
    t.params = params;
    t.dt = out.plus.dt;
    t.t0 = out.plus.t0;
    auto mix = [&](const std::vector<double>& a, const std::vector<double>& b) {
      std::vector<double> res(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) res[i] = r * (a[i] + sign * b[i]);
      return res;
    };
    t.x = mix(out.plus.x, out.minus.x);
    t.v = mix(out.plus.v, out.minus.v);
    if (with_momentum) t.p = mix(out.plus.p, out.minus.p);
    return t;
  };
  out.first = combine(+1.0);
  out.second = combine(-1.0);
  return out;
}

double mean_trajectory(double amplitude, double phase, const SystemParams& params, double t) {
  if (amplitude == 0.0) return 0.0;
  return amplitude * std::cos(params.omega0 * t + phase) * std::exp(-0.5 * params.gamma() * t);
}

bool looks_stationary(std::span<const double> series, double corr_samples, double n_sigma) {
  const std::size_t n = series.size();
  if (n < 8) return false;
  auto variance = [](std::span<const double> s) {
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    double acc = 0.0;
    for (double v : s) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(s.size());
  };
  const auto half = series.subspan(n / 2);
  const auto quarter = series.subspan(n - n / 4);
  const double vh = variance(half);
  const double vq = variance(quarter);
  const double blocks_h = std::max(1.0, static_cast<double>(half.size()) / corr_samples);
  const double blocks_q = std::max(1.0, static_cast<double>(quarter.size()) / corr_samples);
  const double se = std::sqrt(2.0 * vh * vh / blocks_h + 2.0 * vq * vq / blocks_q);
  return std::abs(vh - vq) <= n_sigma * se;
}

void dump_trajectory(const Trajectory& traj, std::uint64_t seed, const std::string& stem) {
  nlohmann::ordered_json meta;
  meta["dt"] = traj.dt;
  meta["t0"] = traj.t0;
  meta["n"] = traj.x.size();
  meta["seed"] = seed;
  meta["arrays"] = {"x", "v", "p"};
  std::vector<double> v = traj.v, p = traj.p;
  v.resize(traj.x.size(), 0.0);
  p.resize(traj.x.size(), 0.0);
  io::write_binary_with_sidecar(stem, {&traj.x, &v, &p}, meta);
}

}  // namespace sedlab
