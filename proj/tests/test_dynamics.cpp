#include <doctest.h>

#include <array>
#include <cmath>

#include "sedlab/dynamics.hpp"
#include "sedlab/noise.hpp"

using namespace sedlab;

namespace {

// classical RK4 on x'' + g x' + w^2 x = f with a fine internal step
std::array<double, 2> rk4(double x, double v, double w, double g, double f, double t_end,
                          double h) {
  auto acc = [&](double xx, double vv) { return f - g * vv - w * w * xx; };
  const auto steps = static_cast<std::size_t>(std::llround(t_end / h));
  for (std::size_t i = 0; i < steps; ++i) {
    const double k1x = v, k1v = acc(x, v);
    const double k2x = v + 0.5 * h * k1v, k2v = acc(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
    const double k3x = v + 0.5 * h * k2v, k3v = acc(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
    const double k4x = v + h * k3v, k4v = acc(x + h * k3x, v + h * k3v);
    x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return {x, v};
}

FieldRealization field_of(std::vector<double> samples, double dt) {
  FieldRealization f;
  f.dt = dt;
  f.samples = std::move(samples);
  return f;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("stepper matches RK4 for free decay and constant forcing") {
  const double w = 1.0, g = 0.01, dt = 0.1;
  for (double f : {0.0, 0.7}) {
    OscillatorStepper st(w, g, dt);
    double x = 1.0, v = 0.0;
    for (int i = 0; i < 1000; ++i) st.step(x, v, f);
    const auto ref = rk4(1.0, 0.0, w, g, f, 100.0, 1e-3);
    CHECK(x == doctest::Approx(ref[0]).epsilon(1e-9));
    CHECK(v == doctest::Approx(ref[1]).epsilon(1e-9));
  }
}

TEST_CASE("mean trajectory closed form") {
  SystemParams p;
  CHECK(mean_trajectory(1.0, 0.0, p, 0.0) == doctest::Approx(1.0));
  CHECK(mean_trajectory(2.0, 0.0, p, 200.0) == doctest::Approx(2 * std::cos(200.0) * std::exp(-1.0)));
  CHECK(mean_trajectory(1.0, 0.5, p, 3.0) ==
        doctest::Approx(std::cos(3.5) * std::exp(-0.015)));
}

TEST_CASE("response is linear in the field") {
  SystemParams p;
  const std::size_t n = 1 << 14;
  std::vector<double> a(n), b(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = std::sin(0.37 * static_cast<double>(i)) + 0.1;
    b[i] = std::cos(0.011 * static_cast<double>(i * i % 977));
    ab[i] = a[i] + b[i];
  }
  OscillatorOptions opt;
  opt.burn_in = 10.0;
  const auto xa = simulate_oscillator(p, field_of(a, 0.1), opt);
  const auto xb = simulate_oscillator(p, field_of(b, 0.1), opt);
  const auto xab = simulate_oscillator(p, field_of(ab, 0.1), opt);
  double dev = 0, scale = 0;
  for (std::size_t i = 0; i < xab.size(); ++i) {
    dev = std::max(dev, std::abs(xab.x[i] - xa.x[i] - xb.x[i]));
    scale = std::max(scale, std::abs(xab.x[i]));
  }
  CHECK(dev <= 1e-12 * scale);
}

TEST_CASE("burn-in longer than the trajectory is rejected") {
  SystemParams p;
  OscillatorOptions opt;
  opt.burn_in = 1e6;
  try {
    simulate_oscillator(p, field_of(std::vector<double>(1000, 0.0), 0.1), opt);
    FAIL("expected BurnInExceedsTrajectory");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BurnInExceedsTrajectory);
  }
}

TEST_CASE("canonical momentum has zero mean and follows p' = -m w0^2 x") {
  SystemParams p;
  GridSpec g;
  g.dt = 0.1;
  g.omega_cut = 5;
  g.n_samples = 1 << 15;
  const auto f = synthesize_field(SpectrumModel::zpf(), p, g, 17);
  const auto tr = simulate_oscillator(p, f);
  long double mean = 0;
  for (double v : tr.p) mean += v;
  CHECK(std::abs(static_cast<double>(mean / tr.p.size())) < 1e-10);
  for (std::size_t i = 100; i < 110; ++i) {
    const double dp = tr.p[i + 1] - tr.p[i];
    CHECK(dp == doctest::Approx(-0.5 * g.dt * (tr.x[i] + tr.x[i + 1])).epsilon(1e-9));
  }
}

TEST_CASE("dipole coordinates are the normal-mode rotation") {
  SystemParams p;
  p.K = 0.1;
  GridSpec g;
  g.dt = 0.1;
  g.omega_cut = 5;
  g.n_samples = 1 << 15;
  const auto pair = synthesize_pair(SpectrumModel::zpf(), p, g, 23);
  const auto d = simulate_dipoles(p, pair, false);
  double dev = 0;
  for (std::size_t i = 0; i < d.first.size(); ++i) {
    dev = std::max(dev, std::abs(d.first.x[i] - (d.plus.x[i] + d.minus.x[i]) / std::sqrt(2.0)));
    dev = std::max(dev, std::abs(d.second.x[i] - (d.plus.x[i] - d.minus.x[i]) / std::sqrt(2.0)));
  }
  CHECK(dev < 1e-12);
}

TEST_CASE("ground-state position variance is resolved by the default step") {
  SystemParams p;
  GridSpec g;
  g.dt = 0.1;
  g.omega_cut = 5;
  g.n_samples = 1 << 18;
  long double sum = 0, count = 0;
  for (int k = 0; k < 16; ++k) {
    const auto f = synthesize_field(SpectrumModel::zpf(), p, g, derive_seed(99, k));
    const auto tr = simulate_oscillator(p, f);
    for (double x : tr.x) sum += x * x;
    count += tr.x.size();
  }
  CHECK(static_cast<double>(sum / count) == doctest::Approx(0.5).epsilon(0.08));
}

}
