#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "sedlab/analytic.hpp"
#include "sedlab/spectra.hpp"

using namespace sedlab;
using namespace sedlab::analytic;
using std::numbers::pi;

namespace {

double integrate(const std::function<double(double)>& f, double lo, double hi, std::size_t n) {
  const double h = (hi - lo) / static_cast<double>(n);
  long double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += f(lo + (static_cast<double>(i) + 0.5) * h);
  return static_cast<double>(s) * h;
}

double integrate2(const std::function<double(double, double)>& f, double lim, std::size_t n) {
  const double h = 2 * lim / static_cast<double>(n);
  long double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s += f(-lim + (static_cast<double>(i) + 0.5) * h, -lim + (static_cast<double>(j) + 0.5) * h);
    }
  }
  return static_cast<double>(s) * h * h;
}

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("ground state moments") {
  SystemParams p;
  const auto gs = ground_state(p, 5.0);
  CHECK(gs.x_var == doctest::Approx(0.5));
  CHECK(gs.p_var == doctest::Approx(0.5));
  CHECK(gs.mean_energy == doctest::Approx(0.5));
  CHECK(gs.v_var == doctest::Approx(0.5));
  const double oracle = integrate(
      [&](double w) { return w * w * position_spectrum(SpectrumModel::zpf(), p, w); }, 0.0, 5.0,
      4'000'000);
  CHECK(gs.v_var_cutoff == doctest::Approx(oracle).epsilon(1e-6));

  p.hbar = 2.0;
  p.m = 4.0;
  p.omega0 = 0.5;
  const auto g2 = ground_state(p);
  CHECK(g2.x_var == doctest::Approx(2.0 / (2 * 4.0 * 0.5)));
  CHECK(g2.p_var == doctest::Approx(2.0 * 4.0 * 0.5 / 2));
  CHECK(heisenberg_product(p) == doctest::Approx(1.0));
}

TEST_CASE("ground state densities normalize") {
  SystemParams p;
  const auto gs = ground_state(p);
  CHECK(integrate([&](double x) { return gs.x_density.pdf(x); }, -10, 10, 100000) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(integrate([&](double u) { return gs.energy_density.pdf(u); }, 0, 40, 400000) ==
        doctest::Approx(1.0).epsilon(1e-7));
  CHECK(gs.energy_density.cdf(gs.mean_energy) == doctest::Approx(1 - std::exp(-1.0)));
  CHECK(gs.x_density.cdf(0.0) == doctest::Approx(0.5));
  const auto q = quantum_reference_densities(p);
  CHECK(q.x_var == doctest::Approx(0.5));
  CHECK(integrate([&](double x) { return q.rho0(x); }, -10, 10, 100000) == doctest::Approx(1.0));
  CHECK(integrate([&](double x) { return q.rho1(x); }, -10, 10, 100000) == doctest::Approx(1.0));
}

TEST_CASE("closed-form commutators") {
  SystemParams p;
  const auto c0 = commutator_closed(p, 0.0);
  CHECK(c0.c_xx == doctest::Approx(0.0));
  CHECK(c0.c_pp == doctest::Approx(0.0));
  CHECK(c0.c_xp == doctest::Approx(1.0));
  const auto c1 = commutator_closed(p, 1.0);
  CHECK(c1.c_xx == doctest::Approx((std::sin(1.0) + 0.01 * std::cos(1.0)) * std::exp(-0.005)));
  CHECK(c1.c_pp == doctest::Approx(std::sin(1.0) * std::exp(-0.005)));
  CHECK(c1.c_xp == doctest::Approx(std::cos(1.0)));
  const auto cm = commutator_closed(p, -1.0);
  CHECK(cm.c_xx == doctest::Approx(-c1.c_xx));
  CHECK(cm.c_pp == doctest::Approx(-c1.c_pp));
}

TEST_CASE("energy fluctuation forms") {
  SystemParams p;
  const auto f = energy_fluctuation(p, 100.0);  // tau w0^2 T = 1
  CHECK(f.recomputed == doctest::Approx(0.5 * std::sqrt(1 - std::exp(-1.0))));
  CHECK(f.printed == doctest::Approx((1 - std::exp(-1.0)) / 2));
  // the variance of a window mean of a process with correlation (1/4) e^{-gamma |t|}
  const double T = 100.0, g = p.gamma();
  const std::size_t n = 2000;
  const double h = T / static_cast<double>(n);
  long double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dt = h * (static_cast<double>(i) - static_cast<double>(j));
      s += 0.25 * std::exp(-g * std::abs(dt));
    }
  }
  const double oracle = std::sqrt(static_cast<double>(s) * h * h / (T * T));
  CHECK(f.double_integral == doctest::Approx(oracle).epsilon(1e-4));
  CHECK(f.double_integral == doctest::Approx(0.4289).epsilon(1e-3));

  // short windows approach the full dispersion hbar w0 / 2
  CHECK(energy_fluctuation(p, 1e-3).double_integral == doctest::Approx(0.5).epsilon(1e-4));
  CHECK_THROWS_AS(energy_fluctuation(p, 0.0), Error);
}

TEST_CASE("free particle closed forms") {
  SystemParams p;
  p.omega0 = 0.0;
  const auto f = free_particle(p, 1.0, 1.0, 1000.0);
  CHECK(f.thermal_dx2 == doctest::Approx(0.02));
  CHECK(f.thermal_v_var == doctest::Approx(1.0));
  CHECK(f.thermal_dv2_asymptote == doctest::Approx(2.0));
  const double slope = 2 * 0.01 / pi;
  CHECK(f.zpf_log_slope == doctest::Approx(slope));
  CHECK(f.zpf_dx2 == doctest::Approx(slope * (std::numbers::egamma + std::log(100.0))));
  CHECK(f.zpf_dv2 == doctest::Approx(2 / (pi * 0.01) * std::log(10.0)));
  CHECK(f.electron_size == doctest::Approx(std::sqrt(4 * std::numbers::egamma * 0.01 / (3 * pi))));
  CHECK(f.zpf_dv2_nonphysical == (f.zpf_dv2 > p.c() * p.c()));
  CHECK_THROWS_AS(free_particle(p, 1.0, 0.0, 10.0), Error);
}

TEST_CASE("coupled dipole predictions") {
  SystemParams p;
  const auto d = dipole_prediction(p, 0.1);
  CHECK(d.omega_plus == doctest::Approx(std::sqrt(0.9)));
  CHECK(d.omega_minus == doctest::Approx(std::sqrt(1.1)));
  CHECK(d.x_plus_var == doctest::Approx(0.52705).epsilon(1e-4));
  CHECK(d.x_minus_var == doctest::Approx(0.47673).epsilon(1e-4));
  CHECK(d.x1x2 == doctest::Approx(0.02516).epsilon(1e-3));
  CHECK(d.mean_H == doctest::Approx((d.omega_plus + d.omega_minus) / 2).epsilon(1e-12));
  CHECK(d.mean_H == doctest::Approx(0.998749).epsilon(1e-5));
  CHECK(d.E_int_paper_series == doctest::Approx(-0.005));
  CHECK(d.E_int_exact_series == doctest::Approx(-0.00125));
  CHECK(d.E_int_exact == doctest::Approx(d.E_int_exact_series).epsilon(0.02));
  CHECK(dipole_prediction(p, -0.1).mean_H == doctest::Approx(d.mean_H));
  CHECK(integrate2([&](double a, double b) { return d.joint_density(a, b); }, 6, 600) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(integrate2([&](double a, double b) { return d.quantum_joint_density(a, b); }, 6, 600) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(dipole_prediction(p, 1.0), Error);
}

TEST_CASE("Planck mean energy and its Boltzmann sum") {
  SystemParams p;
  const auto pp = planck_prediction(p, 0.5);
  CHECK(pp.mean_energy == doctest::Approx(0.656518).epsilon(1e-6));
  long double num = 0, den = 0;
  for (std::size_t n = 0; n < 200; ++n) {
    const long double w = std::exp(-static_cast<long double>(pp.level(n)) / 0.5L);
    num += pp.level(n) * w;
    den += w;
  }
  CHECK(static_cast<double>(num / den) == doctest::Approx(pp.mean_energy).epsilon(1e-12));
  CHECK(planck_prediction(p, 0.0).mean_energy == doctest::Approx(0.5));
  CHECK(planck_prediction(p, 50.0).mean_energy == doctest::Approx(50.0).epsilon(1e-4));
  CHECK_THROWS_AS(planck_prediction(p, -1.0), Error);
}

TEST_CASE("oscillator forms reject the free particle") {
  SystemParams p;
  p.omega0 = 0.0;
  CHECK_THROWS_AS(ground_state(p), Error);
  CHECK_THROWS_AS(commutator_closed(p, 1.0), Error);
}

}
