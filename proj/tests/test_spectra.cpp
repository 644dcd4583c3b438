#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "sedlab/spectra.hpp"

using namespace sedlab;
using std::numbers::pi;

TEST_SUITE("spectra") {

TEST_CASE("field spectra at unit frequency") {
  SystemParams p;
  CHECK(field_spectrum(SpectrumModel::zpf(), p, 1.0) == doctest::Approx(3.1831e-3).epsilon(1e-4));
  const double zpf = p.tau / pi;
  CHECK(field_spectrum(SpectrumModel::planck(0.5), p, 1.0) ==
        doctest::Approx(zpf / std::tanh(1.0)).epsilon(1e-12));
  CHECK(field_spectrum(SpectrumModel::rayleigh_jeans(2.0), p, 3.0) ==
        doctest::Approx(2 * 2.0 * p.tau * 9.0 / pi).epsilon(1e-12));
  CHECK(field_spectrum(SpectrumModel::zpf(), p, 0.0) == 0.0);
}

TEST_CASE("Planck reduces to ZPF at zero temperature and to RJ at high temperature") {
  SystemParams p;
  for (double w : {0.1, 1.0, 10.0}) {
    CHECK(field_spectrum(SpectrumModel::planck(0.0), p, w) ==
          doctest::Approx(field_spectrum(SpectrumModel::zpf(), p, w)).epsilon(1e-12));
    CHECK(field_spectrum(SpectrumModel::planck(1e-6), p, w) ==
          doctest::Approx(field_spectrum(SpectrumModel::zpf(), p, w)).epsilon(1e-12));
  }
  const double kT = 1e4, w = 0.5;
  CHECK(field_spectrum(SpectrumModel::planck(kT), p, w) ==
        doctest::Approx(field_spectrum(SpectrumModel::rayleigh_jeans(kT), p, w)).epsilon(1e-6));
}

TEST_CASE("transfer gain and resonant position spectrum") {
  SystemParams p;
  CHECK(position_transfer(1.0, p) == doctest::Approx(1e4).epsilon(1e-12));
  CHECK(position_spectrum(SpectrumModel::zpf(), p, 1.0) == doctest::Approx(31.831).epsilon(1e-4));
  const double w = 0.7;
  const double direct = 1.0 / (std::pow(1 - w * w, 2) + p.tau * p.tau * std::pow(w, 6));
  CHECK(position_transfer(w, p) == doctest::Approx(direct).epsilon(1e-13));
  CHECK(momentum_spectrum(SpectrumModel::zpf(), p, w) ==
        doctest::Approx(position_spectrum(SpectrumModel::zpf(), p, w) / (w * w)).epsilon(1e-13));
}

TEST_CASE("free particle edge cases") {
  SystemParams p;
  p.omega0 = 0.0;
  CHECK(std::isinf(position_transfer(0.0, p)));
  CHECK(momentum_spectrum(SpectrumModel::zpf(), p, 2.0) == 0.0);
}

TEST_CASE("domain errors") {
  SystemParams p;
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  CHECK(kind_of([&] { field_spectrum(SpectrumModel::zpf(), p, -1.0); }) ==
        ErrorKind::NegativeFrequency);
  CHECK(kind_of([&] { momentum_spectrum(SpectrumModel::zpf(), p, 0.0); }) ==
        ErrorKind::ZeroFrequencyMomentum);
  CHECK(kind_of([&] { spectral_moment([](double) { return 1.0; }, 0, 2.0, 1.0); }) ==
        ErrorKind::InvalidParams);
  CHECK(kind_of([] { spectrum_kind_from_string("pink"); }) == ErrorKind::InvalidParams);
}

TEST_CASE("tabulated spectrum") {
  SystemParams p;
  const auto model = SpectrumModel::tabulated({{0.0, 0.0}, {1.0, 2.0}, {3.0, 2.0}});
  CHECK(field_spectrum(model, p, 0.5) == doctest::Approx(1.0));
  CHECK(field_spectrum(model, p, 2.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(SpectrumModel::tabulated({{1.0, 1.0}, {0.5, 1.0}}), Error);
  CHECK_THROWS_AS(SpectrumModel::tabulated({{0.0, -1.0}, {1.0, 1.0}}), Error);

  std::istringstream csv("omega,S\n0,0\n1,2\n3,2\n");
  const auto loaded = load_tabulated_csv(csv);
  CHECK(loaded.table.size() == 3);
  CHECK(field_spectrum(loaded, p, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("quadrature against a fine midpoint sum") {
  SystemParams p;
  auto sx = [&](double w) { return position_spectrum(SpectrumModel::zpf(), p, w); };
  const auto q = spectral_moment(sx, 0, 0.0, 5.0, p);
  // midpoint oracle on a grid far finer than the resonance width
  const std::size_t n = 4'000'000;
  const double h = 5.0 / static_cast<double>(n);
  long double sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += sx((static_cast<double>(i) + 0.5) * h);
  const double oracle = static_cast<double>(sum) * h;
  CHECK(q.value == doctest::Approx(oracle).epsilon(1e-6));
  // close to the narrow-line value hbar / 2 m w0 plus the off-resonance tail
  CHECK(q.value == doctest::Approx(0.5).epsilon(0.02));
  CHECK(q.abs_error <= 1e-9 * std::abs(q.value) + 1e-14);
}

TEST_CASE("quadrature of a polynomial moment") {
  const auto q = spectral_moment([](double w) { return w; }, 2, 0.0, 2.0);
  CHECK(q.value == doctest::Approx(4.0).epsilon(1e-12));
}

}
