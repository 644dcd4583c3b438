#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sedlab/noise.hpp"

using namespace sedlab;
using std::numbers::pi;

namespace {

double mean_sq(const std::vector<double>& v) {
  long double s = 0;
  for (double x : v) s += static_cast<long double>(x) * x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

GridSpec small_grid(double dt, double omega_cut, std::size_t n) {
  GridSpec g;
  g.dt = dt;
  g.omega_cut = omega_cut;
  g.n_samples = n;
  return g;
}

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("zero spectrum yields zeros") {
  const auto y = synthesize_process([](double) { return 0.0; }, 0.1, 1024, 5.0, 7, true);
  for (double v : y.values) CHECK(v == 0.0);
  for (double v : y.derivative) CHECK(v == 0.0);
}

TEST_CASE("ZPF field variance matches the integrated spectrum") {
  SystemParams p;
  const double dt = 0.05, wc = 20.0;
  const std::size_t n = 1 << 16;
  const double dw = 2 * pi / (dt * static_cast<double>(n));
  // lattice sum of S dw, the exact expectation of the sample variance
  double lattice = 0;
  for (std::size_t j = 1; static_cast<double>(j) * dw <= wc; ++j) {
    lattice += field_spectrum(SpectrumModel::zpf(), p, static_cast<double>(j) * dw) * dw;
  }
  const double integral = p.tau * std::pow(wc, 4) / (4 * pi);
  CHECK(integral == doctest::Approx(127.32).epsilon(1e-4));
  CHECK(lattice == doctest::Approx(integral).epsilon(2e-3));

  double avg = 0;
  const int members = 8;
  for (int k = 0; k < members; ++k) {
    const auto f = synthesize_field(SpectrumModel::zpf(), p, small_grid(dt, wc, n), derive_seed(3, k));
    avg += mean_sq(f.samples) / members;
  }
  CHECK(avg == doctest::Approx(lattice).epsilon(0.02));
}

TEST_CASE("synthesis is deterministic in the seed") {
  SystemParams p;
  const auto g = small_grid(0.1, 5.0, 1 << 15);
  const auto a = synthesize_field(SpectrumModel::zpf(), p, g, 11);
  const auto b = synthesize_field(SpectrumModel::zpf(), p, g, 11);
  const auto c = synthesize_field(SpectrumModel::zpf(), p, g, 12);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != c.samples);
}

TEST_CASE("pair combinations are orthogonal rotations") {
  SystemParams p;
  const auto g = small_grid(0.1, 5.0, 1 << 15);
  const auto pr = synthesize_pair(SpectrumModel::zpf(), p, g, 5);
  double max_dev = 0;
  for (std::size_t i = 0; i < pr.first.size(); ++i) {
    const double lhs = pr.plus.samples[i] + pr.minus.samples[i];
    max_dev = std::max(max_dev, std::abs(lhs - std::sqrt(2.0) * pr.first.samples[i]));
  }
  CHECK(max_dev < 1e-12);
  // independent members: normalized overlap well inside sampling noise
  long double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < pr.first.size(); ++i) {
    ab += pr.first.samples[i] * pr.second.samples[i];
    aa += pr.first.samples[i] * pr.first.samples[i];
    bb += pr.second.samples[i] * pr.second.samples[i];
  }
  CHECK(std::abs(static_cast<double>(ab / std::sqrt(aa * bb))) < 0.05);
}

TEST_CASE("derivative matches a centered difference") {
  auto s = [](double w) { return w < 1.0 ? 1.0 : 0.0; };
  const double dt = 0.01;
  const auto y = synthesize_process(s, dt, 1 << 14, 2.0, 9, true);
  double err = 0, scale = 0;
  for (std::size_t i = 1; i + 1 < y.values.size(); ++i) {
    const double fd = (y.values[i + 1] - y.values[i - 1]) / (2 * dt);
    err = std::max(err, std::abs(fd - y.derivative[i]));
    scale = std::max(scale, std::abs(y.derivative[i]));
  }
  CHECK(err < 1e-4 * scale);
}

TEST_CASE("band beyond Nyquist is rejected") {
  try {
    synthesize_process([](double) { return 1.0; }, 0.1, 1024, 40.0, 1);
    FAIL("expected GridTooCoarse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridTooCoarse);
  }
}

}
