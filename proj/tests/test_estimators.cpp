#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sedlab/estimators.hpp"

using namespace sedlab;
using std::numbers::pi;

namespace {

std::vector<double> gaussian_series(std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, sigma);
  std::vector<double> out(n);
  for (auto& v : out) v = nd(rng);
  return out;
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("compensated sum keeps small terms") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
}

TEST_CASE("member statistics") {
  MemberStats m;
  for (double v : {1.0, 2.0, 3.0, 4.0}) m.add(v);
  CHECK(m.mean() == doctest::Approx(2.5));
  CHECK(m.stderr_of_mean() == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("periodogram of a tone obeys Parseval") {
  const double dt = 0.1, A = 2.0;
  const std::size_t n = 1 << 16, seg = 1 << 12;
  const double w = 2 * pi * 100.0 / (static_cast<double>(seg) * dt);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = A * std::sin(w * dt * static_cast<double>(i));
  const auto s = periodogram(x, dt, seg, seg / 2);
  CHECK(s.total_power() == doctest::Approx(A * A / 2).epsilon(0.01));
  CHECK(s.band_mean(w - 0.1, w + 0.1) > 100 * s.band_mean(2 * w, 3 * w));
}

TEST_CASE("white noise has a flat one-sided density") {
  const double dt = 0.5, sigma = 1.5;
  const auto x = gaussian_series(1 << 18, sigma, 1);
  const auto s = periodogram(x, dt, 1 << 10, 1 << 9);
  const double flat = sigma * sigma * dt / pi;
  const double nyq = pi / dt;
  CHECK(s.band_mean(0.1 * nyq, 0.4 * nyq) == doctest::Approx(flat).epsilon(0.03));
  CHECK(s.band_mean(0.5 * nyq, 0.9 * nyq) == doctest::Approx(flat).epsilon(0.03));
}

TEST_CASE("segment longer than the series is rejected") {
  std::vector<double> x(100, 1.0);
  CHECK_THROWS_AS(periodogram(x, 0.1, 256, 0), Error);
}

TEST_CASE("correlation matches the brute-force sum") {
  const std::size_t n = 2000, max_lag = 50;
  const auto a = gaussian_series(n, 1.0, 2);
  auto b = gaussian_series(n, 1.0, 3);
  for (std::size_t i = 3; i < n; ++i) b[i] += 0.6 * a[i - 3];
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i] / n;
    mb += b[i] / n;
  }
  CorrelationAccumulator acc(1.0, max_lag);
  acc.add(a, b);
  const auto two = acc.two_sided();
  for (long l = -static_cast<long>(max_lag); l <= static_cast<long>(max_lag); ++l) {
    double s = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const long j = static_cast<long>(i) + l;
      if (j < 0 || j >= static_cast<long>(n)) continue;
      s += (a[i] - ma) * (b[static_cast<std::size_t>(j)] - mb);
      ++cnt;
    }
    const auto idx = static_cast<std::size_t>(l + static_cast<long>(max_lag));
    CHECK(two.lags[idx] == doctest::Approx(static_cast<double>(l)));
    CHECK(two.values[idx] == doctest::Approx(s / static_cast<double>(cnt)).epsilon(1e-9));
  }
  CHECK(two.values[max_lag + 3] == doctest::Approx(0.6).epsilon(0.1));
  CHECK_THROWS_AS(correlation(a, b, 1.0, 500), Error);
}

TEST_CASE("Hilbert transform of a Lorentzian") {
  const double dt = 0.05, half = 500.0;
  const auto n = static_cast<std::size_t>(2 * half / dt) + 1;
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = -half + dt * static_cast<double>(i);
    f[i] = 1.0 / (1.0 + t * t);
  }
  const auto h = hilbert_transform(f);
  double err = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = -half + dt * static_cast<double>(i);
    if (std::abs(t) > 20) continue;
    err = std::max(err, std::abs(h[i] - t / (1.0 + t * t)));
  }
  CHECK(err < 5e-3);
}

TEST_CASE("Hilbert route is odd and linear") {
  const auto a = gaussian_series(4000, 1.0, 4);
  const auto b = gaussian_series(4000, 1.0, 5);
  CorrelationAccumulator acc(0.1, 200);
  acc.add(a, a);
  const auto c = hilbert_commutator(acc.two_sided());
  const std::size_t m = c.values.size();
  double odd = 0;
  for (std::size_t i = 0; i < m; ++i) odd = std::max(odd, std::abs(c.values[i] + c.values[m - 1 - i]));
  CHECK(odd < 1e-9);

  std::vector<double> ab(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) ab[i] = a[i] + 2 * b[i];
  const auto h1 = hilbert_transform(a), h2 = hilbert_transform(b), h12 = hilbert_transform(ab);
  double lin = 0;
  for (std::size_t i = 0; i < a.size(); ++i) lin = std::max(lin, std::abs(h12[i] - h1[i] - 2 * h2[i]));
  CHECK(lin < 1e-9);
}

TEST_CASE("spectral commutator of a single line") {
  BandSpectrum s;
  s.domega = 0.5;
  s.omega = {0.0, 0.5, 1.0, 1.5};
  s.density = {0.0, 0.0, 1.0, 0.0};
  s.lag_window = {};
  const auto c = spectral_commutator(s, 0.1, 30);
  for (std::size_t i = 0; i < c.lags.size(); ++i) {
    CHECK(c.values[i] == doctest::Approx(2 * 0.5 * std::sin(c.lags[i])).epsilon(1e-12));
  }
}

TEST_CASE("structure function of a ramp") {
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * static_cast<double>(i);
  const auto sf = structure_function(x, 0.2, {1, 5, 20});
  CHECK(sf.values[0] == doctest::Approx(0.25));
  CHECK(sf.values[1] == doctest::Approx(6.25));
  CHECK(sf.values[2] == doctest::Approx(100.0));
  CHECK(sf.lags[2] == doctest::Approx(4.0));
  CHECK_THROWS_AS(structure_function(x, 0.2, {200}), Error);
}

TEST_CASE("log-spaced steps are distinct and span the range") {
  const auto s = log_spaced_steps(10, 10000, 12);
  REQUIRE(!s.empty());
  CHECK(s.front() == 10);
  CHECK(s.back() == 10000);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
}

TEST_CASE("windowed energy of a pure oscillation is constant") {
  SystemParams p;
  const double dt = 0.01;
  std::vector<double> x(200000), q(200000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = dt * static_cast<double>(i);
    x[i] = std::cos(t);
    q[i] = -std::sin(t);
  }
  const auto w = windowed_energy(x, q, p, dt, 10.0);
  CHECK(w.mean == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(w.dispersion < 1e-9);
  CHECK(w.samples.size() >= 190);
  CHECK_THROWS_AS(windowed_energy(x, q, p, dt, 1000.0), Error);
}

TEST_CASE("moments and KS distance of a normal sample") {
  const auto x = gaussian_series(20000, 2.0, 6);
  const auto d = moments_and_histogram(x, 50, [](double v) { return normal_cdf(v, 4.0); });
  CHECK(d.n == 20000);
  CHECK(d.variance == doctest::Approx(4.0).epsilon(0.03));
  CHECK(std::abs(d.excess_kurtosis) < 0.15);
  CHECK(d.ks_distance < ks_critical(0.01, d.n));
  double mass = 0;
  for (std::size_t i = 0; i < d.histogram.density.size(); ++i) {
    mass += d.histogram.density[i] * (d.histogram.edges[i + 1] - d.histogram.edges[i]);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ks_critical(0.05, 10000) == doctest::Approx(0.01358).epsilon(1e-3));
  CHECK_THROWS_AS(moments_and_histogram(std::vector<double>{}, 50, [](double) { return 0.0; }), Error);
  CHECK_THROWS_AS(moments_and_histogram(x, 5, [](double) { return 0.0; }), Error);
}

TEST_CASE("KS distance detects the wrong variance") {
  const auto x = gaussian_series(20000, 1.0, 7);
  const auto d = moments_and_histogram(x, 50, [](double v) { return normal_cdf(v, 1.3); });
  CHECK(d.ks_distance > ks_critical(0.001, d.n));
}

TEST_CASE("line fit recovers an exact line and weights") {
  const std::vector<double> x{0, 1, 2, 3, 4};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 1);
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  // a wildly off point with huge sigma barely moves the fit
  y[4] = 100;
  const std::vector<double> sig{1, 1, 1, 1, 1e6};
  const auto g = fit_line(x, y, sig);
  CHECK(g.slope == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_AS(fit_line(std::vector<double>{1, 1}, std::vector<double>{0, 1}), Error);
}

}
