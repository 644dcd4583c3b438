#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sedlab/core.hpp"

namespace sedlab {

// ---------------------------------------------------------------------------
// Summation helpers

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double value);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Mean and standard error over independent ensemble members.
class MemberStats {
 public:
  void add(double value);
  std::size_t count() const { return n_; }
  double mean() const;
  /// Standard error of the mean; 0 with fewer than two members.
  double stderr_of_mean() const;

 private:
  std::size_t n_ = 0;
  CompensatedSum sum_;
  CompensatedSum sum_sq_;
};

// ---------------------------------------------------------------------------
// Spectra

/// One-sided density estimate on omega_k = k domega, k = 0 .. L/2.
struct BandSpectrum {
  double domega = 0.0;
  std::vector<double> omega;
  std::vector<double> density;
  std::size_t segments = 0;
  /// Sampling step of the analysed series.
  double dt = 0.0;
  /// Normalized autocorrelation of the taper at lag l (samples); dividing a
  /// lag-domain transform by it removes the window bias.
  std::vector<double> lag_window;

  /// sum density * domega
  double total_power() const;
  /// Mean density over bins with lo <= omega < hi.
  double band_mean(double lo, double hi) const;
};

/// Welch estimate: Hann-windowed segments with per-segment mean removal,
/// window-power corrected so that sum S domega matches the variance.
class PeriodogramAccumulator {
 public:
  PeriodogramAccumulator(double dt, std::size_t segment_length, std::size_t overlap);
  void add(std::span<const double> series);
  BandSpectrum result() const;

 private:
  double dt_;
  std::size_t length_;
  std::size_t step_;
  std::vector<double> window_;
  double window_power_ = 0.0;
  std::vector<CompensatedSum> acc_;
  std::size_t segments_ = 0;
};

BandSpectrum periodogram(std::span<const double> series, double dt, std::size_t segment_length,
                         std::size_t overlap);

// ---------------------------------------------------------------------------
// Correlations and commutators

/// <a(s) b(s + lag)> on a uniform lag grid.  `lags` run from -max to +max for
/// two-sided series and from 0 for one-sided ones.
struct CorrelationSeries {
  std::vector<double> lags;
  std::vector<double> values;
  std::vector<double> std_error;
  std::vector<double> n_eff;
};

/// Unbiased lag estimator (sum over N - |l| pairs, means removed per member),
/// accumulated over ensemble members via zero-padded FFTs.
class CorrelationAccumulator {
 public:
  CorrelationAccumulator(double dt, std::size_t max_lag);
  void add(std::span<const double> a, std::span<const double> b);
  CorrelationSeries one_sided() const;
  CorrelationSeries two_sided() const;
  double dt() const { return dt_; }

 private:
  double dt_;
  std::size_t max_lag_;
  // index max_lag_ + l holds lag l, l in [-max_lag, max_lag]
  std::vector<CompensatedSum> sum_;
  std::vector<double> pairs_;
  std::vector<MemberStats> member_;
};

/// Throws LagTooLong unless max_lag <= size / 10.
CorrelationSeries correlation(std::span<const double> a, std::span<const double> b, double dt,
                              std::size_t max_lag);

/// [a(0), b(t)] = i c(t).
struct CommutatorSeries {
  std::vector<double> lags;
  std::vector<double> values;
};

/// Discrete Hilbert transform g(u) = (1/pi) P int f(t) / (u - t) dt of a
/// uniformly sampled series, through the analytic-signal construction on a
/// zero-padded FFT lattice.
std::vector<double> hilbert_transform(std::span<const double> series);

/// c = 2 H[C_ab] from a two-sided cross-correlation; 5% of lags are dropped
/// at each end of the window.
CommutatorSeries hilbert_commutator(const CorrelationSeries& two_sided);

/// c(t) = 2 sum_k S(w_k) sin(w_k t) dw for t = 0, dlag, ..., (n_lags - 1) dlag.
CommutatorSeries spectral_commutator(const BandSpectrum& spectrum, double dlag, std::size_t n_lags);

/// Single-series convenience.  When `a` and `b` are the same series the
/// spectral sine route on a full-length periodogram is used; otherwise the
/// Hilbert route on the cross-correlation.
CommutatorSeries commutator(std::span<const double> a, std::span<const double> b, double dt,
                            std::size_t max_lag);

/// Value of a lag series at time t by linear interpolation.
double value_at(const std::vector<double>& lags, const std::vector<double>& values, double t);

// ---------------------------------------------------------------------------
// Structure function

struct StructureFunction {
  std::vector<double> lags;
  std::vector<double> values;
  std::vector<double> std_error;
};

class StructureFunctionAccumulator {
 public:
  StructureFunctionAccumulator(double dt, std::vector<std::size_t> lag_steps);
  void add(std::span<const double> x);
  StructureFunction result() const;

 private:
  double dt_;
  std::vector<std::size_t> steps_;
  std::vector<CompensatedSum> sum_;
  std::vector<double> count_;
  std::vector<MemberStats> member_;
};

StructureFunction structure_function(std::span<const double> x, double dt,
                                     const std::vector<std::size_t>& lag_steps);

/// Roughly log-spaced distinct lag steps covering [lo, hi] (in samples).
std::vector<std::size_t> log_spaced_steps(std::size_t lo, std::size_t hi, std::size_t count);

// ---------------------------------------------------------------------------
// Windowed energies

struct EnergyWindowStats {
  double T_window = 0.0;
  std::vector<double> samples;
  double mean = 0.0;
  double dispersion = 0.0;
};

/// U_T = (1/2T) int [m w0^2 x^2 + p^2 / m] dt over consecutive disjoint
/// windows of T (trapezoidal), appended to `out`.  Throws WindowTooLong unless
/// T <= duration / 10.
void append_windowed_energies(std::span<const double> x, std::span<const double> p,
                              const SystemParams& params, double dt, double T_window,
                              std::vector<double>& out);

EnergyWindowStats summarize_windows(double T_window, std::vector<double> samples);

EnergyWindowStats windowed_energy(std::span<const double> x, std::span<const double> p,
                                  const SystemParams& params, double dt, double T_window);

// ---------------------------------------------------------------------------
// Distributions

struct Histogram {
  std::vector<double> edges;
  std::vector<double> density;
};

struct DistributionSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double excess_kurtosis = 0.0;
  Histogram histogram;
  double ks_distance = 0.0;
};

/// Throws EmptySeries for an empty input and InvalidParams for n_bins < 10.
DistributionSummary moments_and_histogram(std::span<const double> series, std::size_t n_bins,
                                          const std::function<double(double)>& reference_cdf);

/// Kolmogorov-Smirnov critical distance c(alpha) / sqrt(n) for alpha in
/// {0.10, 0.05, 0.01, 0.001}.
double ks_critical(double alpha, std::size_t n);

double normal_cdf(double x, double variance);

// ---------------------------------------------------------------------------
// Fitting and export

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
};

/// Weighted least squares y = slope x + intercept; weights 1/sigma^2 (all
/// equal when `sigma` is empty).
LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> sigma = {});

/// CSV with header `lag_or_omega,value,stderr`.
void write_series_csv(const std::string& path, std::span<const double> abscissa,
                      std::span<const double> values, std::span<const double> std_error = {});

}  // namespace sedlab
