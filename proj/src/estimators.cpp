#include "sedlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fft.hpp"

namespace sedlab {

void CompensatedSum::add(double value) {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    comp_ += (sum_ - t) + value;
  } else {
    comp_ += (value - t) + sum_;
  }
  sum_ = t;
}

void MemberStats::add(double value) {
  ++n_;
  sum_.add(value);
  sum_sq_.add(value * value);
}

double MemberStats::mean() const { return n_ ? sum_.value() / static_cast<double>(n_) : 0.0; }

double MemberStats::stderr_of_mean() const {
  if (n_ < 2) return 0.0;
  const double n = static_cast<double>(n_);
  const double m = mean();
  const double var = std::max(0.0, (sum_sq_.value() - n * m * m) / (n - 1.0));
  return std::sqrt(var / n);
}

// ---------------------------------------------------------------------------

double BandSpectrum::total_power() const {
  CompensatedSum s;
  for (double d : density) s.add(d * domega);
  return s.value();
}

double BandSpectrum::band_mean(double lo, double hi) const {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < omega.size(); ++k) {
    if (omega[k] >= lo && omega[k] < hi) {
      acc += density[k];
      ++count;
    }
  }
  return count ? acc / static_cast<double>(count) : 0.0;
}

PeriodogramAccumulator::PeriodogramAccumulator(double dt, std::size_t segment_length,
                                               std::size_t overlap)
    : dt_(dt), length_(segment_length) {
  if (segment_length < 4 || overlap >= segment_length) {
    throw Error(ErrorKind::InvalidParams, "segment length must exceed overlap and be >= 4");
  }
  step_ = segment_length - overlap;
  window_.resize(length_);
  double power = 0.0;
  for (std::size_t i = 0; i < length_; ++i) {
    window_[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(i) / double(length_)));
    power += window_[i] * window_[i];
  }
  window_power_ = power / static_cast<double>(length_);
  acc_.resize(length_ / 2 + 1);
}

void PeriodogramAccumulator::add(std::span<const double> series) {
  if (series.size() < length_) {
    std::ostringstream os;
    os << "segment length " << length_ << " exceeds series length " << series.size();
    throw Error(ErrorKind::SegmentTooLong, os.str());
  }
  const double domega = 2.0 * std::numbers::pi / (dt_ * static_cast<double>(length_));
  const double norm = 1.0 / (double(length_) * double(length_) * window_power_ * domega);
  std::vector<double> buf(length_);
  for (std::size_t start = 0; start + length_ <= series.size(); start += step_) {
    double mean = 0.0;
    for (std::size_t i = 0; i < length_; ++i) mean += series[start + i];
    mean /= static_cast<double>(length_);
    for (std::size_t i = 0; i < length_; ++i) buf[i] = (series[start + i] - mean) * window_[i];
    const auto spec = fft::forward(buf);
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const bool edge = (k == 0) || (length_ % 2 == 0 && k == length_ / 2);
      acc_[k].add((edge ? 1.0 : 2.0) * std::norm(spec[k]) * norm);
    }
    ++segments_;
  }
}

BandSpectrum PeriodogramAccumulator::result() const {
  BandSpectrum out;
  out.dt = dt_;
  out.domega = 2.0 * std::numbers::pi / (dt_ * static_cast<double>(length_));
  out.segments = segments_;
  out.omega.resize(acc_.size());
  out.density.resize(acc_.size());
  for (std::size_t k = 0; k < acc_.size(); ++k) {
    out.omega[k] = out.domega * static_cast<double>(k);
    out.density[k] = segments_ ? acc_[k].value() / static_cast<double>(segments_) : 0.0;
  }
  // taper autocorrelation via |FFT(w)|^2 on a padded lattice
  const std::size_t pad = fft::next_pow2(2 * length_);
  std::vector<double> w(pad, 0.0);
  std::copy(window_.begin(), window_.end(), w.begin());
  auto spec = fft::forward(w);
  for (auto& c : spec) c = std::norm(c);
  const auto ac = fft::backward(spec, pad);
  out.lag_window.resize(length_);
  for (std::size_t l = 0; l < length_; ++l) out.lag_window[l] = ac[l] / ac[0];
  return out;
}

BandSpectrum periodogram(std::span<const double> series, double dt, std::size_t segment_length,
                         std::size_t overlap) {
  PeriodogramAccumulator acc(dt, segment_length, overlap);
  acc.add(series);
  return acc.result();
}

// ---------------------------------------------------------------------------

CorrelationAccumulator::CorrelationAccumulator(double dt, std::size_t max_lag)
    : dt_(dt), max_lag_(max_lag), sum_(2 * max_lag + 1), pairs_(2 * max_lag + 1, 0.0),
      member_(2 * max_lag + 1) {}

void CorrelationAccumulator::add(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw Error(ErrorKind::InvalidParams, "correlation needs equal lengths");
  if (max_lag_ > n / 10) {
    std::ostringstream os;
    os << "max lag " << max_lag_ << " exceeds a tenth of the series length " << n;
    throw Error(ErrorKind::LagTooLong, os.str());
  }
  auto centered = [](std::span<const double> s, std::size_t pad) {
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    std::vector<double> out(pad, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] - mean;
    return out;
  };
  const std::size_t pad = fft::next_pow2(n + max_lag_ + 1);
  const auto fa = fft::forward(centered(a, pad));
  const bool same = a.data() == b.data();
  const auto fb = same ? fa : fft::forward(centered(b, pad));
  std::vector<fft::cplx> prod(fa.size());
  for (std::size_t k = 0; k < fa.size(); ++k) prod[k] = std::conj(fa[k]) * fb[k];
  const auto raw = fft::backward(prod, pad);
  const double inv = 1.0 / static_cast<double>(pad);
  for (std::size_t l = 0; l <= max_lag_; ++l) {
    const double count = static_cast<double>(n - l);
    const double pos = raw[l] * inv;
    const double neg = raw[(pad - l) % pad] * inv;
    sum_[max_lag_ + l].add(pos);
    pairs_[max_lag_ + l] += count;
    member_[max_lag_ + l].add(pos / count);
    if (l > 0) {
      sum_[max_lag_ - l].add(neg);
      pairs_[max_lag_ - l] += count;
      member_[max_lag_ - l].add(neg / count);
    }
  }
}

CorrelationSeries CorrelationAccumulator::two_sided() const {
  CorrelationSeries out;
  const std::size_t size = 2 * max_lag_ + 1;
  out.lags.resize(size);
  out.values.resize(size);
  out.std_error.resize(size);
  out.n_eff.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double l = static_cast<double>(i) - static_cast<double>(max_lag_);
    out.lags[i] = l * dt_;
    out.values[i] = pairs_[i] > 0 ? sum_[i].value() / pairs_[i] : 0.0;
    out.std_error[i] = member_[i].stderr_of_mean();
    out.n_eff[i] = pairs_[i];
  }
  return out;
}

CorrelationSeries CorrelationAccumulator::one_sided() const {
  auto full = two_sided();
  CorrelationSeries out;
  auto tail = [&](const std::vector<double>& v) {
    return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(max_lag_), v.end());
  };
  out.lags = tail(full.lags);
  out.values = tail(full.values);
  out.std_error = tail(full.std_error);
  out.n_eff = tail(full.n_eff);
  return out;
}

CorrelationSeries correlation(std::span<const double> a, std::span<const double> b, double dt,
                              std::size_t max_lag) {
  CorrelationAccumulator acc(dt, max_lag);
  acc.add(a, b);
  return acc.one_sided();
}

std::vector<double> hilbert_transform(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n == 0) return {};
  const std::size_t pad = fft::next_pow2(2 * n);
  std::vector<double> buf(pad, 0.0);
  std::copy(series.begin(), series.end(), buf.begin());
  auto spec = fft::forward(buf);
  // multiply by -i sign(k); DC and Nyquist vanish
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (k == 0 || k == pad / 2) {
      spec[k] = 0.0;
    } else {
      spec[k] = fft::cplx{spec[k].imag(), -spec[k].real()};
    }
  }
  auto out = fft::backward(spec, pad);
  out.resize(n);
  for (double& v : out) v /= static_cast<double>(pad);
  return out;
}

CommutatorSeries hilbert_commutator(const CorrelationSeries& two_sided) {
  const auto h = hilbert_transform(two_sided.values);
  const std::size_t n = h.size();
  const auto drop = static_cast<std::size_t>(0.05 * static_cast<double>(n));
  CommutatorSeries out;
  for (std::size_t i = drop; i + drop < n; ++i) {
    out.lags.push_back(two_sided.lags[i]);
    out.values.push_back(2.0 * h[i]);
  }
  return out;
}

CommutatorSeries spectral_commutator(const BandSpectrum& spectrum, double dlag,
                                     std::size_t n_lags) {
  CommutatorSeries out;
  out.lags.resize(n_lags);
  out.values.resize(n_lags);
  for (std::size_t l = 0; l < n_lags; ++l) {
    const double t = dlag * static_cast<double>(l);
    out.lags[l] = t;
    if (l == 0) {
      out.values[l] = 0.0;
      continue;
    }
    // rotate a phasor instead of calling sin per bin
    const fft::cplx rot = std::polar(1.0, spectrum.domega * t);
    fft::cplx phase{1.0, 0.0};
    CompensatedSum acc;
    for (std::size_t k = 0; k < spectrum.density.size(); ++k) {
      if (k % 256 == 0) phase = std::polar(1.0, spectrum.omega[k] * t);
      acc.add(spectrum.density[k] * phase.imag());
      phase *= rot;
    }
    double value = 2.0 * acc.value() * spectrum.domega;
    if (!spectrum.lag_window.empty() && spectrum.dt > 0) {
      const auto step = static_cast<std::size_t>(std::llround(t / spectrum.dt));
      if (step < spectrum.lag_window.size() && spectrum.lag_window[step] > 0) {
        value /= spectrum.lag_window[step];
      }
    }
    out.values[l] = value;
  }
  return out;
}

CommutatorSeries commutator(std::span<const double> a, std::span<const double> b, double dt,
                            std::size_t max_lag) {
  if (max_lag > a.size() / 10) {
    throw Error(ErrorKind::LagTooLong, "max lag exceeds a tenth of the series length");
  }
  const bool same = a.data() == b.data() && a.size() == b.size();
  if (same) {
    const auto spec = periodogram(a, dt, a.size(), 0);
    return spectral_commutator(spec, dt, max_lag + 1);
  }
  CorrelationAccumulator acc(dt, max_lag);
  acc.add(a, b);
  return hilbert_commutator(acc.two_sided());
}

double value_at(const std::vector<double>& lags, const std::vector<double>& values, double t) {
  if (lags.empty()) return 0.0;
  if (t <= lags.front()) return values.front();
  if (t >= lags.back()) return values.back();
  auto hi = std::lower_bound(lags.begin(), lags.end(), t);
  const auto i = static_cast<std::size_t>(hi - lags.begin());
  const double f = (t - lags[i - 1]) / (lags[i] - lags[i - 1]);
  return values[i - 1] + f * (values[i] - values[i - 1]);
}

// ---------------------------------------------------------------------------

StructureFunctionAccumulator::StructureFunctionAccumulator(double dt,
                                                           std::vector<std::size_t> lag_steps)
    : dt_(dt), steps_(std::move(lag_steps)), sum_(steps_.size()), count_(steps_.size(), 0.0),
      member_(steps_.size()) {}

void StructureFunctionAccumulator::add(std::span<const double> x) {
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    const std::size_t l = steps_[k];
    if (l > n / 10) {
      std::ostringstream os;
      os << "lag " << l << " exceeds a tenth of the series length " << n;
      throw Error(ErrorKind::LagTooLong, os.str());
    }
    CompensatedSum s;
    for (std::size_t i = 0; i + l < n; ++i) {
      const double d = x[i + l] - x[i];
      s.add(d * d);
    }
    const double pairs = static_cast<double>(n - l);
    sum_[k].add(s.value());
    count_[k] += pairs;
    member_[k].add(s.value() / pairs);
  }
}

StructureFunction StructureFunctionAccumulator::result() const {
  StructureFunction out;
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    out.lags.push_back(dt_ * static_cast<double>(steps_[k]));
    out.values.push_back(count_[k] > 0 ? sum_[k].value() / count_[k] : 0.0);
    out.std_error.push_back(member_[k].stderr_of_mean());
  }
  return out;
}

StructureFunction structure_function(std::span<const double> x, double dt,
                                     const std::vector<std::size_t>& lag_steps) {
  StructureFunctionAccumulator acc(dt, lag_steps);
  acc.add(x);
  return acc.result();
}

std::vector<std::size_t> log_spaced_steps(std::size_t lo, std::size_t hi, std::size_t count) {
  std::vector<std::size_t> out;
  if (lo == 0 || hi < lo || count == 0) return out;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : double(i) / double(count - 1);
    const auto s = static_cast<std::size_t>(std::llround(std::exp(a + f * (b - a))));
    if (out.empty() || s > out.back()) out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------

void append_windowed_energies(std::span<const double> x, std::span<const double> p,
                              const SystemParams& params, double dt, double T_window,
                              std::vector<double>& out) {
  const std::size_t n = x.size();
  if (p.size() != n) throw Error(ErrorKind::InvalidParams, "x and p lengths differ");
  if (n < 2) throw Error(ErrorKind::EmptySeries, "trajectory too short for windows");
  const double duration = dt * static_cast<double>(n - 1);
  if (T_window > duration / 10.0 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "window " << T_window << " exceeds a tenth of the duration " << duration;
    throw Error(ErrorKind::WindowTooLong, os.str());
  }
  const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(T_window / dt)));
  const double span_t = dt * static_cast<double>(steps);
  const double k = params.m * params.omega0 * params.omega0;
  auto energy = [&](std::size_t i) { return k * x[i] * x[i] + p[i] * p[i] / params.m; };
  for (std::size_t start = 0; start + steps < n; start += steps) {
    CompensatedSum integral;
    integral.add(0.5 * energy(start));
    for (std::size_t i = start + 1; i < start + steps; ++i) integral.add(energy(i));
    integral.add(0.5 * energy(start + steps));
    out.push_back(integral.value() * dt / (2.0 * span_t));
  }
}

EnergyWindowStats summarize_windows(double T_window, std::vector<double> samples) {
  EnergyWindowStats stats;
  stats.T_window = T_window;
  stats.samples = std::move(samples);
  if (stats.samples.empty()) throw Error(ErrorKind::EmptySeries, "no energy windows");
  CompensatedSum s;
  for (double u : stats.samples) s.add(u);
  stats.mean = s.value() / static_cast<double>(stats.samples.size());
  CompensatedSum sq;
  for (double u : stats.samples) sq.add((u - stats.mean) * (u - stats.mean));
  stats.dispersion = std::sqrt(sq.value() / static_cast<double>(stats.samples.size()));
  return stats;
}

EnergyWindowStats windowed_energy(std::span<const double> x, std::span<const double> p,
                                  const SystemParams& params, double dt, double T_window) {
  std::vector<double> samples;
  append_windowed_energies(x, p, params, dt, T_window, samples);
  return summarize_windows(T_window, std::move(samples));
}

// ---------------------------------------------------------------------------

DistributionSummary moments_and_histogram(std::span<const double> series, std::size_t n_bins,
                                          const std::function<double(double)>& reference_cdf) {
  if (series.empty()) throw Error(ErrorKind::EmptySeries, "empty series");
  if (n_bins < 10) throw Error(ErrorKind::InvalidParams, "n_bins must be >= 10");
  DistributionSummary out;
  out.n = series.size();
  const double n = static_cast<double>(out.n);
  CompensatedSum s;
  for (double v : series) s.add(v);
  out.mean = s.value() / n;
  CompensatedSum m2, m4;
  for (double v : series) {
    const double d = (v - out.mean) * (v - out.mean);
    m2.add(d);
    m4.add(d * d);
  }
  out.variance = m2.value() / n;
  out.excess_kurtosis = out.variance > 0 ? (m4.value() / n) / (out.variance * out.variance) - 3.0 : 0.0;

  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  const double lo = *lo_it;
  const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
  const double width = (hi - lo) / static_cast<double>(n_bins);
  out.histogram.edges.resize(n_bins + 1);
  for (std::size_t b = 0; b <= n_bins; ++b) out.histogram.edges[b] = lo + width * double(b);
  std::vector<double> counts(n_bins, 0.0);
  for (double v : series) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    counts[std::min(b, n_bins - 1)] += 1.0;
  }
  out.histogram.density.resize(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) out.histogram.density[b] = counts[b] / (n * width);

  if (reference_cdf) {
    std::vector<double> sorted(series.begin(), series.end());
    std::sort(sorted.begin(), sorted.end());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double f = reference_cdf(sorted[i]);
      d = std::max({d, double(i + 1) / n - f, f - double(i) / n});
    }
    out.ks_distance = d;
  }
  return out;
}

double ks_critical(double alpha, std::size_t n) {
  double c = 0.0;
  if (alpha >= 0.1) c = 1.224;
  else if (alpha >= 0.05) c = 1.358;
  else if (alpha >= 0.01) c = 1.628;
  else c = 1.949;
  return c / std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1)));
}

double normal_cdf(double x, double variance) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

// ---------------------------------------------------------------------------

LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> sigma) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::InvalidParams, "line fit needs >= 2 paired points");
  }
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = sigma.empty() || sigma[i] <= 0 ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (det == 0.0) throw Error(ErrorKind::InvalidParams, "degenerate abscissa in line fit");
  LineFit fit;
  fit.slope = (sw * sxy - sx * sy) / det;
  fit.intercept = (sxx * sy - sx * sxy) / det;
  if (!sigma.empty()) {
    fit.slope_stderr = std::sqrt(sw / det);
    fit.intercept_stderr = std::sqrt(sxx / det);
  } else {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.slope * x[i] - fit.intercept;
      rss += r * r;
    }
    const double s2 = x.size() > 2 ? rss / double(x.size() - 2) : 0.0;
    fit.slope_stderr = std::sqrt(s2 * sw / det);
    fit.intercept_stderr = std::sqrt(s2 * sxx / det);
  }
  return fit;
}

void write_series_csv(const std::string& path, std::span<const double> abscissa,
                      std::span<const double> values, std::span<const double> std_error) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out.precision(17);
  out << "lag_or_omega,value,stderr\n";
  for (std::size_t i = 0; i < abscissa.size() && i < values.size(); ++i) {
    out << abscissa[i] << ',' << values[i] << ',' << (i < std_error.size() ? std_error[i] : 0.0)
        << '\n';
  }
}

}  // namespace sedlab
