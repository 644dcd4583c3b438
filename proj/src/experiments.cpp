#include "sedlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "sedlab/analytic.hpp"
#include "sedlab/dynamics.hpp"
#include "sedlab/ensemble.hpp"
#include "sedlab/estimators.hpp"
#include "sedlab/noise.hpp"
#include "sedlab/spectra.hpp"

namespace sedlab {

const char* to_string(RowMode mode) {
  switch (mode) {
    case RowMode::Relative: return "relative";
    case RowMode::Absolute: return "absolute";
    case RowMode::AtMost: return "at_most";
    case RowMode::AtLeast: return "at_least";
    case RowMode::Sampling: return "sampling";
    case RowMode::Report: return "report";
  }
  return "report";
}

bool ExperimentReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

const ReportRow& ExperimentReport::row(const std::string& quantity) const {
  for (const auto& r : rows) {
    if (r.quantity == quantity) return r;
  }
  throw Error(ErrorKind::InvalidParams, "report " + scenario + " has no row " + quantity);
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "ground_state", "commutators", "energy_time", "coherent_decay",
      "free_thermal", "free_zpf",    "dipoles",     "planck_thermal"};
  return names;
}

namespace {

[[noreturn]] void unknown_scenario(const std::string& name) {
  std::string msg = "unknown scenario '" + name + "'; valid scenarios:";
  for (const auto& s : scenario_names()) msg += " " + s;
  throw Error(ErrorKind::UnknownScenario, msg);
}

bool is_scenario(const std::string& name) {
  const auto& names = scenario_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

ScenarioConfig default_config(const std::string& name) {
  if (!is_scenario(name)) unknown_scenario(name);
  ScenarioConfig cfg;
  // oscillator scenarios: the resonance sits at omega0 = 1, so a coarse step
  // and a modest cutoff keep the full 2^20-sample budget spanning ~1e5 time
  // units, enough averaging for percent-level variances
  cfg.grid.dt = 0.1;
  cfg.grid.n_samples = std::size_t{1} << 20;
  cfg.grid.omega_cut = 5.0;
  cfg.grid.omega_v_cut = 5.0;
  cfg.grid.n_ensemble = 64;
  cfg.grid.seed = 42;
  if (name == "coherent_decay") {
    cfg.grid.n_samples = std::size_t{1} << 15;
    cfg.grid.n_ensemble = 32768;
  } else if (name == "dipoles") {
    cfg.params.K = 0.1;
    cfg.grid.n_ensemble = 256;
  } else if (name == "planck_thermal") {
    cfg.params.kT = 0.5;
  } else if (name == "free_thermal") {
    cfg.params.omega0 = 0.0;
    cfg.params.kT = 1.0;
    cfg.grid.dt = 0.001;
    cfg.grid.omega_cut = 3000.0;
    cfg.grid.omega_v_cut = 3000.0;
  } else if (name == "free_zpf") {
    cfg.params.omega0 = 0.0;
    cfg.grid.dt = 0.003;
    cfg.grid.omega_cut = 1000.0;
    cfg.grid.omega_v_cut = 1000.0;
  }
  return cfg;
}

const std::vector<ToleranceEntry>& tolerance_table() {
  using M = RowMode;
  static const std::vector<ToleranceEntry> table = {
      {"ground_state", "x_var", M::Relative, 0.03},
      {"ground_state", "p_var", M::Relative, 0.03},
      {"ground_state", "mean_energy", M::Relative, 0.03},
      {"ground_state", "ks_x", M::AtMost, 0.01},
      {"ground_state", "ks_energy", M::AtMost, 0.01},
      {"ground_state", "heisenberg_product", M::Relative, 0.06},
      {"ground_state", "fourth_moment_ratio", M::Sampling, 0.0},
      {"ground_state", "v_var", M::Relative, 0.03},
      {"ground_state", "v_var_tau0", M::Report, 0.0},
      {"ground_state", "x_var_cutoff", M::Report, 0.0},

      {"commutators", "c_xp_0", M::Relative, 0.05},
      {"commutators", "c_xx_dev_spectral", M::AtMost, 0.05},
      {"commutators", "c_xx_dev_hilbert", M::AtMost, 0.05},
      {"commutators", "c_pp_dev_hilbert", M::AtMost, 0.05},
      {"commutators", "route_agreement", M::AtMost, 0.05},
      {"commutators", "c_xx_oddness", M::AtMost, 1e-9},

      {"energy_time", "delta_U", M::Relative, 0.10},
      {"energy_time", "delta_U_small_T", M::Relative, 0.10},
      {"energy_time", "delta_U_times_T", M::AtLeast, 0.0},
      {"energy_time", "delta_U_double_integral", M::Report, 0.0},
      {"energy_time", "delta_U_printed", M::Report, 0.0},

      {"coherent_decay", "envelope_error", M::AtMost, 0.05},
      {"coherent_decay", "variance_max_dev", M::AtMost, 0.05},
      {"coherent_decay", "variance_mean", M::Relative, 0.05},

      {"free_thermal", "dx2_slope", M::Relative, 0.10},
      {"free_thermal", "v_var", M::Relative, 0.05},
      {"free_thermal", "v_var_cutoff", M::Report, 0.0},
      {"free_thermal", "dv2_asymptote", M::Report, 0.0},

      {"free_zpf", "dx2_log_slope", M::Relative, 0.15},
      {"free_zpf", "euler_constant", M::Relative, 0.25},
      {"free_zpf", "euler_constant_fixed_slope", M::Relative, 0.15},
      {"free_zpf", "p_var", M::Absolute, 1e-12},
      {"free_zpf", "dv2", M::Report, 0.0},
      {"free_zpf", "dv2_over_c2", M::Report, 0.0},
      {"free_zpf", "electron_size", M::Report, 0.0},

      {"dipoles", "x_plus_var", M::Relative, 0.03},
      {"dipoles", "x_minus_var", M::Relative, 0.03},
      {"dipoles", "x1x2", M::Relative, 0.15},
      {"dipoles", "mean_H", M::Relative, 0.005},
      {"dipoles", "ks_x_plus", M::AtMost, 0.01},
      {"dipoles", "ks_x_minus", M::AtMost, 0.01},
      {"dipoles", "E_int_exact", M::Report, 0.0},
      {"dipoles", "E_int_paper_series", M::Report, 0.0},

      {"planck_thermal", "mean_energy", M::Relative, 0.03},
      {"planck_thermal", "ks_energy", M::AtMost, 0.01},
      {"planck_thermal", "boltzmann_sum", M::Absolute, 1e-10},
  };
  return table;
}

const ToleranceEntry& tolerance_for(const std::string& scenario, const std::string& quantity) {
  const std::string family = quantity.substr(0, quantity.find('['));
  for (const auto& e : tolerance_table()) {
    if (e.scenario == scenario && e.quantity == family) return e;
  }
  throw Error(ErrorKind::InvalidParams, "no tolerance entry for " + scenario + "/" + quantity);
}

namespace {

// ---------------------------------------------------------------------------
// Row assembly

class Rows {
 public:
  explicit Rows(ExperimentReport& report) : report_(report) {}

  void add(const std::string& quantity, double estimated, double std_error, double analytic,
           std::string note = {}) {
    const auto& entry = tolerance_for(report_.scenario, quantity);
    push(quantity, estimated, std_error, analytic, entry.mode, entry.tolerance, std::move(note));
  }

  /// KS distance against its critical value at the tabulated level.
  void add_ks(const std::string& quantity, double distance, std::size_t n) {
    const auto& entry = tolerance_for(report_.scenario, quantity);
    std::ostringstream note;
    note << "alpha=" << entry.tolerance << " n=" << n;
    push(quantity, distance, 0.0, 0.0, RowMode::AtMost, ks_critical(entry.tolerance, n),
         note.str());
  }

 private:
  void push(const std::string& quantity, double est, double se, double ref, RowMode mode,
            double tol, std::string note) {
    ReportRow r;
    r.quantity = quantity;
    r.estimated = est;
    r.std_error = se;
    r.analytic = ref;
    r.mode = mode;
    r.tolerance = tol;
    r.note = std::move(note);
    const double diff = std::abs(est - ref);
    r.rel_error = ref != 0.0 ? diff / std::abs(ref) : diff;
    switch (mode) {
      case RowMode::Relative: r.pass = diff <= std::max(tol * std::abs(ref), 3.0 * se); break;
      case RowMode::Absolute: r.pass = diff <= tol; break;
      case RowMode::AtMost: r.pass = est <= tol; break;
      case RowMode::AtLeast: r.pass = est >= ref; break;
      case RowMode::Sampling: r.pass = diff <= 3.0 * se; break;
      case RowMode::Report: r.pass = true; break;
    }
    if (!std::isfinite(est)) r.pass = mode == RowMode::Report;
    report_.rows.push_back(std::move(r));
  }

  ExperimentReport& report_;
};

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string stem_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

/// Field synthesis plus time-domain integration for one member; member 0
/// optionally dumps its raw arrays.
Trajectory oscillator_member(const SpectrumModel& model, const SystemParams& params,
                             const GridSpec& grid, std::uint64_t seed, std::size_t index,
                             const std::string& scenario, const RunOptions& options,
                             const OscillatorOptions& osc = {}) {
  const auto field = synthesize_field(model, params, grid, seed);
  auto traj = simulate_oscillator(params, field, osc);
  if (index == 0 && !options.trajectory_dir.empty()) {
    dump_field(field, stem_path(options.trajectory_dir, scenario + "_field"));
    dump_trajectory(traj, seed, stem_path(options.trajectory_dir, scenario + "_trajectory"));
  }
  return traj;
}

double mean_sq(std::span<const double> s) {
  CompensatedSum acc;
  for (double v : s) acc.add(v * v);
  return acc.value() / static_cast<double>(s.size());
}

/// Samples one every `stride` points, far enough apart to be nearly
/// independent for the KS tests.
std::size_t ks_stride(const SystemParams& p, double dt, double omega = 0.0) {
  const double w = omega > 0 ? omega : p.omega0;
  const double gamma = p.tau * w * w;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(5.0 / (gamma * dt))));
}

std::vector<std::size_t> steps_for(double dt, double lo, double hi, std::size_t count) {
  const auto a = static_cast<std::size_t>(std::llround(lo / dt));
  const auto b = static_cast<std::size_t>(std::llround(hi / dt));
  return log_spaced_steps(std::max<std::size_t>(a, 1), b, count);
}

SeriesExport histogram_series(const std::string& name, const Histogram& h) {
  SeriesExport s;
  s.name = name;
  for (std::size_t b = 0; b < h.density.size(); ++b) {
    s.abscissa.push_back(0.5 * (h.edges[b] + h.edges[b + 1]));
    s.values.push_back(h.density[b]);
  }
  return s;
}

/// Mean and stderr per index over members.
struct VectorStats {
  std::vector<MemberStats> stats;
  void add(const std::vector<double>& v) {
    if (stats.empty()) stats.resize(v.size());
    for (std::size_t i = 0; i < v.size() && i < stats.size(); ++i) stats[i].add(v[i]);
  }
  std::vector<double> mean() const {
    std::vector<double> out;
    for (const auto& s : stats) out.push_back(s.mean());
    return out;
  }
  std::vector<double> std_error() const {
    std::vector<double> out;
    for (const auto& s : stats) out.push_back(s.stderr_of_mean());
    return out;
  }
};

double product_stderr(double a, double sa, double b, double sb) {
  return std::sqrt(sa * sa * b * b + sb * sb * a * a);
}

// ---------------------------------------------------------------------------
// Scenarios

void ground_state(ExperimentReport& rep, const SystemParams& p, const GridSpec& g,
                  const RunOptions& opt) {
  struct Member {
    double x2, p2, v2, u, x4_ratio;
    std::vector<double> x_thin, u_thin;
    std::vector<double> spectrum;
  };
  const std::size_t stride = ks_stride(p, g.dt);
  const std::size_t seg = std::size_t{1} << 14;
  rep.settings["ks_stride_samples"] = stride;
  rep.settings["spectrum_segment"] = seg;
  const auto model = SpectrumModel::zpf();
  MemberStats x2, p2, v2, u, x4;
  std::vector<double> x_pool, u_pool;
  VectorStats spec;
  BandSpectrum spec_template;
  ensemble_reduce(
      g.n_ensemble, opt.jobs,
      [&](std::size_t k) {
        const auto traj = oscillator_member(model, p, g, derive_seed(g.seed, k), k, rep.scenario, opt);
        Member m;
        const std::size_t n = traj.size();
        CompensatedSum sx2, sp2, sv2, su, sx4;
        const double kx = p.m * p.omega0 * p.omega0;
        for (std::size_t i = 0; i < n; ++i) {
          const double x = traj.x[i], q = traj.p[i];
          sx2.add(x * x);
          sp2.add(q * q);
          sv2.add(traj.v[i] * traj.v[i]);
          sx4.add(x * x * x * x);
          const double e = 0.5 * (kx * x * x + q * q / p.m);
          su.add(e);
          if (i % stride == 0) {
            m.x_thin.push_back(x);
            m.u_thin.push_back(e);
          }
        }
        const double dn = static_cast<double>(n);
        m.x2 = sx2.value() / dn;
        m.p2 = sp2.value() / dn;
        m.v2 = sv2.value() / dn;
        m.u = su.value() / dn;
        m.x4_ratio = (sx4.value() / dn) / (3.0 * m.x2 * m.x2);
        auto bs = periodogram(traj.x, g.dt, seg, seg / 2);
        m.spectrum = std::move(bs.density);
        if (k == 0) {
          bs.density.clear();
          spec_template = std::move(bs);
        }
        return m;
      },
      [&](std::size_t, Member m) {
        x2.add(m.x2);
        p2.add(m.p2);
        v2.add(m.v2);
        u.add(m.u);
        x4.add(m.x4_ratio);
        x_pool.insert(x_pool.end(), m.x_thin.begin(), m.x_thin.end());
        u_pool.insert(u_pool.end(), m.u_thin.begin(), m.u_thin.end());
        spec.add(m.spectrum);
      });

  const auto gs = analytic::ground_state(p, g.omega_v_cut);
  const auto zpf = SpectrumModel::zpf();
  const double x_cut = spectral_moment([&](double w) { return position_spectrum(zpf, p, w); }, 0,
                                       0.0, g.omega_cut, p)
                           .value;
  Rows rows(rep);
  rows.add("x_var", x2.mean(), x2.stderr_of_mean(), gs.x_var);
  rows.add("p_var", p2.mean(), p2.stderr_of_mean(), gs.p_var);
  rows.add("mean_energy", u.mean(), u.stderr_of_mean(), gs.mean_energy);
  const auto xs = moments_and_histogram(x_pool, 60, [&](double x) { return gs.x_density.cdf(x); });
  rows.add_ks("ks_x", xs.ks_distance, xs.n);
  const auto us =
      moments_and_histogram(u_pool, 60, [&](double e) { return gs.energy_density.cdf(e); });
  rows.add_ks("ks_energy", us.ks_distance, us.n);
  rows.add("heisenberg_product", x2.mean() * p2.mean(),
           product_stderr(x2.mean(), x2.stderr_of_mean(), p2.mean(), p2.stderr_of_mean()),
           analytic::heisenberg_product(p));
  rows.add("fourth_moment_ratio", x4.mean(), x4.stderr_of_mean(), 1.0,
           "<x^4> / 3<x^2>^2 per member");
  rows.add("v_var", v2.mean(), v2.stderr_of_mean(), gs.v_var_cutoff,
           "reference: quadrature of w^2 S_x up to omega_v_cut");
  rows.add("v_var_tau0", v2.mean(), v2.stderr_of_mean(), gs.v_var,
           "tau -> 0 value; grows logarithmically with the cutoff");
  rows.add("x_var_cutoff", x2.mean(), x2.stderr_of_mean(), x_cut,
           "reference: quadrature of S_x up to omega_cut");

  rep.series.push_back(histogram_series("x_histogram", xs.histogram));
  rep.series.push_back(histogram_series("energy_histogram", us.histogram));
  SeriesExport sx{"x_spectrum", spec_template.omega, spec.mean(), spec.std_error()};
  rep.series.push_back(std::move(sx));
}

void commutators(ExperimentReport& rep, const SystemParams& p, const GridSpec& g,
                 const RunOptions& opt) {
  const double window = 100.0;
  const double corr_span = 2000.0;
  const double dlag_spectral = 0.5;
  const auto L = static_cast<std::size_t>(std::llround(corr_span / g.dt));
  const auto W = static_cast<std::size_t>(std::llround(window / g.dt));
  rep.settings["compare_window"] = window;
  rep.settings["correlation_span"] = corr_span;
  rep.settings["spectral_lag_step"] = dlag_spectral;

  struct Member {
    std::vector<double> cxx, cpp, cxp, density;
    double oddness = 0.0;
    std::size_t segments = 0;
  };
  const auto model = SpectrumModel::zpf();
  VectorStats cxx, cpp, cxp;
  std::vector<CompensatedSum> density;
  std::size_t total_segments = 0;
  double oddness = 0.0;
  BandSpectrum spec_template;

  ensemble_reduce(
      g.n_ensemble, opt.jobs,
      [&](std::size_t k) {
        const auto traj = oscillator_member(model, p, g, derive_seed(g.seed, k), k, rep.scenario, opt);
        Member m;
        auto slice = [&](const CommutatorSeries& c, std::vector<double>& out, double* odd) {
          std::size_t i0 = 0;
          while (i0 < c.lags.size() && c.lags[i0] < -1e-9) ++i0;
          if (i0 + W >= c.values.size() || i0 < W) {
            throw Error(ErrorKind::LagTooLong, "commutator window exceeds correlation span");
          }
          out.assign(c.values.begin() + static_cast<long>(i0),
                     c.values.begin() + static_cast<long>(i0 + W + 1));
          if (odd) {
            for (std::size_t l = 0; l <= W; ++l) {
              *odd = std::max(*odd, std::abs(c.values[i0 + l] + c.values[i0 - l]));
            }
          }
        };
        CorrelationAccumulator axx(g.dt, L), app(g.dt, L), axp(g.dt, L);
        axx.add(traj.x, traj.x);
        app.add(traj.p, traj.p);
        axp.add(traj.x, traj.p);
        slice(hilbert_commutator(axx.two_sided()), m.cxx, &m.oddness);
        slice(hilbert_commutator(app.two_sided()), m.cpp, nullptr);
        slice(hilbert_commutator(axp.two_sided()), m.cxp, nullptr);
        std::size_t seg = std::size_t{1} << 18;
        while (seg > traj.size()) seg /= 2;
        auto bs = periodogram(traj.x, g.dt, seg, seg / 2);
        m.density = std::move(bs.density);
        m.segments = bs.segments;
        if (k == 0) {
          bs.density.clear();
          spec_template = std::move(bs);
        }
        return m;
      },
      [&](std::size_t, Member m) {
        cxx.add(m.cxx);
        cpp.add(m.cpp);
        cxp.add(m.cxp);
        oddness = std::max(oddness, m.oddness);
        if (density.empty()) density.resize(m.density.size());
        for (std::size_t i = 0; i < m.density.size(); ++i) {
          density[i].add(m.density[i] * static_cast<double>(m.segments));
        }
        total_segments += m.segments;
      });

  BandSpectrum mean_spec = spec_template;
  mean_spec.density.resize(density.size());
  for (std::size_t i = 0; i < density.size(); ++i) {
    mean_spec.density[i] = density[i].value() / static_cast<double>(total_segments);
  }
  mean_spec.segments = total_segments;
  const auto n_spec = static_cast<std::size_t>(std::llround(window / dlag_spectral)) + 1;
  const auto spectral = spectral_commutator(mean_spec, dlag_spectral, n_spec);

  const auto hxx = cxx.mean(), hpp = cpp.mean(), hxp = cxp.mean();
  std::vector<double> lags(W + 1);
  for (std::size_t l = 0; l <= W; ++l) lags[l] = g.dt * static_cast<double>(l);

  double peak_xx = 0.0, peak_pp = 0.0;
  for (double t : lags) {
    const auto c = analytic::commutator_closed(p, t);
    peak_xx = std::max(peak_xx, std::abs(c.c_xx));
    peak_pp = std::max(peak_pp, std::abs(c.c_pp));
  }
  double dev_h = 0.0, dev_pp = 0.0;
  for (std::size_t l = 0; l <= W; ++l) {
    const auto c = analytic::commutator_closed(p, lags[l]);
    dev_h = std::max(dev_h, std::abs(hxx[l] - c.c_xx));
    dev_pp = std::max(dev_pp, std::abs(hpp[l] - c.c_pp));
  }
  double dev_s = 0.0, agree = 0.0;
  for (std::size_t l = 0; l < spectral.lags.size(); ++l) {
    const double t = spectral.lags[l];
    const auto c = analytic::commutator_closed(p, t);
    dev_s = std::max(dev_s, std::abs(spectral.values[l] - c.c_xx));
    agree = std::max(agree, std::abs(spectral.values[l] - value_at(lags, hxx, t)));
  }

  Rows rows(rep);
  rows.add("c_xp_0", hxp[0], cxp.stats[0].stderr_of_mean(), analytic::commutator_closed(p, 0).c_xp,
           "Hilbert route on <x(s) p(s+t)>");
  rows.add("c_xx_dev_spectral", dev_s / peak_xx, 0.0, 0.0, "max |c - closed form| / peak, t in [0, 100]");
  rows.add("c_xx_dev_hilbert", dev_h / peak_xx, 0.0, 0.0, "max |c - closed form| / peak, t in [0, 100]");
  rows.add("c_pp_dev_hilbert", dev_pp / peak_pp, 0.0, 0.0, "max |c - closed form| / peak, t in [0, 100]");
  rows.add("route_agreement", agree / peak_xx, 0.0, 0.0, "max |sine route - Hilbert route| / peak");
  rows.add("c_xx_oddness", oddness / peak_xx, 0.0, 0.0, "max |c(t) + c(-t)| / peak, single member");

  rep.series.push_back({"c_xx_hilbert", lags, hxx, cxx.std_error()});
  rep.series.push_back({"c_pp_hilbert", lags, hpp, cpp.std_error()});
  rep.series.push_back({"c_xp_hilbert", lags, hxp, cxp.std_error()});
  rep.series.push_back({"c_xx_spectral", spectral.lags, spectral.values, {}});
}

void energy_time(ExperimentReport& rep, const SystemParams& p, const GridSpec& g,
                 const RunOptions& opt) {
  const std::vector<double> windows = {1.0, 10.0, 100.0, 1000.0, 10000.0};
  rep.settings["windows"] = windows;
  const auto model = SpectrumModel::zpf();
  std::vector<std::vector<double>> pooled(windows.size());
  ensemble_reduce(
      g.n_ensemble, opt.jobs,
      [&](std::size_t k) {
        const auto traj = oscillator_member(model, p, g, derive_seed(g.seed, k), k, rep.scenario, opt);
        std::vector<std::vector<double>> out(windows.size());
        for (std::size_t w = 0; w < windows.size(); ++w) {
          append_windowed_energies(traj.x, traj.p, p, g.dt, windows[w], out[w]);
        }
        return out;
      },
      [&](std::size_t, std::vector<std::vector<double>> m) {
        for (std::size_t w = 0; w < windows.size(); ++w) {
          pooled[w].insert(pooled[w].end(), m[w].begin(), m[w].end());
        }
      });

  Rows rows(rep);
  SeriesExport measured{"delta_U", {}, {}, {}};
  SeriesExport closed{"delta_U_closed_form", {}, {}, {}};
  const double corr_time = 2.0 / p.gamma();
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const double T = windows[w];
    const auto stats = summarize_windows(T, std::move(pooled[w]));
    const double n = static_cast<double>(stats.samples.size());
    CompensatedSum m4;
    for (double e : stats.samples) m4.add(std::pow(e - stats.mean, 4));
    const double var = stats.dispersion * stats.dispersion;
    const double kurt = var > 0 ? m4.value() / n / (var * var) : 3.0;
    // consecutive short windows are correlated over ~2 / (tau w0^2)
    const double n_eff = n * std::min(1.0, T / corr_time);
    const double se = stats.dispersion * std::sqrt(std::max(0.0, kurt - 1.0) / (4.0 * n_eff));
    const auto ref = analytic::energy_fluctuation(p, T);
    const std::string tag = "[T=" + fmt_g(T) + "]";
    rows.add("delta_U" + tag, stats.dispersion, se, ref.recomputed);
    rows.add("delta_U_double_integral" + tag, stats.dispersion, se, ref.double_integral,
             "full double time integral of the Gaussian energy covariance");
    rows.add("delta_U_printed" + tag, stats.dispersion, se, ref.printed,
             "large-T form as printed, not asserted");
    rows.add("delta_U_times_T" + tag, stats.dispersion * T, se * T, 0.5 * p.hbar,
             "energy-time product against hbar/2");
    if (w == 0) {
      rows.add("delta_U_small_T", stats.dispersion, se, 0.5 * p.hbar * p.omega0,
               "short-window limit hbar w0 / 2");
    }
    measured.abscissa.push_back(T);
    measured.values.push_back(stats.dispersion);
    measured.std_error.push_back(se);
    closed.abscissa.push_back(T);
    closed.values.push_back(ref.recomputed);
  }
  rep.series.push_back(std::move(measured));
  rep.series.push_back(std::move(closed));
}

void coherent_decay(ExperimentReport& rep, const SystemParams& p, const GridSpec& g,
                    const RunOptions& opt) {
  const double amplitude = 3.0;
  const double phase = 0.0;
  const double horizon = 4.0 / p.gamma();  // two e-folds of the envelope
  const double block = 25.0;
  rep.settings["amplitude"] = amplitude;
  rep.settings["phase"] = phase;
  rep.settings["horizon"] = horizon;
  rep.settings["variance_block"] = block;
  const auto M = static_cast<std::size_t>(std::llround(horizon / g.dt));

  OscillatorOptions osc;
  osc.with_momentum = false;
  osc.kick_x = amplitude * std::cos(phase);
  osc.kick_v = amplitude * (-p.omega0 * std::sin(phase) - 0.5 * p.gamma() * std::cos(phase));
  const auto model = SpectrumModel::zpf();
  VectorStats xs;
  ensemble_reduce(
      g.n_ensemble, opt.jobs,
      [&](std::size_t k) {
        const auto traj =
            oscillator_member(model, p, g, derive_seed(g.seed, k), k, rep.scenario, opt, osc);
        if (traj.size() <= M) {
          throw Error(ErrorKind::BurnInExceedsTrajectory,
                      "trajectory after burn-in is shorter than the decay horizon");
        }
        return std::vector<double>(traj.x.begin(), traj.x.begin() + static_cast<long>(M + 1));
      },
      [&](std::size_t, std::vector<double> x) { xs.add(x); });

  const auto mean = xs.mean();
  const double n = static_cast<double>(g.n_ensemble);
  std::vector<double> t(M + 1), var(M + 1), pred(M + 1);
  double env_err = 0.0;
  CompensatedSum var_sum;
  for (std::size_t i = 0; i <= M; ++i) {
    t[i] = g.dt * static_cast<double>(i);
    pred[i] = mean_trajectory(amplitude, phase, p, t[i]);
    const double envelope = amplitude * std::exp(-0.5 * p.gamma() * t[i]);
    env_err = std::max(env_err, std::abs(mean[i] - pred[i]) / envelope);
    const double se = xs.stats[i].stderr_of_mean();
    var[i] = se * se * n;
    var_sum.add(var[i]);
  }
  const double x_var = analytic::ground_state(p).x_var;
  double var_dev = 0.0;
  const auto per_block = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(block / g.dt)));
  for (std::size_t start = 0; start + per_block <= M + 1; start += per_block) {
    double acc = 0.0;
    for (std::size_t i = start; i < start + per_block; ++i) acc += var[i];
    var_dev = std::max(var_dev, std::abs(acc / double(per_block) - x_var) / x_var);
  }
  const double var_mean = var_sum.value() / static_cast<double>(M + 1);

  Rows rows(rep);
  rows.add("envelope_error", env_err, 0.0, 0.0,
           "max |mean - A cos(w0 t + phi) e^{-tau w0^2 t/2}| / envelope over two e-folds");
  rows.add("variance_max_dev", var_dev, 0.0, 0.0,
           "max relative deviation of block-averaged variance from hbar / 2 m w0");
  rows.add("variance_mean", var_mean, var_mean * std::sqrt(2.0 / n), x_var,
           "variance about the mean, averaged over the horizon");

  rep.series.push_back({"mean_trajectory", t, mean, xs.std_error()});
  rep.series.push_back({"predicted_trajectory", t, pred, {}});
  rep.series.push_back({"variance_about_mean", t, var, {}});
}

void free_thermal(ExperimentReport& rep, const SystemParams& p, const GridSpec& g,
                  const RunOptions& opt) {
  const double fit_lo = 1.0, fit_hi = 10.0;
  rep.settings["fit_range"] = {fit_lo, fit_hi};
  const auto steps = steps_for(g.dt, fit_lo, fit_hi, 12);
  const auto v_step = static_cast<std::size_t>(std::llround(1.0 / g.dt));
  const auto model = SpectrumModel::rayleigh_jeans(p.kT);
  auto sx = [&](double w) { return position_spectrum(model, p, w); };

  struct Member {
    double slope, v2, dv2;
    std::vector<double> sf;
  };
  MemberStats slope, v2, dv2;
  VectorStats sf;
  ensemble_reduce(
      g.n_ensemble, opt.jobs,
      [&](std::size_t k) {
        const auto seed = derive_seed(g.seed, k);
        const auto traj = sample_from_spectrum(sx, p, g.dt, g.n_samples, g.omega_cut, seed, true);
        if (k == 0 && !opt.trajectory_dir.empty()) {
          dump_trajectory(traj, seed, stem_path(opt.trajectory_dir, rep.scenario + "_trajectory"));
        }
        Member m;
        const auto s = structure_function(traj.x, g.dt, steps);
        m.slope = fit_line(s.lags, s.values).slope;
        m.sf = s.values;
        m.v2 = mean_sq(traj.v);
        m.dv2 = structure_function(traj.v, g.dt, {v_step}).values[0];
        return m;
      },
      [&](std::size_t, Member m) {
        slope.add(m.slope);
        v2.add(m.v2);
        dv2.add(m.dv2);
        sf.add(m.sf);
      });

  const auto fp = analytic::free_particle(p, p.kT, 1.0, g.omega_cut);
  auto sv = [&](double w) { return w * w * sx(w); };
  const double v_cut = spectral_moment(sv, 0, 0.0, g.omega_v_cut, std::vector<double>{1.0 / p.tau}).value;
  Rows rows(rep);
  rows.add("dx2_slope", slope.mean(), slope.stderr_of_mean(), 2.0 * p.tau * p.kT / p.m,
           "slope of <dx^2> against dt over [1, 10]");
  rows.add("v_var", v2.mean(), v2.stderr_of_mean(), fp.thermal_v_var, "equipartition kT / m");
  rows.add("v_var_cutoff", v2.mean(), v2.stderr_of_mean(), v_cut,
           "reference: quadrature of w^2 S_x up to omega_v_cut");
  rows.add("dv2_asymptote", dv2.mean(), dv2.stderr_of_mean(), fp.thermal_dv2_asymptote,
           "<dv^2> at dt = 1 against 2kT/m; printed value kT/m");

  std::vector<double> lags;
  for (auto s : steps) lags.push_back(g.dt * static_cast<double>(s));
  rep.series.push_back({"structure_function", lags, sf.mean(), sf.std_error()});
}

void free_zpf(ExperimentReport& rep, const SystemParams& p, const GridSpec& g,
              const RunOptions& opt) {
  const double fit_lo = 100.0 * p.tau;
  const double fit_hi = g.dt * static_cast<double>(g.n_samples / 10);
  rep.settings["fit_range"] = {fit_lo, fit_hi};
  const auto steps = steps_for(g.dt, fit_lo, fit_hi, 16);
  const auto model = SpectrumModel::zpf();
  auto sx = [&](double w) { return position_spectrum(model, p, w); };
  const double log_slope = analytic::free_particle(p, 0.0, 1.0, g.omega_cut).zpf_log_slope;

  std::vector<double> log_lags;
  for (auto s : steps) log_lags.push_back(std::log(g.dt * static_cast<double>(s)));

  struct Member {
    double slope, c_fit, c_fixed, p_var, v2;
    std::vector<double> sf;
  };
  MemberStats slope, c_fit, c_fixed, pv, v2;
  VectorStats sf;
  ensemble_reduce(
      g.n_ensemble, opt.jobs,
      [&](std::size_t k) {
        const auto seed = derive_seed(g.seed, k);
        const auto traj = sample_from_spectrum(sx, p, g.dt, g.n_samples, g.omega_cut, seed, true);
        if (k == 0 && !opt.trajectory_dir.empty()) {
          dump_trajectory(traj, seed, stem_path(opt.trajectory_dir, rep.scenario + "_trajectory"));
        }
        Member m;
        const auto s = structure_function(traj.x, g.dt, steps);
        const auto fit = fit_line(log_lags, s.values);
        m.slope = fit.slope;
        // dx^2 = s [C + ln(dt / tau)]  =>  C = intercept / s + ln tau
        m.c_fit = fit.intercept / fit.slope + std::log(p.tau);
        CompensatedSum resid;
        for (std::size_t i = 0; i < s.values.size(); ++i) {
          resid.add(s.values[i] - log_slope * log_lags[i]);
        }
        m.c_fixed = resid.value() / static_cast<double>(s.values.size()) / log_slope + std::log(p.tau);
        m.p_var = mean_sq(canonical_momentum(traj, p));
        m.v2 = mean_sq(traj.v);
        m.sf = s.values;
        return m;
      },
      [&](std::size_t, Member m) {
        slope.add(m.slope);
        c_fit.add(m.c_fit);
        c_fixed.add(m.c_fixed);
        pv.add(m.p_var);
        v2.add(m.v2);
        sf.add(m.sf);
      });

  const auto fp = analytic::free_particle(p, 0.0, 1.0, g.omega_cut);
  const double c2 = p.c() * p.c();
  Rows rows(rep);
  rows.add("dx2_log_slope", slope.mean(), slope.stderr_of_mean(), fp.zpf_log_slope,
           "slope of <dx^2> against ln dt");
  rows.add("euler_constant", c_fit.mean(), c_fit.stderr_of_mean(), std::numbers::egamma,
           "intercept / fitted slope + ln tau");
  rows.add("euler_constant_fixed_slope", c_fixed.mean(), c_fixed.stderr_of_mean(),
           std::numbers::egamma, "intercept with the slope held at 2 hbar tau / pi m");
  rows.add("p_var", pv.mean(), pv.stderr_of_mean(), 0.0, "canonical momentum at omega0 = 0");
  const double dv2 = 2.0 * v2.mean();
  rows.add("dv2", dv2, 2.0 * v2.stderr_of_mean(), fp.zpf_dv2,
           "large-lag <dv^2> = 2<v^2> at omega_c = omega_v_cut");
  rows.add("dv2_over_c2", dv2 / c2, 2.0 * v2.stderr_of_mean() / c2, fp.zpf_dv2 / c2,
           fp.zpf_dv2_nonphysical ? "exceeds c^2: nonphysical" : "below c^2");
  rows.add("electron_size", fp.electron_size, 0.0, fp.electron_size,
           "order-of-magnitude estimate, closed form only");

  std::vector<double> lags;
  for (auto s : steps) lags.push_back(g.dt * static_cast<double>(s));
  rep.series.push_back({"structure_function", lags, sf.mean(), sf.std_error()});
}

void dipoles(ExperimentReport& rep, const SystemParams& p, const GridSpec& g,
             const RunOptions& opt) {
  const auto pred = analytic::dipole_prediction(p, p.K);
  const std::size_t stride = ks_stride(p, g.dt, pred.omega_plus);
  rep.settings["ks_stride_samples"] = stride;
  const auto model = SpectrumModel::zpf();
  struct Member {
    double xp2, xm2, x12, H;
    std::vector<double> xp_thin, xm_thin;
  };
  MemberStats xp2, xm2, x12, H;
  std::vector<double> xp_pool, xm_pool;
  ensemble_reduce(
      g.n_ensemble, opt.jobs,
      [&](std::size_t k) {
        const auto seed = derive_seed(g.seed, k);
        const auto pair = synthesize_pair(model, p, g, seed);
        const auto d = simulate_dipoles(p, pair);
        if (k == 0 && !opt.trajectory_dir.empty()) {
          dump_trajectory(d.first, seed, stem_path(opt.trajectory_dir, rep.scenario + "_first"));
          dump_trajectory(d.second, seed, stem_path(opt.trajectory_dir, rep.scenario + "_second"));
        }
        Member m;
        const std::size_t n = d.first.size();
        const double kp = p.m * pred.omega_plus * pred.omega_plus;
        const double km = p.m * pred.omega_minus * pred.omega_minus;
        CompensatedSum sp, sm, s12, sh;
        for (std::size_t i = 0; i < n; ++i) {
          const double xp = d.plus.x[i], xm = d.minus.x[i];
          sp.add(xp * xp);
          sm.add(xm * xm);
          s12.add(d.first.x[i] * d.second.x[i]);
          sh.add(0.5 * (kp * xp * xp + km * xm * xm +
                        (d.plus.p[i] * d.plus.p[i] + d.minus.p[i] * d.minus.p[i]) / p.m));
          if (i % stride == 0) {
            m.xp_thin.push_back(xp);
            m.xm_thin.push_back(xm);
          }
        }
        const double dn = static_cast<double>(n);
        m.xp2 = sp.value() / dn;
        m.xm2 = sm.value() / dn;
        m.x12 = s12.value() / dn;
        m.H = sh.value() / dn;
        return m;
      },
      [&](std::size_t, Member m) {
        xp2.add(m.xp2);
        xm2.add(m.xm2);
        x12.add(m.x12);
        H.add(m.H);
        xp_pool.insert(xp_pool.end(), m.xp_thin.begin(), m.xp_thin.end());
        xm_pool.insert(xm_pool.end(), m.xm_thin.begin(), m.xm_thin.end());
      });

  Rows rows(rep);
  rows.add("x_plus_var", xp2.mean(), xp2.stderr_of_mean(), pred.x_plus_var);
  rows.add("x_minus_var", xm2.mean(), xm2.stderr_of_mean(), pred.x_minus_var);
  rows.add("x1x2", x12.mean(), x12.stderr_of_mean(), pred.x1x2);
  rows.add("mean_H", H.mean(), H.stderr_of_mean(), pred.mean_H, "sum of normal-mode energies");
  const auto ksp = moments_and_histogram(
      xp_pool, 60, [&](double x) { return normal_cdf(x, pred.x_plus_var); });
  rows.add_ks("ks_x_plus", ksp.ks_distance, ksp.n);
  const auto ksm = moments_and_histogram(
      xm_pool, 60, [&](double x) { return normal_cdf(x, pred.x_minus_var); });
  rows.add_ks("ks_x_minus", ksm.ks_distance, ksm.n);
  const double e_int = H.mean() - p.hbar * p.omega0;
  rows.add("E_int_exact", e_int, H.stderr_of_mean(), pred.E_int_exact,
           "mean_H - hbar w0; exact series coefficient -K^2 hbar / 8 m^2 w0^3");
  rows.add("E_int_paper_series", e_int, H.stderr_of_mean(), pred.E_int_paper_series,
           "printed series -K^2 hbar / 2 m^2 w0^3, not asserted");

  rep.series.push_back(histogram_series("x_plus_histogram", ksp.histogram));
  rep.series.push_back(histogram_series("x_minus_histogram", ksm.histogram));
}

/// Mean of (n + 1/2) hbar w0 under Boltzmann weights, summed directly.
double boltzmann_mean(const SystemParams& p, double kT) {
  long double num = 0.0L, den = 0.0L;
  for (std::size_t n = 0; n < 100000; ++n) {
    const long double e = (static_cast<long double>(n) + 0.5L) * p.hbar * p.omega0;
    const long double w = std::exp(-(e - 0.5L * p.hbar * p.omega0) / kT);
    num += e * w;
    den += w;
    if (w < 1e-30L) break;
  }
  return static_cast<double>(num / den);
}

void planck_thermal(ExperimentReport& rep, const SystemParams& p, const GridSpec& g,
                    const RunOptions& opt) {
  const std::size_t stride = ks_stride(p, g.dt);
  rep.settings["ks_stride_samples"] = stride;
  const auto model = SpectrumModel::planck(p.kT);
  const auto pred = analytic::planck_prediction(p, p.kT);
  struct Member {
    double u;
    std::vector<double> u_thin;
  };
  MemberStats u;
  std::vector<double> pool;
  ensemble_reduce(
      g.n_ensemble, opt.jobs,
      [&](std::size_t k) {
        const auto traj = oscillator_member(model, p, g, derive_seed(g.seed, k), k, rep.scenario, opt);
        Member m;
        const double kx = p.m * p.omega0 * p.omega0;
        CompensatedSum su;
        for (std::size_t i = 0; i < traj.size(); ++i) {
          const double e = 0.5 * (kx * traj.x[i] * traj.x[i] + traj.p[i] * traj.p[i] / p.m);
          su.add(e);
          if (i % stride == 0) m.u_thin.push_back(e);
        }
        m.u = su.value() / static_cast<double>(traj.size());
        return m;
      },
      [&](std::size_t, Member m) {
        u.add(m.u);
        pool.insert(pool.end(), m.u_thin.begin(), m.u_thin.end());
      });

  Rows rows(rep);
  rows.add("mean_energy", u.mean(), u.stderr_of_mean(), pred.mean_energy,
           "(hbar w0 / 2) coth(hbar w0 / 2kT)");
  const auto ks = moments_and_histogram(pool, 60, [&](double e) { return pred.energy_density.cdf(e); });
  rows.add_ks("ks_energy", ks.ks_distance, ks.n);
  if (p.kT > 0) {
    rows.add("boltzmann_sum", boltzmann_mean(p, p.kT), 0.0, pred.mean_energy,
             "direct sum over (n + 1/2) hbar w0 with Boltzmann weights");
  }
  rep.series.push_back(histogram_series("energy_histogram", ks.histogram));
}

using ScenarioFn = void (*)(ExperimentReport&, const SystemParams&, const GridSpec&,
                            const RunOptions&);

ScenarioFn lookup(const std::string& name) {
  static const std::map<std::string, ScenarioFn> table = {
      {"ground_state", ground_state}, {"commutators", commutators},
      {"energy_time", energy_time},   {"coherent_decay", coherent_decay},
      {"free_thermal", free_thermal}, {"free_zpf", free_zpf},
      {"dipoles", dipoles},           {"planck_thermal", planck_thermal}};
  const auto it = table.find(name);
  if (it == table.end()) unknown_scenario(name);
  return it->second;
}

}  // namespace

ExperimentReport run_scenario(const std::string& name, const SystemParams& params,
                              const GridSpec& grid, const RunOptions& options) {
  const ScenarioFn fn = lookup(name);
  const auto start = std::chrono::steady_clock::now();
  const auto validated = validate(params, grid);
  if ((name == "free_thermal" || name == "free_zpf") && params.omega0 != 0.0) {
    throw Error(ErrorKind::InvalidParams, name + " needs omega0 = 0");
  }
  if (name != "free_thermal" && name != "free_zpf" && !(params.omega0 > 0)) {
    throw Error(ErrorKind::InvalidParams, name + " needs omega0 > 0");
  }
  if (name == "dipoles" && params.K == 0.0) {
    throw Error(ErrorKind::InvalidParams, "dipoles needs a nonzero coupling K");
  }
  if ((name == "free_thermal" || name == "planck_thermal") && !(params.kT > 0)) {
    throw Error(ErrorKind::InvalidParams, name + " needs kT > 0");
  }
  ExperimentReport report;
  report.scenario = name;
  report.seed = grid.seed;
  report.config = config_to_json(params, grid);
  report.settings = nlohmann::ordered_json::object();
  report.warnings = validated.warnings;
  RunOptions opt = options;
  opt.jobs = std::max(1u, opt.jobs);
  fn(report, params, grid, opt);
  report.runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::ordered_json config_to_json(const SystemParams& p, const GridSpec& g) {
  nlohmann::ordered_json j;
  j["hbar"] = p.hbar;
  j["m"] = p.m;
  j["omega0"] = p.omega0;
  j["tau"] = p.tau;
  j["kT"] = p.kT;
  j["K"] = p.K;
  j["charge"] = p.charge ? nlohmann::ordered_json(*p.charge) : nlohmann::ordered_json(nullptr);
  j["light_speed"] =
      p.light_speed ? nlohmann::ordered_json(*p.light_speed) : nlohmann::ordered_json(nullptr);
  j["dt"] = g.dt;
  j["n_samples"] = g.n_samples;
  j["omega_cut"] = g.omega_cut;
  j["omega_v_cut"] = g.omega_v_cut;
  j["n_ensemble"] = g.n_ensemble;
  j["seed"] = g.seed;
  return j;
}

nlohmann::ordered_json to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["config"] = r.config;
  j["settings"] = r.settings;
  j["warnings"] = r.warnings;
  j["pass"] = r.all_pass();
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o;
    o["quantity"] = row.quantity;
    o["estimated"] = row.estimated;
    o["stderr"] = row.std_error;
    o["analytic"] = row.analytic;
    o["rel_error"] = row.rel_error;
    o["tolerance"] = row.tolerance;
    o["mode"] = to_string(row.mode);
    o["pass"] = row.pass;
    o["note"] = row.note;
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "quantity,estimated,stderr,analytic,rel_error,tolerance,mode,pass,note\n";
  for (const auto& row : r.rows) {
    os << csv_field(row.quantity) << ',' << row.estimated << ',' << row.std_error << ','
       << row.analytic << ',' << row.rel_error << ',' << row.tolerance << ','
       << to_string(row.mode) << ',' << (row.pass ? "true" : "false") << ','
       << csv_field(row.note) << '\n';
  }
  return os.str();
}

EmitFlags parse_emit(const std::vector<std::string>& items) {
  EmitFlags f{false, false, false};
  if (items.empty()) return EmitFlags{};
  for (const auto& raw : items) {
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "report") f.report = true;
      else if (item == "spectra") f.spectra = true;
      else if (item == "trajectories") f.trajectories = true;
      else if (item == "all") f = {true, true, true};
      else if (item == "none") f = {false, false, false};
      else throw Error(ErrorKind::InvalidParams, "unknown emit flag '" + item + "'");
    }
  }
  return f;
}

namespace {

double as_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw Error(ErrorKind::InvalidParams, "config key '" + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t as_count(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorKind::InvalidParams, "config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

void apply_config(const nlohmann::json& j, RunConfig& cfg) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidParams, "config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "scenario") {
      if (!v.is_string()) throw Error(ErrorKind::InvalidParams, "config key 'scenario' must be a string");
      cfg.scenario = v.get<std::string>();
    } else if (key == "out") {
      if (!v.is_string()) throw Error(ErrorKind::InvalidParams, "config key 'out' must be a string");
      cfg.out_dir = v.get<std::string>();
    } else if (key == "emit") {
      std::vector<std::string> items;
      if (v.is_string()) items.push_back(v.get<std::string>());
      else if (v.is_array()) {
        for (const auto& e : v) {
          if (!e.is_string()) throw Error(ErrorKind::InvalidParams, "emit entries must be strings");
          items.push_back(e.get<std::string>());
        }
      } else throw Error(ErrorKind::InvalidParams, "config key 'emit' must be a string or list");
      cfg.emit = parse_emit(items);
    } else if (key == "hbar") cfg.params.hbar = as_number(v, key);
    else if (key == "m") cfg.params.m = as_number(v, key);
    else if (key == "omega0") cfg.params.omega0 = as_number(v, key);
    else if (key == "tau") cfg.params.tau = as_number(v, key);
    else if (key == "kT") cfg.params.kT = as_number(v, key);
    else if (key == "K") cfg.params.K = as_number(v, key);
    else if (key == "charge") {
      if (v.is_null()) cfg.params.charge.reset();
      else cfg.params.charge = as_number(v, key);
    } else if (key == "light_speed" || key == "c") {
      if (v.is_null()) cfg.params.light_speed.reset();
      else cfg.params.light_speed = as_number(v, key);
    } else if (key == "dt") cfg.grid.dt = as_number(v, key);
    else if (key == "n_samples") cfg.grid.n_samples = as_count(v, key);
    else if (key == "omega_cut") cfg.grid.omega_cut = as_number(v, key);
    else if (key == "omega_v_cut") cfg.grid.omega_v_cut = as_number(v, key);
    else if (key == "n_ensemble") cfg.grid.n_ensemble = as_count(v, key);
    else if (key == "seed") cfg.grid.seed = as_count(v, key);
    else throw Error(ErrorKind::InvalidParams, "unknown config key '" + key + "'");
  }
}

void write_artifacts(const ExperimentReport& report, const std::string& out_dir,
                     const EmitFlags& emit, unsigned jobs) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + out_dir + ": " + ec.message());
  auto open = [&](const std::string& name) {
    const auto path = (fs::path(out_dir) / name).string();
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
    return f;
  };
  if (emit.report) {
    open(report.scenario + "_report.json") << to_json(report).dump(2) << '\n';
    open(report.scenario + "_report.csv") << to_csv(report);
    nlohmann::ordered_json info;
    info["scenario"] = report.scenario;
    info["runtime_seconds"] = report.runtime;
    info["jobs"] = jobs;
    open(report.scenario + "_run_info.json") << info.dump(2) << '\n';
  }
  if (emit.spectra) {
    for (const auto& s : report.series) {
      write_series_csv((fs::path(out_dir) / (report.scenario + "_" + s.name + ".csv")).string(),
                       s.abscissa, s.values, s.std_error);
    }
  }
}

}  // namespace sedlab
