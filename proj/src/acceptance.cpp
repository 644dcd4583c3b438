#include "sedlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sedlab/analytic.hpp"
#include "sedlab/dynamics.hpp"
#include "sedlab/estimators.hpp"
#include "sedlab/experiments.hpp"
#include "sedlab/noise.hpp"
#include "sedlab/spectra.hpp"

namespace sedlab::acceptance {

bool CriterionResult::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string CriterionResult::line() const {
  std::ostringstream os;
  os << "criterion " << id << " " << title << ": " << (pass() ? "PASS" : "FAIL");
  for (const auto& c : checks) {
    os << " | " << c.label << (c.pass ? " ok " : " FAIL ") << c.detail;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, " | %.1fs", runtime);
  os << buf;
  return os.str();
}

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ExperimentReport run_default(const std::string& name, unsigned jobs) {
  const auto cfg = default_config(name);
  RunOptions opt;
  opt.jobs = jobs;
  return run_scenario(name, cfg.params, cfg.grid, opt);
}

/// |est - ref| <= tol |ref|
Check relative(const ExperimentReport& r, const std::string& q, double tol) {
  const auto& row = r.row(q);
  const double rel = std::abs(row.estimated - row.analytic) / std::abs(row.analytic);
  return {q, rel <= tol,
          num(row.estimated) + " vs " + num(row.analytic) + " (rel " + num(rel) + " <= " +
              num(tol) + ")"};
}

Check at_most(const ExperimentReport& r, const std::string& q, double tol) {
  const auto& row = r.row(q);
  return {q, row.estimated <= tol, num(row.estimated) + " <= " + num(tol)};
}

/// KS distance against the critical value at level alpha for the row's n.
Check ks(const ExperimentReport& r, const std::string& q, double alpha) {
  const auto& row = r.row(q);
  const auto n_pos = row.note.find("n=");
  const std::size_t n = n_pos == std::string::npos ? 0 : std::stoul(row.note.substr(n_pos + 2));
  const double crit = ks_critical(alpha, n);
  return {q, row.estimated <= crit, "D=" + num(row.estimated) + " <= " + num(crit) + " (n=" +
                                        std::to_string(n) + ")"};
}

// ---------------------------------------------------------------------------

void ground_state(CriterionResult& res, unsigned jobs) {
  const auto r = run_default("ground_state", jobs);
  res.checks.push_back(relative(r, "x_var", 0.03));
  res.checks.push_back(relative(r, "p_var", 0.03));
  res.checks.push_back(relative(r, "mean_energy", 0.03));
  res.checks.push_back(ks(r, "ks_x", 0.01));
  res.checks.push_back(ks(r, "ks_energy", 0.01));
}

void commutators(CriterionResult& res, unsigned jobs) {
  const auto r = run_default("commutators", jobs);
  res.checks.push_back(relative(r, "c_xp_0", 0.05));
  res.checks.push_back(at_most(r, "c_xx_dev_spectral", 0.05));
  res.checks.push_back(at_most(r, "c_xx_dev_hilbert", 0.05));
  res.checks.push_back(at_most(r, "route_agreement", 0.05));
}

void energy_time(CriterionResult& res, unsigned jobs) {
  const auto r = run_default("energy_time", jobs);
  for (const auto& row : r.rows) {
    if (row.quantity.rfind("delta_U[", 0) == 0) {
      res.checks.push_back(relative(r, row.quantity, 0.10));
    }
  }
  res.checks.push_back(relative(r, "delta_U_small_T", 0.10));
  for (const auto& row : r.rows) {
    if (row.quantity.rfind("delta_U_times_T[", 0) == 0) {
      const double bound = 0.5 * default_config("energy_time").params.hbar;
      res.checks.push_back({row.quantity, row.estimated >= bound,
                            num(row.estimated) + " >= " + num(bound)});
    }
  }
}

void coherent_decay(CriterionResult& res, unsigned jobs) {
  const auto r = run_default("coherent_decay", jobs);
  res.checks.push_back(at_most(r, "envelope_error", 0.05));
  res.checks.push_back(at_most(r, "variance_max_dev", 0.05));
}

void free_thermal(CriterionResult& res, unsigned jobs) {
  const auto r = run_default("free_thermal", jobs);
  res.checks.push_back(relative(r, "dx2_slope", 0.10));
  res.checks.push_back(relative(r, "v_var", 0.05));
}

void free_zpf(CriterionResult& res, unsigned jobs) {
  const auto r = run_default("free_zpf", jobs);
  res.checks.push_back(relative(r, "dx2_log_slope", 0.15));
  res.checks.push_back(relative(r, "euler_constant", 0.25));
  const auto& p = r.row("p_var");
  res.checks.push_back({"p_var", std::abs(p.estimated) <= 1e-12, num(p.estimated) + " ~ 0"});
}

void dipoles(CriterionResult& res, unsigned jobs) {
  const auto r = run_default("dipoles", jobs);
  const std::pair<const char*, double> expected[] = {
      {"x_plus_var", 0.52705}, {"x_minus_var", 0.47673}, {"x1x2", 0.02516}, {"mean_H", 0.998749}};
  const double tol[] = {0.03, 0.03, 0.15, 0.005};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& row = r.row(expected[i].first);
    const double rel = std::abs(row.estimated - expected[i].second) / expected[i].second;
    res.checks.push_back({expected[i].first, rel <= tol[i],
                          num(row.estimated) + " vs " + num(expected[i].second) + " (rel " +
                              num(rel) + " <= " + num(tol[i]) + ")"});
  }
}

void planck_thermal(CriterionResult& res, unsigned jobs) {
  const auto r = run_default("planck_thermal", jobs);
  const auto& row = r.row("mean_energy");
  const double target = 0.656518;
  const double rel = std::abs(row.estimated - target) / target;
  res.checks.push_back({"mean_energy", rel <= 0.03,
                        num(row.estimated) + " vs " + num(target) + " (rel " + num(rel) + " <= 0.03)"});
  res.checks.push_back(ks(r, "ks_energy", 0.01));
  const auto& b = r.row("boltzmann_sum");
  const double diff = std::abs(b.estimated - b.analytic);
  res.checks.push_back({"boltzmann_sum", diff <= 1e-10,
                        "|" + num(b.estimated) + " - " + num(b.analytic) + "| = " + num(diff)});
}

// ---------------------------------------------------------------------------
// Property suite

Check noise_gaussianity() {
  SystemParams p;
  GridSpec g;
  g.dt = 0.1;
  g.n_samples = std::size_t{1} << 16;
  g.omega_cut = 5.0;
  const auto model = SpectrumModel::zpf();
  const double var = spectral_moment([&](double w) { return field_spectrum(model, p, w); }, 0, 0.0,
                                     g.omega_cut)
                         .value;
  std::vector<double> pool;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto f = synthesize_field(model, p, g, derive_seed(7, s));
    for (std::size_t i = 0; i < f.size(); i += 16) pool.push_back(f.samples[i]);
  }
  const auto d = moments_and_histogram(pool, 40, [&](double x) { return normal_cdf(x, var); });
  const double crit = ks_critical(0.01, d.n);
  return {"noise_gaussianity", d.ks_distance <= crit,
          "D=" + num(d.ks_distance) + " <= " + num(crit)};
}

Check periodogram_calibration() {
  SystemParams p;
  GridSpec g;
  g.dt = 0.1;
  g.n_samples = std::size_t{1} << 17;
  g.omega_cut = 5.0;
  const auto model = SpectrumModel::zpf();
  PeriodogramAccumulator acc(g.dt, 4096, 2048);
  for (std::uint64_t s = 0; s < 4; ++s) {
    acc.add(synthesize_field(model, p, g, derive_seed(11, s)).samples);
  }
  const auto est = acc.result();
  const double bands[][2] = {{0.5, 1.0}, {1.0, 2.0}, {2.0, 4.0}};
  double worst = 0.0;
  for (const auto& b : bands) {
    const double ref = spectral_moment([&](double w) { return field_spectrum(model, p, w); }, 0,
                                       b[0], b[1])
                           .value /
                       (b[1] - b[0]);
    worst = std::max(worst, std::abs(est.band_mean(b[0], b[1]) / ref - 1.0));
  }
  return {"periodogram_calibration", worst <= 0.05, "max |ratio - 1| " + num(worst) + " <= 0.05"};
}

Check dynamics_linearity() {
  SystemParams p;
  GridSpec g;
  g.dt = 0.1;
  g.n_samples = std::size_t{1} << 15;
  g.omega_cut = 5.0;
  const auto model = SpectrumModel::zpf();
  auto f1 = synthesize_field(model, p, g, 1);
  const auto f2 = synthesize_field(model, p, g, 2);
  auto combo = f1;
  for (std::size_t i = 0; i < combo.size(); ++i) combo.samples[i] = 0.7 * f1.samples[i] - 1.3 * f2.samples[i];
  const auto a = simulate_oscillator(p, f1);
  const auto b = simulate_oscillator(p, f2);
  const auto c = simulate_oscillator(p, combo);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    worst = std::max(worst, std::abs(c.x[i] - (0.7 * a.x[i] - 1.3 * b.x[i])));
    scale = std::max(scale, std::abs(c.x[i]));
  }
  const double rel = worst / scale;
  return {"dynamics_linearity", rel <= 1e-12, "max rel residual " + num(rel) + " <= 1e-12"};
}

std::vector<Check> commutator_properties() {
  SystemParams p;
  GridSpec g;
  g.dt = 0.1;
  g.n_samples = std::size_t{1} << 17;
  g.omega_cut = 5.0;
  const auto traj = simulate_oscillator(p, synthesize_field(SpectrumModel::zpf(), p, g, 5));
  const std::size_t L = 2000;
  CorrelationAccumulator axx(g.dt, L);
  axx.add(traj.x, traj.x);
  const auto cxx = hilbert_commutator(axx.two_sided());
  const std::size_t n = cxx.values.size();
  double odd = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    odd = std::max(odd, std::abs(cxx.values[i] + cxx.values[n - 1 - i]));
    peak = std::max(peak, std::abs(cxx.values[i]));
  }
  // [x, a p + b x] = a [x, p] + b [x, x]
  std::vector<double> mix(traj.size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 0.4 * traj.p[i] + 1.7 * traj.x[i];
  CorrelationAccumulator axp(g.dt, L), axm(g.dt, L);
  axp.add(traj.x, traj.p);
  axm.add(traj.x, mix);
  const auto cxp = hilbert_commutator(axp.two_sided());
  const auto cxm = hilbert_commutator(axm.two_sided());
  double lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lin = std::max(lin, std::abs(cxm.values[i] - (0.4 * cxp.values[i] + 1.7 * cxx.values[i])));
  }
  return {{"commutator_oddness", odd / peak <= 1e-9, "max |c(t)+c(-t)|/peak " + num(odd / peak)},
          {"commutator_linearity", lin / peak <= 1e-9, "max residual/peak " + num(lin / peak)}};
}

Check determinism() {
  auto cfg = default_config("ground_state");
  cfg.grid.n_samples = std::size_t{1} << 16;
  cfg.grid.n_ensemble = 6;
  std::string dumps[3];
  const unsigned jobs[3] = {1, 3, 1};
  for (int i = 0; i < 3; ++i) {
    RunOptions opt;
    opt.jobs = jobs[i];
    dumps[i] = to_json(run_scenario("ground_state", cfg.params, cfg.grid, opt)).dump();
  }
  const bool same = dumps[0] == dumps[1] && dumps[0] == dumps[2];
  return {"determinism", same, same ? "reports identical for jobs 1, 3, 1" : "reports differ"};
}

void properties(CriterionResult& res, unsigned jobs) {
  res.checks.push_back(noise_gaussianity());
  res.checks.push_back(periodogram_calibration());
  res.checks.push_back(dynamics_linearity());
  const auto r = run_default("ground_state", jobs);
  const auto& f = r.row("fourth_moment_ratio");
  const double z = std::abs(f.estimated - 1.0) / f.std_error;
  res.checks.push_back({"fourth_moment_identity", z <= 3.0,
                        num(f.estimated) + " vs 1 (" + num(z) + " stderr <= 3)"});
  for (auto& c : commutator_properties()) res.checks.push_back(std::move(c));
  res.checks.push_back(relative(r, "heisenberg_product", 0.06));
  res.checks.push_back(determinism());
}

struct Entry {
  const char* title;
  void (*fn)(CriterionResult&, unsigned);
};

constexpr Entry kEntries[kCriterionCount] = {
    {"ground_state", ground_state},   {"commutators", commutators},
    {"energy_time", energy_time},     {"coherent_decay", coherent_decay},
    {"free_thermal", free_thermal},   {"free_zpf", free_zpf},
    {"dipoles", dipoles},             {"planck_thermal", planck_thermal},
    {"properties", properties},
};

}  // namespace

CriterionResult run_criterion(int id, unsigned jobs) {
  if (id < 1 || id > kCriterionCount) {
    throw Error(ErrorKind::InvalidParams, "criterion must be in 1.." + std::to_string(kCriterionCount));
  }
  const auto& e = kEntries[id - 1];
  CriterionResult res;
  res.id = id;
  res.title = e.title;
  const auto start = std::chrono::steady_clock::now();
  try {
    e.fn(res, jobs);
  } catch (const std::exception& ex) {
    res.checks.push_back({"error", false, ex.what()});
  }
  res.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<CriterionResult> run_all(unsigned jobs, const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  if (ids.empty()) {
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, jobs));
  } else {
    for (int id : ids) out.push_back(run_criterion(id, jobs));
  }
  return out;
}

}  // namespace sedlab::acceptance
