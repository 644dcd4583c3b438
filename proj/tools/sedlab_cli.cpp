// sedlab command-line entry point: list, run, verify, analytic.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sedlab/acceptance.hpp"
#include "sedlab/analytic.hpp"
#include "sedlab/ensemble.hpp"
#include "sedlab/experiments.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

bool is_config_error(sedlab::ErrorKind k) {
  using sedlab::ErrorKind;
  return k != ErrorKind::Io && k != ErrorKind::QuadratureFailure;
}

void print_kv(const std::string& key, double value) {
  std::printf("%s=%.10g\n", key.c_str(), value);
}

/// key=value pairs; keys outside `allowed` are rejected.
std::map<std::string, double> parse_pairs(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw sedlab::Error(sedlab::ErrorKind::InvalidParams, "expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
      out[key] = v;
    } catch (const std::exception&) {
      throw sedlab::Error(sedlab::ErrorKind::InvalidParams, "value of '" + key + "' is not a number");
    }
  }
  return out;
}

int run_analytic(const std::string& quantity, const std::vector<std::string>& raw) {
  using namespace sedlab;
  auto kv = parse_pairs(raw);
  SystemParams p;
  const std::vector<std::string> allowed = {"hbar", "m", "omega0", "tau", "kT", "K",
                                            "t", "T", "dt", "omega_c", "omega_v_cut"};
  for (const auto& [k, v] : kv) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw Error(ErrorKind::InvalidParams, "unknown parameter '" + k + "'");
    }
  }
  auto get = [&](const std::string& k, double def) { return kv.count(k) ? kv[k] : def; };
  p.hbar = get("hbar", p.hbar);
  p.m = get("m", p.m);
  p.omega0 = get("omega0", p.omega0);
  p.tau = get("tau", p.tau);
  p.kT = get("kT", p.kT);
  p.K = get("K", p.K);

  if (quantity == "ground_state") {
    const auto gs = analytic::ground_state(p, get("omega_v_cut", 0.0));
    print_kv("x_var", gs.x_var);
    print_kv("p_var", gs.p_var);
    print_kv("U", gs.mean_energy);
    print_kv("v_var", gs.v_var);
    if (kv.count("omega_v_cut")) print_kv("v_var_cutoff", gs.v_var_cutoff);
  } else if (quantity == "commutators") {
    const auto c = analytic::commutator_closed(p, get("t", 0.0));
    print_kv("c_xx", c.c_xx);
    print_kv("c_pp", c.c_pp);
    print_kv("c_xp", c.c_xp);
  } else if (quantity == "energy_time") {
    const auto f = analytic::energy_fluctuation(p, get("T", 1.0));
    print_kv("delta_U", f.recomputed);
    print_kv("delta_U_double_integral", f.double_integral);
    print_kv("delta_U_printed", f.printed);
  } else if (quantity == "free_particle") {
    const auto f = analytic::free_particle(p, p.kT, get("dt", 1.0), get("omega_c", 0.0));
    print_kv("thermal_dx2", f.thermal_dx2);
    print_kv("thermal_v_var", f.thermal_v_var);
    print_kv("thermal_dv2_asymptote", f.thermal_dv2_asymptote);
    print_kv("zpf_dx2", f.zpf_dx2);
    print_kv("zpf_log_slope", f.zpf_log_slope);
    print_kv("zpf_dv2", f.zpf_dv2);
    print_kv("zpf_dv2_nonphysical", f.zpf_dv2_nonphysical ? 1.0 : 0.0);
    print_kv("electron_size", f.electron_size);
  } else if (quantity == "heisenberg") {
    print_kv("x_var_p_var", analytic::heisenberg_product(p));
  } else if (quantity == "dipoles") {
    const auto d = analytic::dipole_prediction(p, get("K", 0.1));
    print_kv("omega_plus", d.omega_plus);
    print_kv("omega_minus", d.omega_minus);
    print_kv("x_plus_var", d.x_plus_var);
    print_kv("x_minus_var", d.x_minus_var);
    print_kv("x1x2", d.x1x2);
    print_kv("mean_H", d.mean_H);
    print_kv("E_int_exact", d.E_int_exact);
    print_kv("E_int_exact_series", d.E_int_exact_series);
    print_kv("E_int_paper_series", d.E_int_paper_series);
  } else if (quantity == "planck") {
    const auto pp = analytic::planck_prediction(p, get("kT", 0.5));
    print_kv("mean_energy", pp.mean_energy);
  } else {
    throw Error(ErrorKind::InvalidParams,
                "unknown quantity '" + quantity +
                    "'; valid: ground_state commutators energy_time free_particle heisenberg "
                    "dipoles planck");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sedlab: stochastic electrodynamics simulation and verification"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "Print the available scenarios");

  auto* run = app.add_subcommand("run", "Run one scenario and write its report");
  std::string scenario, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> emit;
  unsigned jobs = 0;
  run->add_option("--scenario", scenario, "Scenario name");
  run->add_option("--config", config_path, "JSON config file with flat keys");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--emit", emit, "report, spectra, trajectories, all or none")->delimiter(',');
  run->add_option("--jobs", jobs, "Worker threads (default SEDLAB_JOBS or all cores)");

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  std::vector<int> criteria;
  unsigned verify_jobs = 0;
  verify->add_option("--criterion", criteria, "Only these criteria (1-9)");
  verify->add_option("--jobs", verify_jobs, "Worker threads");

  auto* an = app.add_subcommand("analytic", "Print closed forms without simulation");
  std::string quantity;
  std::vector<std::string> params;
  an->add_option("--quantity", quantity, "Quantity name")->required();
  an->add_option("--params", params, "key=value overrides");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*list) {
      for (const auto& s : sedlab::scenario_names()) std::printf("%s\n", s.c_str());
      return 0;
    }
    if (*an) return run_analytic(quantity, params);
    if (*verify) {
      const auto results = sedlab::acceptance::run_all(sedlab::resolve_jobs(verify_jobs), criteria);
      bool ok = true;
      for (const auto& r : results) {
        std::printf("%s\n", r.line().c_str());
        ok = ok && r.pass();
      }
      return ok ? 0 : kExitFail;
    }

    // run
    nlohmann::json file_cfg = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw sedlab::Error(sedlab::ErrorKind::InvalidParams, "cannot read " + config_path);
      try {
        file_cfg = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw sedlab::Error(sedlab::ErrorKind::InvalidParams,
                            "config " + config_path + " is not valid JSON: " + e.what());
      }
    }
    if (scenario.empty() && file_cfg.is_object() && file_cfg.contains("scenario") &&
        file_cfg["scenario"].is_string()) {
      scenario = file_cfg["scenario"].get<std::string>();
    }
    if (scenario.empty()) {
      throw sedlab::Error(sedlab::ErrorKind::InvalidParams, "run needs --scenario");
    }
    sedlab::RunConfig cfg;
    const auto defaults = sedlab::default_config(scenario);
    cfg.scenario = scenario;
    cfg.params = defaults.params;
    cfg.grid = defaults.grid;
    sedlab::apply_config(file_cfg, cfg);
    cfg.scenario = scenario;  // the flag wins over the file
    if (seed) cfg.grid.seed = *seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!emit.empty()) cfg.emit = sedlab::parse_emit(emit);

    sedlab::RunOptions opt;
    opt.jobs = sedlab::resolve_jobs(jobs);
    if (cfg.emit.trajectories) {
      std::filesystem::create_directories(cfg.out_dir);
      opt.trajectory_dir = cfg.out_dir;
    }
    const auto report = sedlab::run_scenario(cfg.scenario, cfg.params, cfg.grid, opt);
    sedlab::write_artifacts(report, cfg.out_dir, cfg.emit, opt.jobs);
    for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    for (const auto& r : report.rows) {
      std::printf("%-34s est=%-13.6g ref=%-13.6g rel=%-10.3g %s\n", r.quantity.c_str(), r.estimated,
                  r.analytic, r.rel_error,
                  r.mode == sedlab::RowMode::Report ? "report" : (r.pass ? "pass" : "FAIL"));
    }
    return report.all_pass() ? 0 : kExitFail;
  } catch (const sedlab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return is_config_error(e.kind()) ? kExitConfig : kExitFail;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
}
