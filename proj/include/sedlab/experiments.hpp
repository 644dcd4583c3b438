#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sedlab/core.hpp"

namespace sedlab {

/// How a report row decides pass/fail.
enum class RowMode {
  Relative,  // |est - ref| <= max(tol |ref|, 3 stderr)
  Absolute,  // |est - ref| <= tol
  AtMost,    // est <= tol (deviations, KS distances)
  AtLeast,   // est >= ref
  Sampling,  // |est - ref| <= 3 stderr
  Report,    // informational, always passes
};

const char* to_string(RowMode mode);

struct ReportRow {
  std::string quantity;
  double estimated = 0.0;
  double std_error = 0.0;
  double analytic = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  RowMode mode = RowMode::Report;
  std::string note;
};

/// Plot-ready series, exported as `<scenario>_<name>.csv`.
struct SeriesExport {
  std::string name;
  std::vector<double> abscissa;
  std::vector<double> values;
  std::vector<double> std_error;
};

struct ExperimentReport {
  std::string scenario;
  /// Resolved SystemParams and GridSpec, flat keys.
  nlohmann::ordered_json config;
  /// Fixed scenario settings (windows, fit ranges, amplitudes).
  nlohmann::ordered_json settings;
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;
  std::vector<SeriesExport> series;
  double runtime = 0.0;  // seconds; kept out of the report JSON
  std::uint64_t seed = 0;

  bool all_pass() const;
  /// Throws InvalidParams when the row is absent.
  const ReportRow& row(const std::string& quantity) const;
};

struct ScenarioConfig {
  SystemParams params;
  GridSpec grid;
};

const std::vector<std::string>& scenario_names();

/// Per-scenario defaults.  Throws UnknownScenario.
ScenarioConfig default_config(const std::string& name);

struct ToleranceEntry {
  std::string scenario;
  /// Row quantity, or its family prefix before '[' for swept rows.
  std::string quantity;
  RowMode mode;
  /// Relative or absolute tolerance; the significance level for KS rows.
  double tolerance;
};

const std::vector<ToleranceEntry>& tolerance_table();
const ToleranceEntry& tolerance_for(const std::string& scenario, const std::string& quantity);

struct RunOptions {
  unsigned jobs = 1;
  /// When nonempty, member 0 writes its field and trajectory there.
  std::string trajectory_dir;
};

/// Runs a named scenario.  Throws UnknownScenario or propagates module errors.
ExperimentReport run_scenario(const std::string& name, const SystemParams& params,
                              const GridSpec& grid, const RunOptions& options = {});

nlohmann::ordered_json config_to_json(const SystemParams& params, const GridSpec& grid);
nlohmann::ordered_json to_json(const ExperimentReport& report);
/// Flat CSV of rows with a header line.
std::string to_csv(const ExperimentReport& report);

struct EmitFlags {
  bool report = true;
  bool spectra = false;
  bool trajectories = false;
};

/// Accepts "report", "spectra", "trajectories", "all" and "none".
EmitFlags parse_emit(const std::vector<std::string>& items);

struct RunConfig {
  std::string scenario;
  SystemParams params;
  GridSpec grid;
  std::string out_dir = ".";
  EmitFlags emit;
};

/// Applies flat JSON keys (SystemParams and GridSpec fields plus scenario,
/// out, emit) onto `config`.  Unknown keys and ill-typed values throw
/// InvalidParams.
void apply_config(const nlohmann::json& overrides, RunConfig& config);

/// Writes the artifacts selected by `emit` under `out_dir`.  The report JSON
/// carries no timing; the runtime goes to `<scenario>_run_info.json`.
void write_artifacts(const ExperimentReport& report, const std::string& out_dir,
                     const EmitFlags& emit, unsigned jobs);

}  // namespace sedlab
