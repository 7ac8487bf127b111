#pragma once

// Declarative experiment runner: parse a config, build the named system,
// execute the requested experiments deterministically under the seed, and
// serialize reports. The machine format is canonical JSON (stable key order,
// no timings), so identical configs give byte-identical reports; the CSV
// export flattens the same document one row per verdict or measurement.
//
// This header stays JSON-library-free; serialization is internal to the
// implementation and crosses the API as strings.

#include "loclab/nogo.hpp"

#include <string>
#include <vector>

namespace loclab {
namespace runner {

// Distinct config failures, all catchable as ConfigError (exit code 1).
struct UnknownSystemError : ConfigError {
  using ConfigError::ConfigError;
};
struct InfeasibleSizeError : ConfigError {
  using ConfigError::ConfigError;
};
struct InvalidRegionError : ConfigError {
  using ConfigError::ConfigError;
};
// A report's schema tag does not match the version this build writes.
struct SchemaError : Error {
  using Error::Error;
};

inline constexpr const char* kReportSchema = "loclab-report/1";

struct ExperimentConfig {
  std::string system = "standard_nonrelativistic";
  int size = 64;          // lattice sites (power of two 16..512; fock: 4..10)
  double spacing = 1.0;
  double mass = 1.0;
  std::string model;      // "" = the system's default space model
  int d0_start = 0;       // anchor region for the systems that take one
  int d0_width = -1;      // -1 = size / 8
  unsigned long long seed = 1;
  std::vector<std::string> experiments = {"matrix"};
  double leakage_gap = 3.0;   // physical distance between state and probe
  double leakage_time = 1.0;
  double pass_tol = 1e-8;
  double fail_tol = 1e-6;
  std::string out_path;       // "" = caller decides (CLI prints to stdout)
  std::string format = "json";

  // Throws one of the named ConfigError subclasses.
  void validate() const;
};

struct CatalogEntry {
  std::string name;
  std::string kind;        // sharp | unsharp | number
  std::string parameters;  // accepted knobs, human-readable
  std::string provenance;  // what the construction does / why it is here
};

// One entry per zoo constructor. Every entry's defaults build successfully.
std::vector<CatalogEntry> list_systems();

// Construct the configured system (validates first).
zoo::LocalizationSystem build_from_config(const ExperimentConfig& c);

// Strict JSON config parsing: unknown keys and type mismatches are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Execute every listed experiment and return the canonical JSON report.
std::string run_to_json(const ExperimentConfig& c);

// RFC-4180 CSV (CRLF, quoted where needed), one row per verdict/measurement,
// fixed column order. Input must be a valid report.
std::string report_to_csv(const std::string& report_json);

// Throws SchemaError on a version mismatch, ConfigError on malformed JSON.
void validate_report_schema(const std::string& report_json);

// Structural equality after re-parsing both documents.
bool reports_equal(const std::string& report_a, const std::string& report_b);

// Condition-matrix tables with pass/fail/not-applicable glyphs and residuals
// in scientific notation, plus one summary block per other experiment.
std::string render_human(const std::string& report_json);

}  // namespace runner
}  // namespace loclab
