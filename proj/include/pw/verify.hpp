#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace pw::verify {

using cplx = std::complex<double>;

// Invalid suite name, flag value or config document.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Config {
  int n = 1;
  double nu = 0.0;        // weight of the extra user-space identity in the paley-wiener suite
  int m = 1;              // derivative order for that identity (Dirichlet-type spaces)
  double tol = 0.0;       // > 0 replaces every asserted tolerance
  std::uint64_t seed = 7;
  bool fast = false;      // reduced node counts and sample sizes
  int pairs = 100;        // random point pairs for invariance checks
  int polys = 50;         // random polynomials for the Drury-Arveson suite
  int threads = 0;        // worker count; 0 uses the hardware concurrency
};

// Throws ConfigError for out-of-range fields.
void validate(const Config& cfg);
// Keys match the long CLI flags; unknown keys and mistyped values throw ConfigError.
Config config_from_json(const nlohmann::json& doc, Config base = {});
nlohmann::json config_to_json(const Config& cfg);

struct CheckRecord {
  std::string id;
  std::string identity;  // the statement being checked, in words
  cplx lhs = 0.0;
  cplx rhs = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool reported_only = false;
  std::string rule;  // quadrature or sampling used
  double wall_seconds = 0.0;
  std::string note;
  std::string error;  // exception text when the check could not run
  // Optional (x, y) data written by the gnuplot export.
  std::vector<std::pair<double, double>> series;
};

struct SuiteReport {
  std::string suite;
  Config config;
  std::vector<CheckRecord> checks;  // sorted by id
  double wall_seconds = 0.0;
  bool passed() const;
  int failures() const;
};

std::vector<std::string> suite_names();
// Throws ConfigError for an unknown suite or invalid config.
SuiteReport run_suite(const std::string& name, const Config& cfg);

// Timing fields are omitted when include_timing is false, so reports for a fixed seed and
// config compare equal.
nlohmann::json to_json(const SuiteReport& report, bool include_timing = true);
std::string to_csv(const SuiteReport& report);
// Writes <dir>/<suite>.dat (index, rel_error, tolerance) and <dir>/<check id>.dat for checks
// with series data.
void write_gnuplot(const SuiteReport& report, const std::string& dir);

}  // namespace pw::verify
