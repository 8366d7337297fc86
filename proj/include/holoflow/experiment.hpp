#pragma once

#include "holoflow/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace holoflow {

enum class ExperimentId { FlowOrbit, AverageConvergence, DefectScan, Equivariance, Rigidity, EntireDemo, Periodicity };

std::string to_string(ExperimentId id);
std::optional<ExperimentId> experiment_from_string(const std::string& name);

/// Invalid configuration. Line and column are 1-based; 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Declared acceptance threshold. `metric` names a derived metric of the
/// run or a numeric column of the main table; `where` filters rows by
/// exact cell text.
struct Threshold {
  std::string metric;
  std::map<std::string, std::string> where;
  std::optional<double> min;
  std::optional<double> max;
};

struct ExperimentConfig {
  ExperimentId id = ExperimentId::FlowOrbit;
  std::string mode;
  std::vector<std::string> families;
  std::optional<std::string> target;
  std::vector<std::string> phi;  // Phi expressions (equivariance, mode flow)
  std::vector<double> r;
  std::vector<double> t;
  std::vector<int> periods;
  double epsilon = 0.05;
  int depth = 6;
  int nodes = 512;
  int samples = 2001;
  int pairs = 100;
  double half_width = 0.5;
  double tol = 1e-9;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::optional<std::filesystem::path> threshold_file;
  std::vector<Threshold> thresholds;
  /// Class-check summaries attached by parse_config for families that must
  /// lie in C.
  std::vector<std::string> class_reports;
};

/// Parses and validates YAML config text; relative file references are
/// resolved against `base_dir`. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::string suffix;  // empty for the main table
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

struct CheckResult {
  Threshold threshold;
  double value = 0.0;
  bool pass = false;
  std::string describe() const;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<Table> tables;  // tables[0] is the main CSV
  std::map<std::string, double> metrics;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool pass() const;
  std::string summary() const;
};

/// Evaluates one threshold against a finished run. A derived metric wins
/// over a column of the same name unless `where` is set; with `where` the
/// worst matching row is compared. No matching row fails with value NaN.
CheckResult evaluate_threshold(const Threshold& threshold, const RunReport& report);

/// Runs the experiment and evaluates its thresholds. Library errors are
/// rethrown as Error with the row context prepended.
RunReport run_experiment(const ExperimentConfig& config);

std::string format_csv(const Table& table, ExperimentId id);

/// Writes every table next to `path` (extra tables get "_<suffix>"). Files
/// are written to a temporary name and renamed; nothing is left behind on
/// failure. Returns the written paths.
std::vector<std::filesystem::path> write_csv(const RunReport& report, const std::filesystem::path& path);

}  // namespace holoflow
