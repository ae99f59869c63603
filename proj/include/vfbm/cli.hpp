#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vfbm/coeffs.hpp"

namespace vfbm {

struct ExperimentConfig {
  std::string subcommand;  // sample, solve, verify, moments, convergence
  double H = 0.75;
  double alpha = 0.3;
  std::optional<double> lambda;  // overrides select_lambda
  double T = 1.0;
  int n = 256;
  int m = 1;
  int d = 1;
  std::string coefficients = "smooth-volterra";
  long paths = 1;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  int max_iter = 200;
  int workers = 0;  // 0 keeps the OpenMP default
  std::string out_dir = "out";

  // Config-file keys without a dedicated flag.
  CatalogParams params;
  std::optional<double> beta, delta, mu;  // override the declared hypothesis orders
  double x0 = 0.5;                        // initial condition, every component
  std::string sampler = "davies-harte";   // or "cholesky"
  int path_files = 16;                    // sample: paths written as CSV
  int pilot_paths = 100;                  // moments: calibration ensemble
  int bootstrap = 1000;                   // moments: resamples per CI
  int levels = 4;                         // convergence: n, n/2, ..., n/2^(levels-1)
  std::vector<std::string> checks = {"lebesgue", "rs", "lemmas", "aux", "hypotheses"};
  long cases = 1000;
  long lemma_cases = 100000;
  long hypothesis_samples = 100000;
  int verify_n = 64;
};

const std::vector<std::string>& subcommands();

/// Sets one key from its text value. Keys are the long flag names (max-iter
/// and max_iter are the same key) plus the config-only fields above.
void apply_config_value(ExperimentConfig& c, std::string key, const std::string& value);

/// Flat `key = value` text; `#` starts a comment, values may be quoted.
void apply_config_text(ExperimentConfig& c, std::string_view text);
void apply_config_file(ExperimentConfig& c, const std::filesystem::path& file);

/// Range checks that do not depend on the coefficient model.
void validate(const ExperimentConfig& c);

/// Catalog model with the config's parameters and declared-order overrides.
CoefficientSet configured_coefficients(const ExperimentConfig& c);

/// Throws AdmissibilityError naming the violated Theorem constraint.
void check_admissibility(const ExperimentConfig& c, const CoefficientSet& cs);

nlohmann::ordered_json to_json(const ExperimentConfig& c);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// One output unit: `<id>.csv` from the table and/or `<id>.json` from the
/// metadata, which gets the id as its first field "run_id".
struct OutputRecord {
  std::string id;
  nlohmann::ordered_json meta;
  std::optional<Table> table;
};

enum class ReportFormat { Csv, Json, Both };

/// Writes every record into out_dir (created if needed). CSV cells use 17
/// significant digits. Throws InvalidArgument on an empty list and IoError
/// when a file cannot be written.
void emit_report(const std::vector<OutputRecord>& records, ReportFormat format, const std::filesystem::path& out_dir);

/// Runs the subcommand, writes its files plus config.json, and returns the
/// exit status: 0 iff every solve, audit or check met its contract.
int run_experiment(const ExperimentConfig& c, std::ostream& log);

}  // namespace vfbm
