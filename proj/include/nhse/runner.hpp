#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nhse/gbz.hpp"
#include "nhse/io.hpp"
#include "nhse/models.hpp"
#include "nhse/symmetry.hpp"

namespace nhse {

using json = nlohmann::json;

inline constexpr const char* kReportSchema = "nhse.run/1";
inline constexpr const char* kSweepSchema = "nhse.sweep/1";

enum class ModelKind { chain, qwz, hatano_nelson };

/// Parsed and validated configuration. `echo` holds the full configuration
/// with every default filled in; running from `echo` reproduces the run.
struct RunConfig {
  json echo;
  ModelKind kind = ModelKind::chain;
  Chain1DParams chain;
  Qwz2DParams qwz;
  double t_right = 1.0;
  double t_left = 1.0;
  int hn_length = 40;
  bool mass_defaulted = false;
  std::string task;
  int workers = 1;
};

/// Validates and normalises; throws ValidationError on any problem.
RunConfig parse_config(const json& config);

struct RunOptions {
  bool write_files = true;
};

struct RunReport {
  json report;
  /// Flat scalar summary used as one sweep row.
  json summary;
  std::vector<std::string> files;
};

RunReport run(const json& config, const RunOptions& options = {});

/// Default worker count: NHSE_WORKERS when set to a positive integer, else 1.
int default_workers();

/// Sets a dotted path ("model.gamma1.phi") in a copy of `config`. The aliases
/// "phi", "omega" and "tempo" address the relative phase, every drive
/// frequency and the quench tempo name of the configured model.
json set_config_path(const json& config, const std::string& path, const json& value);

struct SweepResult {
  CsvTable table;
  json report;
};

/// Runs the configured task once per value, `workers` at a time, and merges
/// the summary rows in input order. Failed runs keep their row with an error
/// code (2 validation, 3 numerical) instead of aborting the sweep.
SweepResult sweep(const json& config, const std::string& axis, const std::vector<json>& values,
                  int workers, const RunOptions& options = {});

/// Symmetry table for the configured model.
std::vector<SymmetryReport> check_symmetry(const RunConfig& cfg);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes, std::uint64_t seed = 1469598103934665603ULL);

/// Reads a JSON file; malformed JSON raises ValidationError.
json load_json(const std::string& path);

/// Maps an exception to the CLI exit code: 2 validation, 3 numerical.
int exit_code_for(const std::exception& e);

}  // namespace nhse
