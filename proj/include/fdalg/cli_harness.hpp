#pragma once

// Experiment configuration, validation and dispatch behind the fdalg command.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fdalg/free_product.hpp"

namespace fdalg {

enum ExitCode : int {
  kExitOk = 0,
  kExitBadConfig = 1,
  kExitNotCovered = 2,
  kExitSearchExhausted = 3,
  kExitNumericalInstability = 4,
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"enumerate", "dims",  "thm41-check",    "density",
                                                 "rcp-balance", "dpi", "build-primitive"};
  return names;
}

struct AlgebraSpec {
  std::vector<int> blocks;
  std::vector<int> mult;
};

/// Optional class selector for `dims`: structure of C and mu(B1, C), row-major.
struct ClassSpec {
  std::vector<int> blocks;
  std::vector<int> embedding;
};

struct ExperimentConfig {
  std::string command;
  std::optional<int> ambient_dim;
  std::vector<AlgebraSpec> algebras;
  std::optional<ClassSpec> class_spec;
  int samples = 200;
  std::optional<std::uint64_t> seed;
  double epsilon = 0.5;
  std::optional<double> radius;
  std::optional<std::string> probe_file;
  std::optional<double> tolerance;
  std::optional<std::string> output;
  std::string format = "json";
  unsigned threads = 0;
  int max_tries = 256;
  bool balance = false;
  std::vector<StagePiece> stages;
};

struct Diagnostic {
  std::string pointer;  // JSON pointer into the config
  std::string message;
};

/// Every type or invariant problem in a raw config document.
std::vector<Diagnostic> validate(const nlohmann::json& raw);

/// Builds the config from a document for which validate() returned nothing.
ExperimentConfig config_from_json(const nlohmann::json& raw);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::string csv;
};

/// Runs one experiment. Library errors are mapped to exit codes and recorded
/// under "status" and "error" in the report.
RunResult run(const ExperimentConfig& cfg);

/// Report text in the requested format; JSON output is byte-deterministic.
std::string render(const RunResult& result, const std::string& format);

}  // namespace fdalg
