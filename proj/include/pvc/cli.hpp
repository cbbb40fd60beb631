#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pvc/io.hpp"

namespace pvc {

inline constexpr const char* kSchemaVersion = "1";

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2 };

const std::vector<std::string>& cli_commands();

struct RunConfig {
  std::string command;
  int d = 2;
  double alpha = 0;
  std::vector<double> t{0.0};
  std::int64_t reps = 100'000;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = available parallelism
  std::string out;  // empty = standard output
  std::string format = "json";
  double n = 30;    // box side of extremal-index
  bool deep = false;

  /// Throws ConfigError for an unknown command or format, d outside
  /// [2, 12], alpha <= -d, a negative t, reps < 1 or n <= 0.
  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

Json to_json(const RunConfig& c);
RunConfig run_config_from_json(const Json& j);

/// Reads a JSON object or key=value lines into `base`. Throws IoError or ConfigError.
RunConfig load_config_file(const std::string& path, RunConfig base = {});

struct ResultEnvelope {
  std::string schema_version = kSchemaVersion;
  std::string command;
  RunConfig config;
  std::string started;   // ISO 8601 UTC
  std::string finished;
  Json results;
  std::int64_t degenerate_count = 0;
  bool passed = true;    // false when validate reports a failing criterion

  friend bool operator==(const ResultEnvelope&, const ResultEnvelope&) = default;
};

Json to_json(const ResultEnvelope& e);
ResultEnvelope envelope_from_json(const Json& j);

/// Dispatches to the module operation named by config.command.
ResultEnvelope run(const RunConfig& config);

/// Envelope as JSON text, or the results table for format "csv".
std::string render(const ResultEnvelope& e);

void emit_csv(const ResultEnvelope& e, const std::string& path);

/// Full command-line entry point; returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pvc
