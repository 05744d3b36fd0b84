#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bgpburst/detector.hpp"

namespace bgpburst::cli {

struct GlobalOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::vector<std::string> argv;
};

struct DetectorOverrides {
  std::optional<double> r;
  std::optional<std::size_t> omega;
  std::optional<double> delta;
  std::optional<std::size_t> warmup;
  std::optional<double> variance_floor;
  std::optional<std::size_t> min_events;
};

/// --config, else the environment variable, else defaults; then overrides.
DetectorConfig resolve_config(const GlobalOptions& global,
                              const DetectorOverrides& overrides);

struct IngestOptions {
  std::vector<std::filesystem::path> inputs;
  /// Collector name for MRT inputs; defaults to the file name up to its
  /// first dot.
  std::optional<std::string> label;
  std::vector<Asn> asns;
  std::vector<std::string> collectors;
};

struct AnalyzeOptions {
  std::filesystem::path events;
  std::string window;
  std::vector<std::string> null_windows;
  std::optional<std::filesystem::path> null_window_file;
  std::optional<std::filesystem::path> incidents;
  std::optional<std::string> collector;
  std::vector<Asn> asns;
  std::size_t samples = 100;
  double alpha = 0.05;
  std::size_t min_null = 20;
  double percentile = 0.95;
  DetectorOverrides overrides;
};

struct DetectOptions {
  std::filesystem::path events;
  std::string detector = "both";
  std::vector<Asn> asns;
  std::vector<std::string> collectors;
  bool traces = true;
  DetectorOverrides overrides;
};

struct EvaluateOptions {
  std::filesystem::path reports;
  std::filesystem::path incidents;
  std::vector<std::string> names;
  Timestamp bin_length = 3 * 3600;
  std::optional<std::string> start;
  std::optional<std::string> end;
};

struct SimulateOptions {
  std::vector<std::filesystem::path> specs;
};

/// Each command writes into global.out, always finishes with manifest.json,
/// reports problems on `err` and returns the process exit code.
int cmd_ingest(const GlobalOptions& global, const IngestOptions& options,
               std::ostream& log, std::ostream& err);
int cmd_analyze(const GlobalOptions& global, const AnalyzeOptions& options,
                std::ostream& log, std::ostream& err);
int cmd_detect(const GlobalOptions& global, const DetectOptions& options,
               std::ostream& log, std::ostream& err);
int cmd_evaluate(const GlobalOptions& global, const EvaluateOptions& options,
                 std::ostream& log, std::ostream& err);
int cmd_simulate(const GlobalOptions& global, const SimulateOptions& options,
                 std::ostream& log, std::ostream& err);

/// "START,END" with RFC 3339 or integer epoch endpoints.
TimeWindow parse_window(std::string_view text);

} // namespace bgpburst::cli
