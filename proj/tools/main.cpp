#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace bgpburst::cli;

namespace {

void add_overrides(CLI::App* cmd, DetectorOverrides& o) {
  cmd->add_option("--r", o.r, "Intensity decay rate (1/s)");
  cmd->add_option("--omega", o.omega, "EMA window length");
  cmd->add_option("--delta", o.delta, "Band width in standard deviations");
  cmd->add_option("--warmup", o.warmup, "Events whose flags are suppressed");
  cmd->add_option("--variance-floor", o.variance_floor,
                  "Lower bound on the band standard deviation");
  cmd->add_option("--min-events", o.min_events,
                  "Minimum announcements for burstiness");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"BGP burstiness anomaly detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BGPBURST_VERSION);

  GlobalOptions global;
  global.argv.assign(argv, argv + argc);
  std::string config_path;
  app.add_option("--config", config_path,
                 "Detector config file (default: $BGPBURST_CONFIG)");
  app.add_option("--out", global.out, "Output directory")->capture_default_str();
  app.add_option("--seed", global.seed, "Seed for simulation streams");
  app.add_option("--threads", global.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "MRT or event files to canonical events");
  c_ingest->add_option("inputs", ingest.inputs, "MRT (optionally gz/bz2) or JSONL files")
      ->required();
  c_ingest->add_option("--label", ingest.label,
                       "Collector name for MRT inputs (default: file name)");
  c_ingest->add_option("--asn", ingest.asns, "Keep only these origin ASes");
  c_ingest->add_option("--collector", ingest.collectors, "Keep only these collectors");

  AnalyzeOptions analyze;
  auto* c_analyze = app.add_subcommand("analyze", "Joint distribution and null test");
  c_analyze->add_option("--events", analyze.events, "Canonical event file")->required();
  c_analyze->add_option("--window", analyze.window, "Observation window START,END")
      ->required();
  c_analyze->add_option("--null-window", analyze.null_windows, "Null window START,END");
  c_analyze->add_option("--null-windows", analyze.null_window_file,
                        "File with one START,END per line");
  c_analyze->add_option("--incidents", analyze.incidents,
                        "Incident catalogue; null windows must avoid it");
  c_analyze->add_option("--collector", analyze.collector, "Collector to analyse");
  c_analyze->add_option("--asn", analyze.asns,
                        "ASes to test (default: the bursty high-volume quadrant)");
  c_analyze->add_option("--samples", analyze.samples, "Null windows used at most")
      ->capture_default_str();
  c_analyze->add_option("--alpha", analyze.alpha, "Two-sided significance level")
      ->capture_default_str();
  c_analyze->add_option("--min-null", analyze.min_null, "Usable null windows required")
      ->capture_default_str();
  c_analyze->add_option("--percentile", analyze.percentile, "Quadrant threshold")
      ->capture_default_str();
  add_overrides(c_analyze, analyze.overrides);

  DetectOptions detect;
  auto* c_detect = app.add_subcommand("detect", "Intensity and volume detection");
  c_detect->add_option("--events", detect.events, "Canonical event file")->required();
  c_detect->add_option("--detector", detect.detector, "intensity, volume or both")
      ->check(CLI::IsMember({"intensity", "volume", "both"}))
      ->capture_default_str();
  c_detect->add_option("--asn", detect.asns, "Only these origin ASes");
  c_detect->add_option("--collector", detect.collectors, "Only these collectors");
  bool no_traces = false;
  c_detect->add_flag("--no-traces", no_traces, "Skip per-series trace files");
  add_overrides(c_detect, detect.overrides);

  EvaluateOptions evaluate;
  auto* c_evaluate = app.add_subcommand("evaluate", "Binned precision, recall and F1");
  c_evaluate->add_option("--reports", evaluate.reports, "reports.json from detect")
      ->required();
  c_evaluate->add_option("--incidents", evaluate.incidents, "Incident catalogue")
      ->required();
  c_evaluate->add_option("--incident", evaluate.names, "Evaluate only these incidents");
  c_evaluate->add_option("--bin-length", evaluate.bin_length, "Bin length in seconds")
      ->capture_default_str();
  c_evaluate->add_option("--start", evaluate.start, "Study start (overrides reports)");
  c_evaluate->add_option("--end", evaluate.end, "Study end (overrides reports)");

  SimulateOptions simulate;
  auto* c_simulate = app.add_subcommand("simulate", "Synthetic event streams");
  c_simulate->add_option("specs", simulate.specs, "Simulation spec files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (!config_path.empty())
    global.config = config_path;
  detect.traces = !no_traces;

  if (c_ingest->parsed())
    return cmd_ingest(global, ingest, std::cout, std::cerr);
  if (c_analyze->parsed())
    return cmd_analyze(global, analyze, std::cout, std::cerr);
  if (c_detect->parsed())
    return cmd_detect(global, detect, std::cout, std::cerr);
  if (c_evaluate->parsed())
    return cmd_evaluate(global, evaluate, std::cout, std::cerr);
  return cmd_simulate(global, simulate, std::cout, std::cerr);
}
