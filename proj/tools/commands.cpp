#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bgpburst/config.hpp"
#include "bgpburst/evaluation.hpp"
#include "bgpburst/ingest/decompress.hpp"
#include "bgpburst/ingest/event_lines.hpp"
#include "bgpburst/ingest/mrt.hpp"
#include "bgpburst/joint.hpp"
#include "bgpburst/significance.hpp"
#include "bgpburst/synth.hpp"
#include "bgpburst/timeutil.hpp"
#include "manifest.hpp"

namespace bgpburst::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using namespace bgpburst::ingest;

namespace {

class Run {
public:
  Run(std::string command, const GlobalOptions& global, std::ostream& err)
      : manifest_(std::move(command), global.argv, global.out), err_(err) {
    fs::create_directories(global.out);
  }

  RunManifest& manifest() noexcept { return manifest_; }

  template <class Writer>
  void write(const fs::path& relative, Writer&& writer) {
    auto full = manifest_.out_dir() / relative;
    if (full.has_parent_path())
      fs::create_directories(full.parent_path());
    {
      std::ofstream out(full, std::ios::binary);
      writer(out);
      if (!out)
        throw Error("cannot write " + full.string());
    }
    manifest_.add_output(relative);
  }

  void error(const std::string& message) {
    err_ << "error: " << message << '\n';
    manifest_.add_error(message);
  }

  void warn(const std::string& message) { err_ << "warning: " << message << '\n'; }

  int finish() {
    manifest_.write();
    return manifest_.errors().empty() ? 0 : 1;
  }

private:
  RunManifest manifest_;
  std::ostream& err_;
};

template <class Body>
int guarded(Run& run, Body&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    run.error(e.what());
  }
  try {
    return run.finish();
  } catch (const std::exception& e) {
    run.error(e.what());
    return 1;
  }
}

/// Runs fn(0..n-1) on up to `threads` workers. fn must not throw.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  auto workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (auto i = next++; i < n; i = next++)
        fn(i);
    });
}

ojson config_json(const DetectorConfig& c) {
  return {{"r", c.r},
          {"omega", c.omega},
          {"delta", c.delta},
          {"warmup", c.warmup},
          {"variance_floor", c.variance_floor},
          {"min_events", c.min_events}};
}

ojson global_json(const GlobalOptions& g) {
  ojson j;
  j["config_file"] = g.config ? ojson(g.config->string()) : ojson(nullptr);
  j["seed"] = g.seed ? ojson(*g.seed) : ojson(nullptr);
  j["threads"] = g.threads;
  return j;
}

std::optional<Timestamp> parse_integer(std::string_view text) {
  Timestamp v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    return std::nullopt;
  return v;
}

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Timestamp parse_instant(std::string_view text) {
  text = trim(text);
  if (auto v = parse_integer(text))
    return *v;
  return parse_rfc3339(text);
}

std::vector<AnnouncementEvent> load_events(Run& run, const fs::path& path) {
  run.manifest().add_input(path);
  auto bytes = read_input(path);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  return parse_event_lines(in);
}

bool looks_like_event_lines(const std::vector<std::uint8_t>& bytes) {
  for (auto b : bytes) {
    if (b == ' ' || b == '\t' || b == '\r' || b == '\n')
      continue;
    return b == '{';
  }
  return true;
}

ojson mrt_stats_json(const MrtStats& s) {
  return {{"records", s.records},
          {"skipped_records", s.skipped_records},
          {"non_update_messages", s.non_update_messages},
          {"nlri_entries", s.nlri_entries},
          {"emitted", s.emitted},
          {"withdrawals", s.withdrawals},
          {"ambiguous_origin", s.ambiguous_origin},
          {"dropped_malformed_as_path", s.dropped_malformed_as_path},
          {"dropped_missing_origin", s.dropped_missing_origin},
          {"dropped", s.dropped()}};
}

std::string as_label(Asn asn) { return "AS" + std::to_string(asn); }

std::string file_label(const fs::path& path) {
  auto name = path.filename().string();
  auto dot = name.find('.');
  return dot == 0 || dot == std::string::npos ? name : name.substr(0, dot);
}

} // namespace

TimeWindow parse_window(std::string_view text) {
  auto comma = text.find(',');
  if (comma == std::string_view::npos)
    throw ConfigError("window '" + std::string(text) + "' is not START,END");
  TimeWindow w{parse_instant(text.substr(0, comma)),
               parse_instant(text.substr(comma + 1))};
  if (w.end <= w.start)
    throw ConfigError("window '" + std::string(text) + "' is empty");
  return w;
}

DetectorConfig resolve_config(const GlobalOptions& global,
                              const DetectorOverrides& o) {
  DetectorConfig c;
  std::optional<fs::path> path = global.config;
  if (!path)
    if (const char* env = std::getenv(config_env_var); env && *env)
      path = env;
  if (path)
    c = load_detector_config(*path);
  if (o.r)
    c.r = *o.r;
  if (o.omega)
    c.omega = *o.omega;
  if (o.delta)
    c.delta = *o.delta;
  if (o.warmup)
    c.warmup = *o.warmup;
  if (o.variance_floor)
    c.variance_floor = *o.variance_floor;
  if (o.min_events)
    c.min_events = *o.min_events;
  c.validate();
  return c;
}

int cmd_ingest(const GlobalOptions& global, const IngestOptions& options,
               std::ostream& log, std::ostream& err) {
  Run run("ingest", global, err);
  auto& cfg = run.manifest().config();
  cfg["global"] = global_json(global);
  cfg["label"] = options.label ? ojson(*options.label) : ojson(nullptr);
  cfg["asn_filter"] = options.asns;
  cfg["collector_filter"] = options.collectors;
  return guarded(run, [&] {
    if (options.inputs.empty())
      throw ConfigError("no inputs given");
    std::vector<AnnouncementEvent> events;
    MrtStats totals;
    auto per_input = ojson::array();
    for (const auto& path : options.inputs) {
      ojson entry{{"path", path.string()}};
      try {
        run.manifest().add_input(path);
        auto bytes = read_input(path);
        if (looks_like_event_lines(bytes)) {
          std::istringstream in(std::string(bytes.begin(), bytes.end()));
          auto parsed = parse_event_lines(in);
          entry["format"] = "jsonl";
          entry["events"] = parsed.size();
          events.insert(events.end(), parsed.begin(), parsed.end());
        } else {
          auto label = options.label.value_or(file_label(path));
          auto parsed = parse_mrt_updates(bytes, label);
          entry["format"] = "mrt";
          entry["collector"] = label;
          entry["stats"] = mrt_stats_json(parsed.stats);
          totals += parsed.stats;
          events.insert(events.end(), parsed.events.begin(), parsed.events.end());
        }
      } catch (const std::exception& e) {
        entry["error"] = e.what();
        run.error(path.string() + ": " + e.what());
      }
      per_input.push_back(std::move(entry));
    }

    std::set<Asn> asns(options.asns.begin(), options.asns.end());
    std::set<std::string> collectors(options.collectors.begin(),
                                     options.collectors.end());
    auto parsed_count = events.size();
    std::erase_if(events, [&](const AnnouncementEvent& e) {
      if (!asns.empty() && (!e.origin_asn || !asns.contains(*e.origin_asn)))
        return true;
      return !collectors.empty() && !collectors.contains(e.collector);
    });
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.ts < b.ts; });

    std::size_t withdrawals = 0, ambiguous = 0;
    for (const auto& e : events) {
      withdrawals += e.kind == EventKind::withdrawal;
      ambiguous += e.ambiguous_origin;
    }
    run.write("events.jsonl", [&](std::ostream& out) { write_event_lines(out, events); });

    ojson summary;
    summary["inputs"] = per_input;
    summary["mrt_totals"] = mrt_stats_json(totals);
    summary["parsed_events"] = parsed_count;
    summary["filtered_out"] = parsed_count - events.size();
    summary["written_events"] = events.size();
    summary["withdrawals_excluded_from_series"] = withdrawals;
    summary["ambiguous_origin_excluded_from_series"] = ambiguous;
    summary["announcements_in_series"] = events.size() - withdrawals - ambiguous;
    summary["dropped"] = totals.dropped();
    run.write("ingest_summary.json", [&](std::ostream& out) { out << summary.dump(2) << '\n'; });
    log << "ingest: " << events.size() << " events written (" << withdrawals
        << " withdrawals, " << totals.dropped() << " dropped)\n";
  });
}

int cmd_analyze(const GlobalOptions& global, const AnalyzeOptions& options,
                std::ostream& log, std::ostream& err) {
  Run run("analyze", global, err);
  return guarded(run, [&] {
    auto config = resolve_config(global, options.overrides);
    auto& cfg = run.manifest().config();
    cfg["global"] = global_json(global);
    cfg["detector"] = config_json(config);
    cfg["window"] = options.window;
    cfg["samples"] = options.samples;
    cfg["alpha"] = options.alpha;
    cfg["min_null"] = options.min_null;
    cfg["percentile"] = options.percentile;

    auto events = load_events(run, options.events);
    auto window = parse_window(options.window);

    std::string collector;
    if (options.collector) {
      collector = *options.collector;
    } else {
      std::set<std::string> seen;
      for (const auto& e : events)
        seen.insert(e.collector);
      if (seen.size() != 1)
        throw ConfigError("events cover " + std::to_string(seen.size())
                          + " collectors; pass --collector");
      collector = *seen.begin();
    }
    cfg["collector"] = collector;

    std::vector<TimeWindow> nulls;
    for (const auto& w : options.null_windows)
      nulls.push_back(parse_window(w));
    if (options.null_window_file) {
      run.manifest().add_input(*options.null_window_file);
      std::ifstream in(*options.null_window_file);
      std::string line;
      while (std::getline(in, line)) {
        auto text = trim(std::string_view(line).substr(0, line.find('#')));
        if (!text.empty())
          nulls.push_back(parse_window(text));
      }
    }
    auto null_json = ojson::array();
    for (const auto& w : nulls)
      null_json.push_back({w.start, w.end});
    cfg["null_windows"] = null_json;
    if (options.incidents) {
      run.manifest().add_input(*options.incidents);
      std::vector<TimeWindow> incident_windows;
      for (const auto& inc : load_incidents(*options.incidents))
        incident_windows.push_back(inc.window);
      validate_null_windows(nulls, incident_windows);
    }

    if (nulls.empty())
      throw InsufficientNullData("no null windows supplied");

    auto all = build_all_series(events, collector);
    std::vector<EventSeries> corpus;
    for (const auto& [asn, series] : all)
      corpus.push_back(restrict_to(series, window.start, window.end));
    std::optional<JointActivityTable> table;
    try {
      table = joint_distribution(corpus, window, {config.min_events, options.percentile});
    } catch (const std::exception& e) {
      run.error(std::string("joint distribution: ") + e.what());
    }
    if (table) {
      run.write("joint.csv", [&](std::ostream& out) { write_joint_csv(out, *table); });
      run.write("joint.json", [&](std::ostream& out) { write_joint_sidecar(out, *table); });
      run.write("skipped.csv", [&](std::ostream& out) {
        out << "asn,count,reason\n";
        for (const auto& s : table->skipped)
          out << s.asn << ',' << s.count << ',' << s.reason << '\n';
      });
    }

    std::vector<Asn> targets = options.asns;
    if (targets.empty() && table)
      for (const auto& row : table->rows)
        if (row.quadrant == Quadrant::bursty_high_volume)
          targets.push_back(row.asn);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    SignificanceOptions sig{options.samples, options.alpha, options.min_null,
                            config.min_events};
    std::vector<std::optional<SignificanceResult>> results(targets.size());
    std::vector<std::string> failures(targets.size());
    parallel_for(targets.size(), global.threads, [&](std::size_t i) {
      try {
        auto it = all.find(targets[i]);
        if (it == all.end())
          throw InsufficientData("no announcements at " + collector);
        auto observed = measure_burstiness(
            restrict_to(it->second, window.start, window.end), config.min_events);
        std::vector<EventSeries> null_series;
        for (const auto& w : nulls)
          null_series.push_back(restrict_to(it->second, w.start, w.end));
        results[i] = monte_carlo_null_test(null_series, observed, sig);
      } catch (const std::exception& e) {
        failures[i] = as_label(targets[i]) + ": " + e.what();
      }
    });

    std::ostringstream summary;
    summary.precision(17);
    summary << "asn,observed_b,empirical_p,tail,significant,null_samples\n";
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (!results[i]) {
        run.error(failures[i]);
        continue;
      }
      const auto& r = *results[i];
      run.write(fs::path("significance") / (as_label(targets[i]) + ".json"),
                [&](std::ostream& out) { write_significance_json(out, targets[i], r); });
      summary << targets[i] << ',' << r.observed_b << ',' << r.empirical_p << ','
              << (r.tail == Tail::upper ? "upper" : "lower") << ','
              << (r.significant ? "true" : "false") << ',' << r.null_samples.size()
              << '\n';
    }
    run.write("significance.csv", [&](std::ostream& out) { out << summary.str(); });
    log << "analyze: " << (table ? table->rows.size() : 0) << " ASes in table, "
        << (table ? table->skipped.size() : 0) << " skipped, " << targets.size()
        << " tested\n";
  });
}

int cmd_detect(const GlobalOptions& global, const DetectOptions& options,
               std::ostream& log, std::ostream& err) {
  Run run("detect", global, err);
  return guarded(run, [&] {
    auto config = resolve_config(global, options.overrides);
    auto& cfg = run.manifest().config();
    cfg["global"] = global_json(global);
    cfg["detector"] = config_json(config);
    cfg["detectors"] = options.detector;
    cfg["asn_filter"] = options.asns;
    cfg["collector_filter"] = options.collectors;

    bool want_intensity = options.detector == "intensity" || options.detector == "both";
    bool want_volume = options.detector == "volume" || options.detector == "both";
    if (!want_intensity && !want_volume)
      throw ConfigError("--detector must be intensity, volume or both");

    auto events = load_events(run, options.events);
    std::set<Asn> asns(options.asns.begin(), options.asns.end());
    std::set<std::string> collectors(options.collectors.begin(),
                                     options.collectors.end());
    std::map<std::pair<std::string, Asn>, std::vector<AnnouncementEvent>> groups;
    std::vector<Timestamp> all_ts;
    for (const auto& e : events) {
      all_ts.push_back(e.ts);
      if (e.kind != EventKind::announcement || !e.origin_asn || e.ambiguous_origin)
        continue;
      if (!asns.empty() && !asns.contains(*e.origin_asn))
        continue;
      if (!collectors.empty() && !collectors.contains(e.collector))
        continue;
      groups[{e.collector, *e.origin_asn}].push_back(e);
    }
    if (groups.empty())
      run.warn("no series to analyse; writing empty outputs");

    std::vector<std::pair<std::string, Asn>> keys;
    for (const auto& [key, _] : groups)
      keys.push_back(key);
    std::vector<std::vector<AnomalyReport>> per_key(keys.size());
    parallel_for(keys.size(), global.threads, [&](std::size_t i) {
      const auto& [collector, asn] = keys[i];
      const auto& group = groups.at(keys[i]);
      if (want_intensity)
        per_key[i].push_back(detect_events(build_series(group, asn, collector),
                                           config, options.traces));
      if (want_volume)
        per_key[i].push_back(detect_volume(
            build_volume_series(group, asn, collector), config, options.traces));
    });

    std::vector<AnomalyReport> reports;
    for (auto& batch : per_key)
      for (auto& r : batch) {
        if (options.traces)
          run.write(fs::path("traces") / r.collector
                        / (as_label(r.asn) + "." + to_string(r.detector) + ".csv"),
                    [&](std::ostream& out) { write_trace_csv(out, r); });
        r.trace.clear();
        reports.push_back(std::move(r));
      }

    std::ostringstream body;
    write_report_json(body, reports, config);
    auto j = ojson::parse(body.str());
    if (!all_ts.empty()) {
      auto bounds = bounds_of(all_ts);
      j["study"] = {{"t0", bounds.t0},
                    {"t1", bounds.t1},
                    {"start_utc", format_utc(bounds.t0)},
                    {"end_utc", format_utc(bounds.t1)}};
    } else {
      j["study"] = nullptr;
    }
    run.write("reports.json", [&](std::ostream& out) { out << j.dump(2) << '\n'; });
    std::size_t flagged = 0;
    for (const auto& r : reports)
      flagged += r.anomalous.size();
    log << "detect: " << reports.size() << " reports, " << flagged
        << " flagged timestamps\n";
  });
}

int cmd_evaluate(const GlobalOptions& global, const EvaluateOptions& options,
                 std::ostream& log, std::ostream& err) {
  Run run("evaluate", global, err);
  auto& cfg = run.manifest().config();
  cfg["global"] = global_json(global);
  cfg["bin_length"] = options.bin_length;
  cfg["incident_filter"] = options.names;
  return guarded(run, [&] {
    if (options.bin_length <= 0)
      throw ConfigError("bin length must be positive");
    run.manifest().add_input(options.reports);
    std::ifstream in(options.reports);
    if (!in)
      throw Error("cannot read " + options.reports.string());
    ojson j;
    try {
      j = ojson::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(options.reports.string() + ": " + e.what());
    }

    std::vector<AnomalyReport> reports;
    try {
      for (const auto& r : j.at("reports")) {
        AnomalyReport report;
        report.asn = r.at("asn").get<Asn>();
        report.collector = r.at("collector").get<std::string>();
        auto kind = r.at("detector").get<std::string>();
        if (kind != "intensity" && kind != "volume")
          throw ConfigError("unknown detector '" + kind + "'");
        report.detector = kind == "volume" ? DetectorKind::volume : DetectorKind::intensity;
        report.anomalous = r.at("anomalous_timestamps").get<std::vector<Timestamp>>();
        reports.push_back(std::move(report));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(options.reports.string() + ": " + e.what());
    }

    StudyBounds bounds;
    bool have_study = j.contains("study") && j["study"].is_object();
    if (have_study) {
      bounds.t0 = j["study"].at("t0").get<Timestamp>();
      bounds.t1 = j["study"].at("t1").get<Timestamp>();
    }
    if (options.start)
      bounds.t0 = parse_instant(*options.start);
    if (options.end)
      bounds.t1 = parse_instant(*options.end);
    if (!have_study && !(options.start && options.end))
      throw ConfigError("reports carry no study bounds; pass --start and --end");
    if (bounds.t1 <= bounds.t0)
      throw ConfigError("study bounds are empty");
    cfg["study"] = {{"t0", bounds.t0}, {"t1", bounds.t1}};

    run.manifest().add_input(options.incidents);
    auto incidents = load_incidents(options.incidents);
    std::vector<IncidentWindow> selected;
    if (options.names.empty()) {
      std::set<Asn> present;
      for (const auto& r : reports)
        present.insert(r.asn);
      for (const auto& inc : incidents)
        if (present.contains(inc.perpetrator_asn))
          selected.push_back(inc);
    } else {
      for (const auto& name : options.names) {
        auto it = std::find_if(incidents.begin(), incidents.end(),
                               [&](const auto& inc) { return inc.name == name; });
        if (it == incidents.end())
          throw ConfigError("unknown incident '" + name + "'");
        selected.push_back(*it);
      }
    }
    if (selected.empty())
      run.warn("no incident matches the reported ASes");

    std::vector<EvaluationRow> rows;
    for (const auto& inc : selected) {
      std::map<std::string, std::map<std::string, AnomalyReport>> by_collector;
      for (const auto& r : reports)
        if (r.asn == inc.perpetrator_asn)
          by_collector[r.collector][to_string(r.detector)] = r;
      if (by_collector.empty()) {
        run.error(inc.name + ": no reports for " + as_label(inc.perpetrator_asn));
        continue;
      }
      try {
        for (const auto& [collector, detectors] : by_collector) {
          auto part = evaluate_incident(detectors, inc, bounds, options.bin_length);
          rows.insert(rows.end(), part.begin(), part.end());
        }
      } catch (const std::exception& e) {
        run.error(inc.name + ": " + e.what());
      }
    }
    run.write("results.csv", [&](std::ostream& out) { write_results_csv(out, rows); });
    log << "evaluate: " << rows.size() << " rows for " << selected.size()
        << " incidents\n";
  });
}

int cmd_simulate(const GlobalOptions& global, const SimulateOptions& options,
                 std::ostream& log, std::ostream& err) {
  Run run("simulate", global, err);
  auto& cfg = run.manifest().config();
  cfg["global"] = global_json(global);
  return guarded(run, [&] {
    if (options.specs.empty())
      throw ConfigError("no simulation specs given");
    std::size_t streams = 0;
    std::set<std::string> used;
    for (const auto& path : options.specs) {
      try {
        run.manifest().add_input(path);
        std::ifstream in(path);
        std::stringstream text;
        text << in.rdbuf();
        auto sims = synth::parse_simulations(text.str());
        for (std::size_t i = 0; i < sims.size(); ++i) {
          if (global.seed)
            sims[i].stream.seed = *global.seed + i;
          auto events = synth::run(sims[i]);
          auto name = file_label(path);
          if (sims.size() > 1)
            name += "_" + std::to_string(i);
          while (!used.insert(name).second)
            name += "_";
          run.write(name + ".jsonl", [&](std::ostream& out) { write_event_lines(out, events); });
          ++streams;
        }
      } catch (const std::exception& e) {
        run.error(path.string() + ": " + e.what());
      }
    }
    log << "simulate: " << streams << " streams written\n";
  });
}

} // namespace bgpburst::cli
