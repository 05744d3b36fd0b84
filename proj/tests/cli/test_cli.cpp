#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bgpburst/ingest/event_lines.hpp"
#include "bgpburst/ingest/mrt.hpp"
#include "bgpburst/ingest/decompress.hpp"
#include "bgpburst/synth.hpp"
#include "bgpburst/timeutil.hpp"
#include "commands.hpp"
#include "manifest.hpp"

using namespace bgpburst;
using namespace bgpburst::cli;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path fixtures = BGPBURST_FIXTURE_DIR;

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("bgpburst_cli_" + std::to_string(::getpid()))
             / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

GlobalOptions in(const fs::path& out) {
  GlobalOptions g;
  g.out = out;
  g.argv = {"bgpburst"};
  return g;
}

json read_json(const fs::path& p) {
  std::ifstream f(p);
  return json::parse(f);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<AnnouncementEvent> read_events(const fs::path& p) {
  std::ifstream f(p);
  return ingest::parse_event_lines(f);
}

void write_events(const fs::path& p, const std::vector<AnnouncementEvent>& events) {
  std::ofstream f(p);
  ingest::write_event_lines(f, events);
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::map<std::string, std::string> output_digests(const fs::path& dir) {
  std::map<std::string, std::string> out;
  auto manifest = read_json(dir / "manifest.json");
  for (const auto& o : manifest["outputs"])
    out[o["path"].get<std::string>()] = o["sha256"].get<std::string>();
  return out;
}

void check_manifest_complete(const fs::path& dir) {
  auto m = read_json(dir / "manifest.json");
  std::set<std::string> listed;
  for (const auto& o : m["outputs"]) {
    CHECK(o["sha256"].get<std::string>().size() == 64);
    CHECK(o["sha256"] == sha256_file(dir / o["path"].get<std::string>()));
    listed.insert(o["path"]);
  }
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() != "manifest.json")
      CHECK(listed.contains(fs::relative(e.path(), dir).generic_string()));
  CHECK(m.contains("tool_version"));
  CHECK(m.contains("duration_seconds"));
}

/// Twelve busy Poisson ASes, one of which also bursts.
std::vector<AnnouncementEvent> corpus_with_bursty_as(Asn bursty) {
  std::vector<AnnouncementEvent> all;
  for (Asn asn = 65001; asn <= 65040; ++asn) {
    synth::GeneratorSpec spec;
    spec.mean_gap = 900;
    spec.n_events = 90;
    spec.asn = asn;
    spec.seed = asn;
    auto s = synth::generate_stream(spec).events;
    if (asn == bursty)
      s = synth::inject_incident(s, synth::IncidentSpec{20000, 20600, 1, 3}, asn,
                                 spec.collector);
    all.insert(all.end(), s.begin(), s.end());
  }
  synth::GeneratorSpec sparse;
  sparse.n_events = 3;
  sparse.asn = 65100;
  auto s = synth::generate_stream(sparse).events;
  all.insert(all.end(), s.begin(), s.end());
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.ts < b.ts; });
  return all;
}

} // namespace

TEST_CASE("ingest writes the parser's events and a summary") {
  auto out = scratch("ingest");
  IngestOptions o;
  o.inputs = {fixtures / "golden_mixed.mrt"};
  o.label = "route-views.linx";
  std::ostringstream log, err;
  REQUIRE(cmd_ingest(in(out), o, log, err) == 0);
  auto parsed = ingest::parse_mrt_updates(
      ingest::read_input(fixtures / "golden_mixed.mrt"), "route-views.linx");
  auto written = read_events(out / "events.jsonl");
  CHECK(written.size() == parsed.stats.emitted);
  auto summary = read_json(out / "ingest_summary.json");
  CHECK(summary["mrt_totals"]["nlri_entries"] == parsed.stats.nlri_entries);
  CHECK(summary["dropped"] == parsed.stats.dropped());
  CHECK(summary["withdrawals_excluded_from_series"] == parsed.stats.withdrawals);
  check_manifest_complete(out);
}

TEST_CASE("ingest filters by origin") {
  auto out = scratch("ingest_asn");
  IngestOptions o;
  o.inputs = {fixtures / "golden_mixed.mrt", fixtures / "golden_updates.mrt.bz2"};
  o.asns = {4761};
  std::ostringstream log, err;
  REQUIRE(cmd_ingest(in(out), o, log, err) == 0);
  auto events = read_events(out / "events.jsonl");
  REQUIRE_FALSE(events.empty());
  for (const auto& e : events)
    CHECK(e.origin_asn == 4761u);
}

TEST_CASE("ingest is deterministic") {
  IngestOptions o;
  o.inputs = {fixtures / "golden_updates.mrt.gz", fixtures / "golden_updates.jsonl"};
  std::ostringstream log, err;
  auto a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(cmd_ingest(in(a), o, log, err) == 0);
  REQUIRE(cmd_ingest(in(b), o, log, err) == 0);
  CHECK(output_digests(a).size() == 2);
  CHECK(output_digests(a) == output_digests(b));
}

TEST_CASE("ingest reports unreadable and broken inputs") {
  auto out = scratch("ingest_bad");
  IngestOptions o;
  o.inputs = {fixtures / "golden_updates.mrt", "/nonexistent/file.mrt",
              fixtures / "truncated.mrt"};
  std::ostringstream log, err;
  CHECK(cmd_ingest(in(out), o, log, err) == 1);
  CHECK(err.str().find("/nonexistent/file.mrt") != std::string::npos);
  CHECK(err.str().find("truncated.mrt") != std::string::npos);
  CHECK(read_json(out / "manifest.json")["errors"].size() == 2);
  CHECK(read_events(out / "events.jsonl").size() == 5);
}

TEST_CASE("analyze places the bursty AS in the first quadrant") {
  auto dir = scratch("analyze");
  write_events(dir / "events.jsonl", corpus_with_bursty_as(65007));
  AnalyzeOptions o;
  o.events = dir / "events.jsonl";
  o.window = "0,90000";
  for (int k = 1; k <= 25; ++k)
    o.null_windows.push_back("0," + std::to_string(30000 + 1000 * k));
  std::ostringstream log, err;
  auto out = dir / "out";
  cmd_analyze(in(out), o, log, err);
  auto csv = slurp(out / "joint.csv");
  CHECK(csv.find("\n65007,") != std::string::npos);
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::string> q1;
  while (std::getline(lines, line))
    if (line.size() > 2 && line.substr(line.size() - 2) == ",1")
      q1.push_back(line.substr(0, line.find(',')));
  CHECK(q1 == std::vector<std::string>{"65007"});
  CHECK(slurp(out / "skipped.csv").find("65100,3,") != std::string::npos);
  CHECK(fs::exists(out / "significance" / "AS65007.json"));
  check_manifest_complete(out);
}

TEST_CASE("analyze without null windows fails") {
  auto dir = scratch("analyze_nonull");
  write_events(dir / "events.jsonl", corpus_with_bursty_as(65007));
  AnalyzeOptions o;
  o.events = dir / "events.jsonl";
  o.window = "0,90000";
  std::ostringstream log, err;
  CHECK(cmd_analyze(in(dir / "out"), o, log, err) != 0);
  CHECK(err.str().find("null") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("analyze names ASes without enough data") {
  auto dir = scratch("analyze_short");
  write_events(dir / "events.jsonl", corpus_with_bursty_as(65007));
  AnalyzeOptions o;
  o.events = dir / "events.jsonl";
  o.window = "0,90000";
  o.null_windows = {"0,1000"};
  o.asns = {65100};
  std::ostringstream log, err;
  CHECK(cmd_analyze(in(dir / "out"), o, log, err) == 1);
  CHECK(err.str().find("AS65100") != std::string::npos);
}

TEST_CASE("analyze rejects null windows inside incidents") {
  auto dir = scratch("analyze_overlap");
  write_events(dir / "events.jsonl", corpus_with_bursty_as(65007));
  write_text(dir / "incidents.json", R"([{"name": "x", "asn": 65007,
    "start_utc": "1970-01-01T05:00:00Z", "end_utc": "1970-01-01T06:00:00Z",
    "kind": "large-scale"}])");
  AnalyzeOptions o;
  o.events = dir / "events.jsonl";
  o.window = "0,90000";
  o.null_windows = {"0,30000"};
  o.incidents = dir / "incidents.json";
  std::ostringstream log, err;
  CHECK(cmd_analyze(in(dir / "out"), o, log, err) == 1);
}

namespace {

fs::path simulated_incident(const fs::path& dir) {
  write_text(dir / "spec.json", R"({
    "stream": {"process": "poisson", "mean_gap": 600, "n_events": 1008,
               "asn": 64500, "seed": 5},
    "incidents": [{"start": 302400, "end": 313200, "burst_gap": 1,
                   "prefixes_per_second": 100}]})");
  SimulateOptions s{{dir / "spec.json"}};
  std::ostringstream log, err;
  REQUIRE(cmd_simulate(in(dir / "sim"), s, log, err) == 0);
  return dir / "sim" / "spec.jsonl";
}

} // namespace

TEST_CASE("detect flags the simulated incident") {
  auto dir = scratch("detect");
  DetectOptions o;
  o.events = simulated_incident(dir);
  std::ostringstream log, err;
  REQUIRE(cmd_detect(in(dir / "out"), o, log, err) == 0);
  auto j = read_json(dir / "out" / "reports.json");
  REQUIRE(j["reports"].size() == 2);
  CHECK(j["reports"][0]["detector"] == "intensity");
  CHECK(j["reports"][1]["detector"] == "volume");
  bool inside = false;
  for (auto t : j["reports"][0]["anomalous_timestamps"])
    inside |= t >= 302400 && t < 313200;
  CHECK(inside);
  CHECK(j["study"]["t1"].get<Timestamp>() > 313200);
  CHECK(fs::exists(dir / "out" / "traces" / "synthetic" / "AS64500.intensity.csv"));
  CHECK(fs::exists(dir / "out" / "traces" / "synthetic" / "AS64500.volume.csv"));
  check_manifest_complete(dir / "out");
}

TEST_CASE("detect with one detector and overrides") {
  auto dir = scratch("detect_volume");
  DetectOptions o;
  o.events = simulated_incident(dir);
  o.detector = "volume";
  o.overrides.delta = 3;
  std::ostringstream log, err;
  REQUIRE(cmd_detect(in(dir / "out"), o, log, err) == 0);
  auto j = read_json(dir / "out" / "reports.json");
  REQUIRE(j["reports"].size() == 1);
  CHECK(j["reports"][0]["detector"] == "volume");
  CHECK(read_json(dir / "out" / "manifest.json")["config"]["detector"]["delta"] == 3.0);

  o.detector = "lstm";
  CHECK(cmd_detect(in(dir / "bad"), o, log, err) == 1);
}

TEST_CASE("detect on an empty event set warns and writes empty outputs") {
  auto dir = scratch("detect_empty");
  write_text(dir / "events.jsonl", "");
  DetectOptions o;
  o.events = dir / "events.jsonl";
  std::ostringstream log, err;
  CHECK(cmd_detect(in(dir / "out"), o, log, err) == 0);
  CHECK(err.str().find("warning") != std::string::npos);
  CHECK(read_json(dir / "out" / "reports.json")["reports"].empty());
}

TEST_CASE("config file from the environment and from --config") {
  auto dir = scratch("config");
  write_text(dir / "env.conf", "delta = 4\n");
  write_text(dir / "flag.conf", "{\"delta\": 5}");
  ::setenv("BGPBURST_CONFIG", (dir / "env.conf").c_str(), 1);
  GlobalOptions g;
  CHECK(resolve_config(g, {}).delta == 4);
  g.config = dir / "flag.conf";
  CHECK(resolve_config(g, {}).delta == 5);
  DetectorOverrides o;
  o.delta = 6;
  CHECK(resolve_config(g, o).delta == 6);
  ::unsetenv("BGPBURST_CONFIG");
  CHECK(resolve_config(GlobalOptions{}, {}).delta == 2);
}

namespace {

fs::path reports_file(const fs::path& dir, const std::vector<Timestamp>& intensity,
                      const std::vector<Timestamp>& volume) {
  json j;
  j["config"] = json::object();
  j["study"] = {{"t0", 0}, {"t1", 56 * 10800}};
  j["reports"] = {{{"asn", 64500}, {"collector", "c1"}, {"detector", "intensity"},
                   {"anomalous_timestamps", intensity}},
                  {{"asn", 64500}, {"collector", "c1"}, {"detector", "volume"},
                   {"anomalous_timestamps", volume}}};
  write_text(dir / "reports.json", j.dump());
  write_text(dir / "incidents.json", R"([{"name": "fixture", "asn": 64500,
    "start_utc": "1970-01-01T06:00:00Z", "end_utc": "1970-01-01T09:00:00Z",
    "kind": "large-scale"}])");
  return dir / "reports.json";
}

} // namespace

TEST_CASE("evaluate reproduces the metric fixtures") {
  auto dir = scratch("evaluate");
  EvaluateOptions o;
  o.reports = reports_file(dir, {2 * 10800 + 5}, {2 * 10800, 5 * 10800 + 1});
  o.incidents = dir / "incidents.json";
  std::ostringstream log, err;
  REQUIRE(cmd_evaluate(in(dir / "out"), o, log, err) == 0);
  auto csv = slurp(dir / "out" / "results.csv");
  CHECK(csv.find("fixture,c1,intensity,1,1,1,1,0,0,55") != std::string::npos);
  CHECK(csv.find("fixture,c1,volume,0.5,1,0.666667,1,1,0,54") != std::string::npos);
  check_manifest_complete(dir / "out");
}

TEST_CASE("evaluate rejects mismatched bounds") {
  auto dir = scratch("evaluate_bounds");
  EvaluateOptions o;
  o.reports = reports_file(dir, {2 * 10800}, {});
  o.incidents = dir / "incidents.json";
  o.start = "1970-01-02T00:00:00Z";
  std::ostringstream log, err;
  CHECK(cmd_evaluate(in(dir / "out"), o, log, err) == 1);

  o.start.reset();
  o.names = {"nope"};
  CHECK(cmd_evaluate(in(dir / "out2"), o, log, err) == 1);
}

TEST_CASE("simulate is deterministic and seedable") {
  auto dir = scratch("simulate");
  write_text(dir / "a.json", R"({"stream": {"n_events": 50, "seed": 3}})");
  SimulateOptions s{{dir / "a.json"}};
  std::ostringstream log, err;
  REQUIRE(cmd_simulate(in(dir / "x"), s, log, err) == 0);
  REQUIRE(cmd_simulate(in(dir / "y"), s, log, err) == 0);
  CHECK(output_digests(dir / "x").size() == 1);
  CHECK(output_digests(dir / "x") == output_digests(dir / "y"));
  CHECK(read_events(dir / "x" / "a.jsonl").size() == 50);

  auto seeded = in(dir / "z");
  seeded.seed = 11;
  REQUIRE(cmd_simulate(seeded, s, log, err) == 0);
  CHECK(output_digests(dir / "z") != output_digests(dir / "x"));
}

TEST_CASE("simulate names invalid fields") {
  auto dir = scratch("simulate_bad");
  write_text(dir / "bad.json", R"({"stream": {"mean_gap": -1}})");
  SimulateOptions s{{dir / "bad.json"}};
  std::ostringstream log, err;
  CHECK(cmd_simulate(in(dir / "out"), s, log, err) == 1);
  CHECK(err.str().find("mean_gap") != std::string::npos);
}

TEST_CASE("window syntax") {
  CHECK(parse_window("10,20").start == 10);
  CHECK(parse_window("2014-04-02T18:26:00Z, 2014-04-02T21:15:00Z").end == 1396473300);
  CHECK_THROWS_AS(parse_window("10"), ConfigError);
  CHECK_THROWS_AS(parse_window("20,10"), ConfigError);
}
