// Acceptance gate: one PASS/FAIL/SKIP line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bgpburst/burstiness.hpp"
#include "bgpburst/detector.hpp"
#include "bgpburst/evaluation.hpp"
#include "bgpburst/ingest/decompress.hpp"
#include "bgpburst/ingest/event_lines.hpp"
#include "bgpburst/ingest/mrt.hpp"
#include "bgpburst/significance.hpp"
#include "bgpburst/synth.hpp"
#include "bgpburst/timeutil.hpp"
#include "reference_detector.hpp"

using namespace bgpburst;
namespace fs = std::filesystem;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

Outcome verdict(bool ok, std::string detail) {
  return {ok ? Verdict::pass : Verdict::fail, std::move(detail)};
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "undefined"; }

oracle::ReferenceParams reference_params(const DetectorConfig& c) {
  return {c.r, double(c.omega), c.delta, c.variance_floor};
}

Outcome burstiness_limits() {
  bool ok = true;
  std::ostringstream d;

  std::vector<Timestamp> regular;
  for (int i = 0; i < 1000; ++i)
    regular.push_back(60 * i);
  auto reg = measure_burstiness(regular);
  bool reg_ok = std::abs(reg.b_raw + 1) <= 1e-12 && reg.b_corrected
                && std::abs(*reg.b_corrected + 1) <= 1e-12;
  ok &= reg_ok;
  d << "regular B=" << fmt(reg.b_raw) << " B(n)=" << fmt(reg.b_corrected);

  std::mt19937_64 gen{20240501};
  std::exponential_distribution<double> exp_gap(1.0 / 300.0);
  InterArrivalSample sample;
  sample.n_events = 100000;
  for (std::size_t i = 0; i + 1 < sample.n_events; ++i)
    sample.intervals.push_back(exp_gap(gen));
  auto b_exp = burstiness_raw(sample);
  ok &= std::abs(b_exp) <= 0.02;
  d << "; exponential n=1e5 B=" << fmt(b_exp);

  double worst = 0;
  for (double b : {-0.5, 0.0, 0.5})
    worst = std::max(worst, std::abs(finite_size_burstiness(b, 1000000) - b));
  ok &= worst < 1e-3;
  d << "; max |B(n)-B| at n=1e6 " << fmt(worst);
  return verdict(ok, d.str());
}

Outcome intensity_closed_form() {
  DetectorConfig c;
  c.r = 1.0 / 300.0;
  IntensityDetector<> det{c};
  for (int i = 0; i < 50; ++i)
    det.push(Timestamp(300) * i);
  double q = det.intensity();
  double reset = intensity_update(q, 0, Timestamp(1) << 40, c.r);
  bool ok = std::abs(q - 2) <= 1e-6 && std::abs(reset - 1) <= 1e-12;
  return verdict(ok, "Q after 50 events " + fmt(q) + " (|Q-2|=" + fmt(std::abs(q - 2))
                         + "); after a very long gap " + fmt(reset));
}

Outcome oracle_equivalence() {
  std::mt19937_64 gen{77001};
  std::size_t mismatches = 0, total_flags = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 2 + gen() % 9999;
    std::vector<Timestamp> ts{Timestamp(gen() % 1'000'000)};
    for (std::size_t i = 1; i < n; ++i) {
      auto mode = gen() % 5;
      Timestamp gap = mode == 0 ? 0
                      : mode == 1 ? Timestamp(gen() % 3)
                      : mode == 2 ? Timestamp(gen() % 60)
                                  : Timestamp(gen() % 3600);
      ts.push_back(ts.back() + gap);
    }
    DetectorConfig c;
    if (trial % 2) {
      c.omega = 1 + gen() % 500;
      c.delta = 0.5 + double(gen() % 50) / 10.0;
      c.r = 1.0 / double(1 + gen() % 3600);
      c.variance_floor = trial % 4 == 1 ? 0.0 : 1e-9;
    }
    auto got = detect_events(EventSeries{1, "acceptance", ts}, c).anomalous;
    auto want = oracle::reference_flagged_timestamps(ts, reference_params(c));
    total_flags += want.size();
    if (got != std::vector<Timestamp>(want.begin(), want.end()))
      ++mismatches;
  }
  return verdict(mismatches == 0, std::to_string(mismatches)
                                      + " of 1000 series differ; "
                                      + std::to_string(total_flags)
                                      + " reference flags compared");
}

EventSeries poisson_window(std::uint64_t seed, std::size_t n) {
  synth::GeneratorSpec spec;
  spec.process = synth::Process::poisson;
  spec.mean_gap = 300;
  spec.n_events = n;
  spec.seed = seed;
  return synth::generate_stream(spec).series;
}

Outcome monte_carlo_calibration() {
  std::mt19937_64 seeds{99};
  std::size_t fired = 0;
  const std::size_t trials = 500;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<EventSeries> nulls;
    for (int k = 0; k < 100; ++k)
      nulls.push_back(poisson_window(seeds(), 200));
    auto observed = measure_burstiness(poisson_window(seeds(), 200));
    fired += monte_carlo_null_test(nulls, observed).significant;
  }
  double rate = double(fired) / double(trials);
  return verdict(rate <= 0.08, std::to_string(fired) + " of 500 trials significant ("
                                   + fmt(100 * rate) + "%)");
}

Outcome end_to_end_synthetic() {
  constexpr Timestamp week = 7 * 86400;
  constexpr Timestamp m = default_bin_length;
  synth::GeneratorSpec spec;
  spec.process = synth::Process::poisson;
  spec.mean_gap = 600;
  spec.n_events = std::size_t(week / 600);
  spec.start_ts = 0;
  spec.asn = 64496;
  spec.collector = "synthetic";
  spec.seed = 2024;
  auto background = synth::generate_stream(spec);
  synth::IncidentSpec incident{28 * m, 29 * m, 1, 100};
  auto events = synth::inject_incident(background.events, incident, spec.asn,
                                       spec.collector);

  DetectorConfig config;
  auto series = ingest::build_series(events, spec.asn, spec.collector);
  auto volume = ingest::build_volume_series(events, spec.asn, spec.collector);
  std::map<std::string, AnomalyReport> reports{
      {"intensity", detect_events(series, config)},
      {"volume", detect_volume(volume, config)}};
  StudyBounds bounds{0, std::max(week, series.timestamps.back() + 1)};
  IncidentWindow window{"synthetic", spec.asn, {incident.start, incident.end},
                        IncidentKind::large_scale, ""};
  auto rows = evaluate_incident(reports, window, bounds, m);
  const auto& p = rows.at(0).evaluation.metrics;
  const auto& v = rows.at(1).evaluation.metrics;
  bool ok = p.recall && *p.recall == 1.0 && p.precision && v.precision
            && *p.precision >= *v.precision;
  std::ostringstream d;
  d << "intensity P=" << fmt(p.precision) << " R=" << fmt(p.recall) << " (tp=" << p.tp
    << " fp=" << p.fp << "); volume P=" << fmt(v.precision) << " R=" << fmt(v.recall)
    << " (tp=" << v.tp << " fp=" << v.fp << "); N=" << rows.at(0).evaluation.n;
  return verdict(ok, d.str());
}

Outcome metric_fixture() {
  auto m = score({2}, {2, 5}, 56);
  bool ok = m.precision && *m.precision == 0.5 && m.recall && *m.recall == 1.0
            && m.f1 && *m.f1 == 2.0 / 3.0;
  return verdict(ok, "precision " + fmt(m.precision) + ", recall " + fmt(m.recall)
                         + ", F1 " + fmt(m.f1));
}

Outcome replay() {
  const char* dir = std::getenv("BGPBURST_REPLAY_DIR");
  if (!dir || !*dir)
    return {Verdict::skip, "set BGPBURST_REPLAY_DIR to a directory of route-views.linx "
                           "update dumps for 2014-03-30..2014-04-05"};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file())
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  const std::string collector = "route-views.linx";
  const Asn perpetrator = 4761;
  std::vector<AnnouncementEvent> events;
  for (const auto& f : files) {
    auto parsed = ingest::parse_mrt_updates(ingest::read_input(f), collector);
    for (auto& e : parsed.events)
      if (e.origin_asn == perpetrator)
        events.push_back(std::move(e));
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.ts < b.ts; });
  auto series = ingest::build_series(events, perpetrator, collector);
  std::map<std::string, AnomalyReport> reports{
      {"intensity", detect_events(series, DetectorConfig{})}};
  StudyBounds bounds{parse_rfc3339("2014-03-30T00:00:00Z"),
                     parse_rfc3339("2014-04-06T00:00:00Z")};
  IncidentWindow window{"Indosat", perpetrator,
                        {parse_rfc3339("2014-04-02T18:26:00Z"),
                         parse_rfc3339("2014-04-02T21:15:00Z")},
                        IncidentKind::large_scale, ""};
  auto m = evaluate_incident(reports, window, bounds).at(0).evaluation.metrics;
  bool ok = m.precision && *m.precision == 0.25 && m.recall && *m.recall == 1.0
            && m.f1 && std::abs(*m.f1 - 0.4) < 1e-12;
  return verdict(ok, std::to_string(files.size()) + " files; precision "
                         + fmt(m.precision) + ", recall " + fmt(m.recall) + ", F1 "
                         + fmt(m.f1));
}

Outcome parser_conservation() {
  fs::path dir = BGPBURST_FIXTURE_DIR;
  bool ok = true;
  std::ostringstream d;
  for (const char* name : {"golden_updates.mrt", "golden_updates.mrt.gz",
                           "golden_updates.mrt.bz2", "golden_mixed.mrt"}) {
    auto parsed = ingest::parse_mrt_updates(ingest::read_input(dir / name),
                                            "route-views.linx");
    const auto& s = parsed.stats;
    bool conserved = s.emitted + s.dropped() == s.nlri_entries
                     && parsed.events.size() == s.emitted;
    std::ostringstream lines;
    ingest::write_event_lines(lines, parsed.events);
    std::istringstream back(lines.str());
    bool lossless = ingest::parse_event_lines(back) == parsed.events;
    ok &= conserved && lossless;
    d << name << ": " << s.emitted << "+" << s.dropped() << "/" << s.nlri_entries
      << (lossless ? " round-trip ok" : " round-trip differs") << "; ";
  }
  return verdict(ok, d.str());
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

} // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "burstiness limits", 10, burstiness_limits},
      {2, "intensity closed form", 1, intensity_closed_form},
      {3, "oracle equivalence", 60, oracle_equivalence},
      {4, "Monte Carlo calibration", 120, monte_carlo_calibration},
      {5, "end-to-end synthetic incident", 30, end_to_end_synthetic},
      {6, "metric formulas", 1, metric_fixture},
      {7, "replay of the Indosat evaluation", 3600, replay},
      {8, "parser conservation", 10, parser_conservation},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    if (out.verdict == Verdict::pass && took.count() > c.limit_seconds) {
      out.verdict = Verdict::fail;
      out.detail += "; over the " + fmt(c.limit_seconds) + " s limit";
    }
    const char* tag = out.verdict == Verdict::pass   ? "PASS"
                      : out.verdict == Verdict::fail ? "FAIL"
                                                     : "SKIP";
    failures += out.verdict == Verdict::fail;
    std::cout << tag << " [" << c.id << "] " << c.name << " (" << std::fixed
              << std::setprecision(2) << took.count() << " s): " << out.detail
              << std::defaultfloat << '\n';
  }
  return failures == 0 ? 0 : 1;
}
