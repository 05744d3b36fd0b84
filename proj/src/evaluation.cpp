#include "bgpburst/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bgpburst/timeutil.hpp"

namespace bgpburst {

std::size_t StudyBounds::bin_count(Timestamp m) const {
  if (!(t0 < t1) || m <= 0)
    throw ConfigError("study bounds need t0 < t1 and a positive bin length");
  return static_cast<std::size_t>((t1 - t0 + m - 1) / m);
}

BinSet bin_timestamps(std::span<const Timestamp> timestamps,
                      const StudyBounds& bounds, Timestamp m) {
  bounds.bin_count(m);
  BinSet bins;
  std::vector<Timestamp> outside;
  for (auto ts : timestamps) {
    if (ts < bounds.t0 || ts >= bounds.t1)
      outside.push_back(ts);
    else
      bins.insert(static_cast<std::size_t>((ts - bounds.t0) / m));
  }
  if (!outside.empty()) {
    std::ostringstream msg;
    msg << outside.size() << " timestamp(s) outside study bounds ["
        << bounds.t0 << ", " << bounds.t1 << "):";
    for (std::size_t i = 0; i < outside.size() && i < 10; ++i)
      msg << ' ' << outside[i];
    if (outside.size() > 10)
      msg << " ...";
    throw OutOfBounds(msg.str());
  }
  return bins;
}

BinSet window_bins(const TimeWindow& window, const StudyBounds& bounds,
                   Timestamp m) {
  auto n = bounds.bin_count(m);
  if (!(window.start < window.end))
    throw ConfigError("incident window is empty");
  if (window.start < bounds.t0 || window.end > bounds.t1)
    throw ConfigError("incident window [" + format_utc(window.start) + ", "
                      + format_utc(window.end) + ") is outside study bounds ["
                      + format_utc(bounds.t0) + ", " + format_utc(bounds.t1)
                      + ")");
  auto first = static_cast<std::size_t>((window.start - bounds.t0) / m);
  auto last = static_cast<std::size_t>((window.end - 1 - bounds.t0) / m);
  BinSet bins;
  for (auto i = first; i <= last && i < n; ++i)
    bins.insert(i);
  return bins;
}

Metrics score(const BinSet& truth, const BinSet& detected, std::size_t n) {
  Metrics m;
  for (auto b : detected)
    (truth.contains(b) ? m.tp : m.fp) += 1;
  m.fn = truth.size() - m.tp;
  m.tn = n - m.tp - m.fp - m.fn;
  if (m.tp + m.fp > 0)
    m.precision = double(m.tp) / double(m.tp + m.fp);
  if (m.tp + m.fn > 0)
    m.recall = double(m.tp) / double(m.tp + m.fn);
  if (m.precision && m.recall) {
    auto sum = *m.precision + *m.recall;
    m.f1 = sum > 0 ? 2 * *m.precision * *m.recall / sum : 0.0;
  }
  return m;
}

std::vector<EvaluationRow>
evaluate_incident(const std::map<std::string, AnomalyReport>& reports,
                  const IncidentWindow& incident, const StudyBounds& bounds,
                  Timestamp m) {
  auto truth = window_bins(incident.window, bounds, m);
  auto n = bounds.bin_count(m);
  std::vector<EvaluationRow> rows;
  for (const auto& [name, report] : reports) {
    BinnedEvaluation e;
    e.bounds = bounds;
    e.m = m;
    e.n = n;
    e.truth = truth;
    e.detected = bin_timestamps(report.anomalous, bounds, m);
    e.metrics = score(e.truth, e.detected, n);
    rows.push_back({incident.name, report.collector, name, std::move(e)});
  }
  return rows;
}

StudyBounds bounds_of(std::span<const Timestamp> timestamps) {
  if (timestamps.empty())
    throw ConfigError("cannot derive study bounds from no timestamps");
  auto [lo, hi] = std::minmax_element(timestamps.begin(), timestamps.end());
  return {*lo, *hi + 1};
}

std::vector<IncidentWindow> parse_incidents(std::string_view json_text) {
  auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_array())
    throw ConfigError("incident config must be a JSON array");
  std::vector<IncidentWindow> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    auto where = "incident #" + std::to_string(i) + ": ";
    for (const char* key : {"name", "asn", "start_utc", "end_utc", "kind"})
      if (!e.contains(key))
        throw ConfigError(where + "missing field '" + key + "'");
    IncidentWindow w;
    try {
      w.name = e["name"].get<std::string>();
      w.perpetrator_asn = e["asn"].get<Asn>();
      w.window.start = parse_rfc3339(e["start_utc"].get<std::string>());
      w.window.end = parse_rfc3339(e["end_utc"].get<std::string>());
      auto kind = e["kind"].get<std::string>();
      if (kind == "large-scale")
        w.kind = IncidentKind::large_scale;
      else if (kind == "interception")
        w.kind = IncidentKind::interception;
      else
        throw ConfigError("unknown kind '" + kind + "'");
      if (e.contains("note"))
        w.note = e["note"].get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError(where + ex.what());
    } catch (const ConfigError& ex) {
      throw ConfigError(where + ex.what());
    }
    if (!(w.window.start < w.window.end))
      throw ConfigError(where + "start must precede end");
    out.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t k = i + 1; k < out.size(); ++k)
      if (out[i].window.overlaps(out[k].window))
        throw ConfigError("incidents '" + out[i].name + "' and '"
                          + out[k].name + "' overlap");
  return out;
}

std::vector<IncidentWindow> load_incidents(const std::filesystem::path& path) {
  std::ifstream f{path};
  if (!f)
    throw ConfigError("cannot open incident config " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_incidents(buf.str());
}

void write_results_csv(std::ostream& out, std::span<const EvaluationRow> rows) {
  out << "incident,collector,detector,precision,recall,f1,tp,fp,fn,tn\n";
  auto field = [&](const std::optional<double>& v) {
    if (v)
      out << std::setprecision(6) << *v;
    else
      out << "null";
  };
  for (const auto& r : rows) {
    const auto& m = r.evaluation.metrics;
    out << r.incident << ',' << r.collector << ',' << r.detector << ',';
    field(m.precision);
    out << ',';
    field(m.recall);
    out << ',';
    field(m.f1);
    out << ',' << m.tp << ',' << m.fp << ',' << m.fn << ',' << m.tn << '\n';
  }
}

} // namespace bgpburst
