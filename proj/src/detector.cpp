#include "bgpburst/detector.hpp"

#include <ostream>

#include <json.hpp>

namespace bgpburst {

void DetectorConfig::validate() const {
  if (!(r > 0))
    throw ConfigError("r must be positive");
  if (omega < 1)
    throw ConfigError("omega must be at least 1");
  if (!(delta > 0))
    throw ConfigError("delta must be positive");
  if (!(variance_floor >= 0))
    throw ConfigError("variance_floor must be nonnegative");
  if (min_events < 2)
    throw ConfigError("min_events must be at least 2");
}

double intensity_update(double q, Timestamp last_ts, Timestamp new_ts,
                        double r) {
  if (new_ts < last_ts)
    throw OutOfOrder("timestamp " + std::to_string(new_ts)
                     + " precedes previous " + std::to_string(last_ts));
  auto gap = static_cast<double>(new_ts - last_ts);
  return 1.0 + std::exp2(-r * gap) * q;
}

std::string to_string(DetectorKind kind) {
  return kind == DetectorKind::intensity ? "intensity" : "volume";
}

AnomalyReport detect_events(const EventSeries& series,
                            const DetectorConfig& config, bool keep_trace) {
  return detect_events_with(series, config, EmaPredictor{config.weight()},
                            keep_trace);
}

AnomalyReport detect_volume(const VolumeSeries& volume,
                            const DetectorConfig& config, bool keep_trace) {
  AnomalyReport report{volume.origin_asn, volume.collector,
                       DetectorKind::volume, {}, {}};
  EmaPredictor predictor{config.weight()};
  std::size_t i = 0;
  for (const auto& point : volume.points) {
    auto y = static_cast<double>(point.count);
    predictor.update(y);
    TracePoint p{point.ts, y, predictor.mean(), predictor.stddev(), false};
    p.flag = i >= config.warmup && above_band(y, p.psi, p.sigma, config);
    if (p.flag)
      report.anomalous.push_back(point.ts);
    if (keep_trace)
      report.trace.push_back(p);
    ++i;
  }
  return report;
}

void write_trace_csv(std::ostream& out, const AnomalyReport& report) {
  out << (report.detector == DetectorKind::volume ? "ts,count,psi,sigma,flag\n"
                                                  : "ts,q,psi,sigma,flag\n");
  auto old = out.precision(17);
  for (const auto& p : report.trace)
    out << p.ts << ',' << p.value << ',' << p.psi << ',' << p.sigma << ','
        << (p.flag ? 1 : 0) << '\n';
  out.precision(old);
}

void write_report_json(std::ostream& out,
                       const std::vector<AnomalyReport>& reports,
                       const DetectorConfig& config) {
  nlohmann::ordered_json j;
  j["config"] = {{"r", config.r},
                 {"omega", config.omega},
                 {"delta", config.delta},
                 {"warmup", config.warmup},
                 {"variance_floor", config.variance_floor},
                 {"min_events", config.min_events}};
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : reports)
    arr.push_back({{"asn", r.asn},
                   {"collector", r.collector},
                   {"detector", to_string(r.detector)},
                   {"anomalous_timestamps", r.anomalous}});
  j["reports"] = std::move(arr);
  out << j.dump(2) << '\n';
}

} // namespace bgpburst
