#include "bgpburst/ingest/series.hpp"

#include <algorithm>
#include <ostream>
#include <utility>

namespace bgpburst::ingest {

namespace {

bool contributes(const AnnouncementEvent& e) {
  return e.kind == EventKind::announcement && e.origin_asn
         && !e.ambiguous_origin;
}

} // namespace

EventSeries build_series(std::span<const AnnouncementEvent> events,
                         Asn origin_asn, const std::string& collector) {
  EventSeries s{origin_asn, collector, {}};
  for (const auto& e : events)
    if (contributes(e) && *e.origin_asn == origin_asn
        && e.collector == collector)
      s.timestamps.push_back(e.ts);
  std::stable_sort(s.timestamps.begin(), s.timestamps.end());
  return s;
}

std::map<Asn, EventSeries>
build_all_series(std::span<const AnnouncementEvent> events,
                 const std::string& collector) {
  std::map<Asn, EventSeries> out;
  for (const auto& e : events) {
    if (!contributes(e) || e.collector != collector)
      continue;
    auto& s = out[*e.origin_asn];
    s.origin_asn = *e.origin_asn;
    s.collector = collector;
    s.timestamps.push_back(e.ts);
  }
  for (auto& [asn, s] : out)
    std::sort(s.timestamps.begin(), s.timestamps.end());
  return out;
}

VolumeSeries build_volume_series(std::span<const AnnouncementEvent> events,
                                 Asn origin_asn,
                                 const std::string& collector) {
  std::vector<std::pair<Timestamp, Prefix>> hits;
  for (const auto& e : events)
    if (contributes(e) && *e.origin_asn == origin_asn
        && e.collector == collector)
      hits.emplace_back(e.ts, e.prefix);
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());

  VolumeSeries v{collector, origin_asn, {}};
  for (const auto& [ts, prefix] : hits) {
    if (v.points.empty() || v.points.back().ts != ts)
      v.points.push_back({ts, 0});
    ++v.points.back().count;
  }
  return v;
}

EventSeries restrict_to(const EventSeries& series, Timestamp start,
                        Timestamp end) {
  EventSeries out{series.origin_asn, series.collector, {}};
  auto lo = std::lower_bound(series.timestamps.begin(),
                             series.timestamps.end(), start);
  auto hi = std::lower_bound(lo, series.timestamps.end(), end);
  out.timestamps.assign(lo, hi);
  return out;
}

void write_volume_csv(std::ostream& out, const VolumeSeries& volume) {
  out << "ts,count\n";
  for (const auto& p : volume.points)
    out << p.ts << ',' << p.count << '\n';
}

} // namespace bgpburst::ingest
