#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bgpburst/types.hpp"

namespace bgpburst {

/// Announcement timestamps of one (origin AS, collector) pair, sorted
/// nondecreasing. Ties are distinct events.
struct EventSeries {
  Asn origin_asn = 0;
  std::string collector;
  std::vector<Timestamp> timestamps;

  std::size_t size() const noexcept { return timestamps.size(); }
  bool empty() const noexcept { return timestamps.empty(); }
};

struct VolumePoint {
  Timestamp ts = 0;
  std::size_t count = 0;

  friend bool operator==(const VolumePoint&, const VolumePoint&) = default;
};

/// Number of distinct prefixes announced in each second with activity.
struct VolumeSeries {
  std::string collector;
  Asn origin_asn = 0;
  std::vector<VolumePoint> points;
};

namespace ingest {

/// Announcements of `origin_asn` seen at `collector`. Withdrawals and
/// AS_SET-origin events are excluded.
EventSeries build_series(std::span<const AnnouncementEvent> events,
                         Asn origin_asn, const std::string& collector);

/// All series at one collector, keyed by origin ASN.
std::map<Asn, EventSeries>
build_all_series(std::span<const AnnouncementEvent> events,
                 const std::string& collector);

VolumeSeries build_volume_series(std::span<const AnnouncementEvent> events,
                                 Asn origin_asn,
                                 const std::string& collector);

/// The part of `series` inside [start, end).
EventSeries restrict_to(const EventSeries& series, Timestamp start,
                        Timestamp end);

void write_volume_csv(std::ostream& out, const VolumeSeries& volume);

} // namespace ingest
} // namespace bgpburst
