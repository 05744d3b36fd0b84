#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bgpburst/types.hpp"

namespace bgpburst::ingest {

// Canonical event format: one JSON object per line,
//
//   {"ts":1396463160,"collector":"route-views.linx","peer_asn":3356,
//    "prefix":"10.0.0.0/8","origin_asn":4761,"type":"A"}
//
// peer_asn is optional, origin_asn is optional for withdrawals ("W").
// Events whose AS-PATH ended in an AS_SET carry "origin_as_set":true.

std::string to_event_line(const AnnouncementEvent& event);

void write_event_lines(std::ostream& out,
                       std::span<const AnnouncementEvent> events);

/// Throws ParseError carrying `line_no`.
AnnouncementEvent parse_event_line(std::string_view line,
                                   std::size_t line_no = 1);

/// Parses a whole stream; blank lines are ignored. Throws ParseError at the
/// first bad line.
std::vector<AnnouncementEvent> parse_event_lines(std::istream& in);

} // namespace bgpburst::ingest
