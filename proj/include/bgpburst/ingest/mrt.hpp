#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bgpburst/types.hpp"

namespace bgpburst::ingest {

/// MRT record types and BGP4MP subtypes understood by the parser
/// (RFC 6396 section 4 and RFC 6396 section 4.4).
namespace mrt {

inline constexpr std::uint16_t table_dump = 12;
inline constexpr std::uint16_t table_dump_v2 = 13;
inline constexpr std::uint16_t bgp4mp = 16;
inline constexpr std::uint16_t bgp4mp_et = 17;

inline constexpr std::uint16_t bgp4mp_state_change = 0;
inline constexpr std::uint16_t bgp4mp_message = 1;
inline constexpr std::uint16_t bgp4mp_message_as4 = 4;
inline constexpr std::uint16_t bgp4mp_state_change_as4 = 5;
inline constexpr std::uint16_t bgp4mp_message_local = 6;
inline constexpr std::uint16_t bgp4mp_message_as4_local = 7;

inline constexpr std::size_t header_size = 12;

} // namespace mrt

/// Counters accumulated while parsing. Every NLRI entry found in an UPDATE
/// is either emitted or dropped, so `nlri_entries == emitted + dropped()`.
struct MrtStats {
  std::size_t records = 0;
  /// Records that are not BGP4MP messages (RIB dumps, state changes,
  /// unknown types).
  std::size_t skipped_records = 0;
  /// BGP4MP messages that are not UPDATEs (OPEN, KEEPALIVE, ...).
  std::size_t non_update_messages = 0;
  std::size_t nlri_entries = 0;
  std::size_t emitted = 0;
  std::size_t withdrawals = 0;
  std::size_t ambiguous_origin = 0;
  std::size_t dropped_malformed_as_path = 0;
  std::size_t dropped_missing_origin = 0;

  std::size_t dropped() const noexcept {
    return dropped_malformed_as_path + dropped_missing_origin;
  }

  MrtStats& operator+=(const MrtStats& other) noexcept;
};

struct MrtParseResult {
  std::vector<AnnouncementEvent> events;
  MrtStats stats;
};

/// Parses a concatenation of uncompressed MRT records. Emits one event per
/// announced or withdrawn prefix of every BGP4MP / BGP4MP_ET UPDATE. The
/// collector name is not stored in MRT and must be supplied.
///
/// Throws ParseError (byte offset of the offending record) when a record or
/// the BGP message inside it is truncated or structurally invalid.
MrtParseResult parse_mrt_updates(std::span<const std::uint8_t> bytes,
                                 std::string_view collector);

} // namespace bgpburst::ingest
