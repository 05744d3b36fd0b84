#include "bgpburst/ingest/mrt.hpp"

#include <optional>
#include <stdexcept>

#include "bgpburst/error.hpp"

namespace bgpburst::ingest {

MrtStats& MrtStats::operator+=(const MrtStats& other) noexcept {
  records += other.records;
  skipped_records += other.skipped_records;
  non_update_messages += other.non_update_messages;
  nlri_entries += other.nlri_entries;
  emitted += other.emitted;
  withdrawals += other.withdrawals;
  ambiguous_origin += other.ambiguous_origin;
  dropped_malformed_as_path += other.dropped_malformed_as_path;
  dropped_missing_origin += other.dropped_missing_origin;
  return *this;
}

namespace {

namespace bgp {

inline constexpr std::size_t header_size = 19;
inline constexpr std::uint8_t update = 2;

inline constexpr std::uint8_t attr_extended_length = 0x10;
inline constexpr std::uint8_t attr_as_path = 2;
inline constexpr std::uint8_t attr_mp_reach_nlri = 14;
inline constexpr std::uint8_t attr_mp_unreach_nlri = 15;

inline constexpr std::uint8_t as_set = 1;
inline constexpr std::uint8_t as_sequence = 2;
inline constexpr std::uint8_t as_confed_sequence = 3;
inline constexpr std::uint8_t as_confed_set = 4;

inline constexpr std::uint16_t afi_ipv4 = 1;
inline constexpr std::uint16_t afi_ipv6 = 2;

} // namespace bgp

/// Bounds-checked big-endian cursor over a byte range. `base` is the offset
/// of `data` within the whole input, used for error reporting.
class Reader {
public:
  Reader(std::span<const std::uint8_t> data, std::size_t base)
    : data_(data), base_(base) {}

  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  bool empty() const noexcept { return remaining() == 0; }
  std::size_t offset() const noexcept { return base_ + pos_; }

  std::uint8_t u8() { return take(1)[0]; }

  std::uint16_t u16() {
    auto b = take(2);
    return static_cast<std::uint16_t>(b[0] << 8 | b[1]);
  }

  std::uint32_t u32() {
    auto b = take(4);
    return std::uint32_t{b[0]} << 24 | std::uint32_t{b[1]} << 16
           | std::uint32_t{b[2]} << 8 | std::uint32_t{b[3]};
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (n > remaining())
      throw ParseError("truncated data: need " + std::to_string(n)
                         + " bytes, have " + std::to_string(remaining()),
                       offset());
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  Reader sub(std::size_t n) {
    auto base = offset();
    return Reader{take(n), base};
  }

private:
  std::span<const std::uint8_t> data_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

std::vector<Prefix> read_prefixes(Reader r, Family family) {
  std::vector<Prefix> out;
  while (!r.empty()) {
    auto at = r.offset();
    unsigned length = r.u8();
    if (length > Prefix::max_length(family))
      throw ParseError("prefix length " + std::to_string(length)
                         + " exceeds address size",
                       at);
    auto bytes = r.take((length + 7) / 8);
    out.push_back(Prefix::from_bytes(family, bytes.data(), bytes.size(),
                                     length));
  }
  return out;
}

std::optional<Family> family_of(std::uint16_t afi) {
  if (afi == bgp::afi_ipv4)
    return Family::v4;
  if (afi == bgp::afi_ipv6)
    return Family::v6;
  return std::nullopt;
}

struct Origin {
  std::optional<Asn> asn;
  bool ambiguous = false;
  bool malformed = false;
};

/// Returns the origin of an AS_PATH attribute: the last ASN of the last
/// non-confederation segment.
Origin origin_of(std::span<const std::uint8_t> path, std::size_t as_width) {
  Origin origin;
  std::size_t pos = 0;
  while (pos < path.size()) {
    if (path.size() - pos < 2)
      return {std::nullopt, false, true};
    auto type = path[pos];
    std::size_t count = path[pos + 1];
    pos += 2;
    if (type < bgp::as_set || type > bgp::as_confed_set)
      return {std::nullopt, false, true};
    if (path.size() - pos < count * as_width)
      return {std::nullopt, false, true};
    if (count > 0 && (type == bgp::as_set || type == bgp::as_sequence)) {
      Asn asn = 0;
      for (std::size_t i = 0; i < as_width; ++i)
        asn = asn << 8 | path[pos + (count - 1) * as_width + i];
      origin.asn = asn;
      origin.ambiguous = type == bgp::as_set;
    }
    pos += count * as_width;
  }
  return origin;
}

struct UpdateContent {
  std::vector<Prefix> announced;
  std::vector<Prefix> withdrawn;
  std::optional<std::span<const std::uint8_t>> as_path;
};

UpdateContent read_update(Reader r) {
  UpdateContent u;
  auto withdrawn_len = r.u16();
  u.withdrawn = read_prefixes(r.sub(withdrawn_len), Family::v4);
  auto attrs_len = r.u16();
  auto attrs = r.sub(attrs_len);
  while (!attrs.empty()) {
    auto flags = attrs.u8();
    auto type = attrs.u8();
    std::size_t len = (flags & bgp::attr_extended_length) ? attrs.u16()
                                                           : attrs.u8();
    auto value = attrs.sub(len);
    switch (type) {
      case bgp::attr_as_path:
        u.as_path = value.take(value.remaining());
        break;
      case bgp::attr_mp_reach_nlri: {
        auto family = family_of(value.u16());
        value.u8(); // SAFI
        value.take(value.u8()); // next hop
        value.u8(); // reserved
        if (family) {
          auto p = read_prefixes(value.sub(value.remaining()), *family);
          u.announced.insert(u.announced.end(), p.begin(), p.end());
        }
        break;
      }
      case bgp::attr_mp_unreach_nlri: {
        auto family = family_of(value.u16());
        value.u8(); // SAFI
        if (family) {
          auto p = read_prefixes(value.sub(value.remaining()), *family);
          u.withdrawn.insert(u.withdrawn.end(), p.begin(), p.end());
        }
        break;
      }
      default:
        break;
    }
  }
  auto nlri = read_prefixes(r.sub(r.remaining()), Family::v4);
  u.announced.insert(u.announced.begin(), nlri.begin(), nlri.end());
  return u;
}

void parse_bgp4mp(Reader body, std::uint16_t subtype, Timestamp ts,
                  std::string_view collector, MrtParseResult& out) {
  bool as4 = subtype == mrt::bgp4mp_message_as4
             || subtype == mrt::bgp4mp_message_as4_local;
  std::size_t as_width = as4 ? 4 : 2;
  Asn peer_asn = as4 ? body.u32() : body.u16();
  as4 ? body.u32() : body.u16(); // local AS
  body.u16();                    // interface index
  auto afi_at = body.offset();
  auto family = family_of(body.u16());
  if (!family)
    throw ParseError("unknown address family in BGP4MP header", afi_at);
  auto ip_width = *family == Family::v4 ? 4u : 16u;
  body.take(2 * ip_width); // peer and local IP

  auto msg_at = body.offset();
  body.take(16); // marker
  auto msg_len = body.u16();
  auto msg_type = body.u8();
  if (msg_len < bgp::header_size
      || msg_len - bgp::header_size > body.remaining())
    throw ParseError("BGP message length " + std::to_string(msg_len)
                       + " inconsistent with record",
                     msg_at);
  if (msg_type != bgp::update) {
    ++out.stats.non_update_messages;
    return;
  }
  auto update = read_update(body.sub(msg_len - bgp::header_size));

  auto& stats = out.stats;
  stats.nlri_entries += update.announced.size() + update.withdrawn.size();

  for (const auto& p : update.withdrawn) {
    out.events.push_back(AnnouncementEvent{ts, std::string{collector},
                                           peer_asn, p, std::nullopt,
                                           EventKind::withdrawal, false});
    ++stats.emitted;
    ++stats.withdrawals;
  }
  if (update.announced.empty())
    return;

  Origin origin;
  if (update.as_path)
    origin = origin_of(*update.as_path, as_width);
  if (origin.malformed) {
    stats.dropped_malformed_as_path += update.announced.size();
    return;
  }
  if (!origin.asn) {
    stats.dropped_missing_origin += update.announced.size();
    return;
  }
  for (const auto& p : update.announced) {
    out.events.push_back(AnnouncementEvent{ts, std::string{collector},
                                           peer_asn, p, origin.asn,
                                           EventKind::announcement,
                                           origin.ambiguous});
    ++stats.emitted;
    if (origin.ambiguous)
      ++stats.ambiguous_origin;
  }
}

bool is_message_subtype(std::uint16_t subtype) {
  return subtype == mrt::bgp4mp_message || subtype == mrt::bgp4mp_message_as4
         || subtype == mrt::bgp4mp_message_local
         || subtype == mrt::bgp4mp_message_as4_local;
}

} // namespace

MrtParseResult parse_mrt_updates(std::span<const std::uint8_t> bytes,
                                 std::string_view collector) {
  MrtParseResult out;
  Reader input{bytes, 0};
  while (!input.empty()) {
    auto record_at = input.offset();
    if (input.remaining() < mrt::header_size)
      throw ParseError("truncated MRT header", record_at);
    Timestamp ts = input.u32();
    auto type = input.u16();
    auto subtype = input.u16();
    auto length = input.u32();
    if (length > input.remaining())
      throw ParseError("truncated MRT record: length "
                         + std::to_string(length) + " exceeds remaining "
                         + std::to_string(input.remaining()) + " bytes",
                       record_at);
    auto body = input.sub(length);
    ++out.stats.records;
    if ((type != mrt::bgp4mp && type != mrt::bgp4mp_et)
        || !is_message_subtype(subtype)) {
      ++out.stats.skipped_records;
      continue;
    }
    if (type == mrt::bgp4mp_et)
      body.u32(); // microseconds, truncated to whole seconds
    parse_bgp4mp(body, subtype, ts, collector, out);
  }
  return out;
}

} // namespace bgpburst::ingest
