#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace bgpburst {

using Asn = std::uint32_t;

/// Unix seconds. Collectors stamp updates with one-second resolution.
using Timestamp = std::int64_t;

inline constexpr Asn as_trans = 23456;

enum class Family : std::uint8_t { v4 = 4, v6 = 6 };

/// An IP prefix. Host bits beyond `length` are always zero.
class Prefix {
public:
  Prefix() = default;

  /// Builds a prefix from raw network-order bytes, masking host bits.
  static Prefix from_bytes(Family family, const std::uint8_t* bytes,
                           std::size_t n, unsigned length);

  /// Parses CIDR text such as "10.0.0.0/8" or "2001:db8::/32".
  /// Throws std::invalid_argument.
  static Prefix parse(std::string_view text);

  std::string to_string() const;

  Family family() const noexcept { return family_; }
  unsigned length() const noexcept { return length_; }
  const std::array<std::uint8_t, 16>& bytes() const noexcept { return bytes_; }

  static constexpr unsigned max_length(Family f) noexcept {
    return f == Family::v4 ? 32 : 128;
  }

  friend auto operator<=>(const Prefix&, const Prefix&) = default;
  friend bool operator==(const Prefix&, const Prefix&) = default;

private:
  Family family_ = Family::v4;
  std::uint8_t length_ = 0;
  std::array<std::uint8_t, 16> bytes_{};
};

/// Half-open interval [start, end) of unix seconds.
struct TimeWindow {
  Timestamp start = 0;
  Timestamp end = 0;

  bool contains(Timestamp t) const noexcept { return start <= t && t < end; }
  bool overlaps(const TimeWindow& o) const noexcept {
    return start < o.end && o.start < end;
  }
  Timestamp length() const noexcept { return end - start; }

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

enum class EventKind : std::uint8_t { announcement, withdrawal };

/// One announcement or withdrawal of one prefix as observed at a collector.
struct AnnouncementEvent {
  Timestamp ts = 0;
  std::string collector;
  std::optional<Asn> peer_asn;
  Prefix prefix;
  std::optional<Asn> origin_asn;
  EventKind kind = EventKind::announcement;
  /// The AS-PATH ended in an AS_SET; origin_asn holds its last member but
  /// the event never enters a series.
  bool ambiguous_origin = false;

  friend bool operator==(const AnnouncementEvent&,
                         const AnnouncementEvent&) = default;
};

} // namespace bgpburst

template <>
struct std::hash<bgpburst::Prefix> {
  std::size_t operator()(const bgpburst::Prefix& p) const noexcept {
    std::size_t h = static_cast<std::size_t>(p.family()) * 131 + p.length();
    for (auto b : p.bytes())
      h = h * 1099511628211ULL ^ b;
    return h;
  }
};
