#pragma once

#include <string>
#include <string_view>

#include "bgpburst/types.hpp"

namespace bgpburst {

/// Parses an RFC 3339 date-time ("2014-04-02T18:26:00Z", optional fraction,
/// "Z" or "+hh:mm" offset). Fractions are truncated to whole seconds.
/// Throws ConfigError.
Timestamp parse_rfc3339(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_utc(Timestamp ts);

} // namespace bgpburst
