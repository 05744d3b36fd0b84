#include "bgpburst/timeutil.hpp"

#include <chrono>
#include <cstdio>
#include <regex>

#include "bgpburst/error.hpp"

namespace bgpburst {

namespace chr = std::chrono;

Timestamp parse_rfc3339(std::string_view text) {
  static const std::regex pattern{
    R"((\d{4})-(\d{2})-(\d{2})[Tt ](\d{2}):(\d{2}):(\d{2})(\.\d+)?([Zz]|[+-]\d{2}:\d{2}))"};
  std::cmatch m;
  if (!std::regex_match(text.data(), text.data() + text.size(), m, pattern))
    throw ConfigError("not an RFC 3339 time: '" + std::string{text} + "'");
  auto num = [&](int i) { return std::stoi(m[i].str()); };
  chr::year_month_day date{chr::year{num(1)}, chr::month{unsigned(num(2))},
                           chr::day{unsigned(num(3))}};
  if (!date.ok() || num(4) > 23 || num(5) > 59 || num(6) > 60)
    throw ConfigError("invalid date-time: '" + std::string{text} + "'");
  auto secs = chr::sys_days{date}.time_since_epoch() / chr::seconds{1}
              + num(4) * 3600 + num(5) * 60 + num(6);
  auto zone = m[8].str();
  if (zone != "Z" && zone != "z") {
    auto offset = std::stoi(zone.substr(1, 2)) * 3600
                  + std::stoi(zone.substr(4, 2)) * 60;
    secs -= zone[0] == '+' ? offset : -offset;
  }
  return secs;
}

std::string format_utc(Timestamp ts) {
  chr::sys_seconds t{chr::seconds{ts}};
  auto day = chr::floor<chr::days>(t);
  chr::year_month_day date{day};
  chr::hh_mm_ss tod{t - day};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ",
                int(date.year()), unsigned(date.month()), unsigned(date.day()),
                long(tod.hours().count()), long(tod.minutes().count()),
                long(tod.seconds().count()));
  return buf;
}

} // namespace bgpburst
