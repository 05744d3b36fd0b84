#include "bgpburst/ingest/event_lines.hpp"

#include <istream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "bgpburst/error.hpp"

namespace bgpburst::ingest {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what, line_no);
}

Asn read_asn(const json& j, const char* key, std::size_t line_no) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()
      || v.get<std::uint64_t>() > std::numeric_limits<Asn>::max())
    fail(line_no, std::string{"field '"} + key + "' is not a valid ASN");
  return v.get<Asn>();
}

} // namespace

std::string to_event_line(const AnnouncementEvent& event) {
  nlohmann::ordered_json j;
  j["ts"] = event.ts;
  j["collector"] = event.collector;
  if (event.peer_asn)
    j["peer_asn"] = *event.peer_asn;
  j["prefix"] = event.prefix.to_string();
  if (event.origin_asn)
    j["origin_asn"] = *event.origin_asn;
  if (event.ambiguous_origin)
    j["origin_as_set"] = true;
  j["type"] = event.kind == EventKind::announcement ? "A" : "W";
  return j.dump();
}

void write_event_lines(std::ostream& out,
                       std::span<const AnnouncementEvent> events) {
  for (const auto& e : events)
    out << to_event_line(e) << '\n';
}

AnnouncementEvent parse_event_line(std::string_view line,
                                   std::size_t line_no) {
  auto j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    fail(line_no, "not a JSON object");
  for (const char* key : {"ts", "collector", "prefix", "type"})
    if (!j.contains(key))
      fail(line_no, std::string{"missing required field '"} + key + "'");

  AnnouncementEvent e;
  if (!j["ts"].is_number_integer() || j["ts"].get<std::int64_t>() < 0)
    fail(line_no, "field 'ts' must be a nonnegative integer");
  e.ts = j["ts"].get<Timestamp>();
  if (!j["collector"].is_string())
    fail(line_no, "field 'collector' must be a string");
  e.collector = j["collector"].get<std::string>();
  if (!j["prefix"].is_string())
    fail(line_no, "field 'prefix' must be a string");
  try {
    e.prefix = Prefix::parse(j["prefix"].get<std::string>());
  } catch (const std::invalid_argument& ex) {
    fail(line_no, ex.what());
  }
  auto type = j["type"].is_string() ? j["type"].get<std::string>() : "";
  if (type == "A")
    e.kind = EventKind::announcement;
  else if (type == "W")
    e.kind = EventKind::withdrawal;
  else
    fail(line_no, "field 'type' must be \"A\" or \"W\"");
  if (j.contains("peer_asn"))
    e.peer_asn = read_asn(j, "peer_asn", line_no);
  if (j.contains("origin_asn"))
    e.origin_asn = read_asn(j, "origin_asn", line_no);
  else if (e.kind == EventKind::announcement)
    fail(line_no, "missing required field 'origin_asn' for an announcement");
  if (j.contains("origin_as_set"))
    e.ambiguous_origin = j["origin_as_set"].is_boolean()
                         && j["origin_as_set"].get<bool>();
  return e;
}

std::vector<AnnouncementEvent> parse_event_lines(std::istream& in) {
  std::vector<AnnouncementEvent> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos)
      continue;
    out.push_back(parse_event_line(line, line_no));
  }
  return out;
}

} // namespace bgpburst::ingest
