#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bgpburst/ingest/series.hpp"

namespace bgpburst::synth {

enum class Process { regular, poisson, pareto };

struct GeneratorSpec {
  Process process = Process::poisson;
  double mean_gap = 300;     ///< seconds
  double pareto_alpha = 1.5; ///< shape, > 1
  std::size_t n_events = 1000;
  Timestamp start_ts = 0;
  Asn asn = 64512;
  std::string collector = "synthetic";
  std::uint64_t seed = 1;
  /// Background announcements pick uniformly among this many prefixes of
  /// the AS.
  std::size_t prefix_pool = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct IncidentSpec {
  Timestamp start = 0;
  Timestamp end = 0;
  double burst_gap = 1;               ///< seconds between burst instants
  std::size_t prefixes_per_second = 1; ///< distinct prefixes per instant

  void validate() const;
};

struct Stream {
  EventSeries series;
  std::vector<AnnouncementEvent> events; ///< sorted by timestamp
};

/// Uniform double in (0, 1] from the top 53 bits of a 64-bit draw.
double unit_interval(std::uint64_t bits) noexcept;

/// Prefix `index` of an AS: 2001:db8:<asn>:<index>::/80.
Prefix synthetic_prefix(Asn asn, std::uint16_t index);

/// Continuous gaps are accumulated and each arrival is rounded to the
/// nearest second, so ties occur. Deterministic for a fixed spec.
Stream generate_stream(const GeneratorSpec& spec);

/// Announcements of one incident: at each burst instant in [start, end),
/// `prefixes_per_second` distinct prefixes (indices from 0x8000).
std::vector<AnnouncementEvent> incident_events(const IncidentSpec& incident,
                                               Asn asn,
                                               const std::string& collector);

/// Merges the incident into the background. Throws ConfigError when the
/// incident is invalid or not inside the background span.
std::vector<AnnouncementEvent>
inject_incident(std::span<const AnnouncementEvent> background,
                const IncidentSpec& incident, Asn asn,
                const std::string& collector);

EventSeries inject_incident(const EventSeries& background,
                            const IncidentSpec& incident);

/// A simulation file: {"stream": {...}, "incidents": [{...}, ...]} or an
/// array of such objects.
struct Simulation {
  GeneratorSpec stream;
  std::vector<IncidentSpec> incidents;
};

/// Throws ConfigError naming the offending field.
std::vector<Simulation> parse_simulations(std::string_view json_text);

/// Generated stream with every incident injected.
std::vector<AnnouncementEvent> run(const Simulation& simulation);

} // namespace bgpburst::synth
