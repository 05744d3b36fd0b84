#include "bgpburst/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <type_traits>

#include <json.hpp>

#include "bgpburst/error.hpp"

namespace bgpburst::synth {

void GeneratorSpec::validate() const {
  if (!(mean_gap > 0))
    throw ConfigError("mean_gap must be positive");
  if (n_events < 1)
    throw ConfigError("n_events must be at least 1");
  if (process == Process::pareto && !(pareto_alpha > 1))
    throw ConfigError("pareto_alpha must exceed 1");
  if (start_ts < 0)
    throw ConfigError("start_ts must be nonnegative");
  if (prefix_pool < 1 || prefix_pool > 0x8000)
    throw ConfigError("prefix_pool must be in [1, 32768]");
}

void IncidentSpec::validate() const {
  if (!(start < end))
    throw ConfigError("incident start must precede end");
  if (!(burst_gap > 0))
    throw ConfigError("burst_gap must be positive");
  if (prefixes_per_second < 1 || prefixes_per_second > 0x8000)
    throw ConfigError("prefixes_per_second must be in [1, 32768]");
}

double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>((bits >> 11) + 1) * 0x1p-53;
}

Prefix synthetic_prefix(Asn asn, std::uint16_t index) {
  std::uint8_t b[16] = {0x20, 0x01, 0x0d, 0xb8,
                        std::uint8_t(asn >> 24), std::uint8_t(asn >> 16),
                        std::uint8_t(asn >> 8), std::uint8_t(asn),
                        std::uint8_t(index >> 8), std::uint8_t(index)};
  return Prefix::from_bytes(Family::v6, b, 16, 80);
}

Stream generate_stream(const GeneratorSpec& spec) {
  spec.validate();
  std::mt19937_64 gen{spec.seed};
  auto draw_gap = [&] {
    switch (spec.process) {
      case Process::regular:
        return spec.mean_gap;
      case Process::poisson:
        return -spec.mean_gap * std::log(unit_interval(gen()));
      case Process::pareto: {
        auto scale = spec.mean_gap * (spec.pareto_alpha - 1) / spec.pareto_alpha;
        return scale * std::pow(unit_interval(gen()), -1.0 / spec.pareto_alpha);
      }
    }
    return spec.mean_gap;
  };

  Stream s;
  s.series = {spec.asn, spec.collector, {}};
  s.series.timestamps.reserve(spec.n_events);
  s.events.reserve(spec.n_events);
  double elapsed = 0;
  for (std::size_t i = 0; i < spec.n_events; ++i) {
    if (i > 0)
      elapsed += draw_gap();
    auto ts = spec.start_ts + static_cast<Timestamp>(std::llround(elapsed));
    std::uint16_t index = 0;
    if (spec.prefix_pool > 1)
      index = static_cast<std::uint16_t>(gen() % spec.prefix_pool);
    s.series.timestamps.push_back(ts);
    s.events.push_back({ts, spec.collector, std::nullopt,
                        synthetic_prefix(spec.asn, index), spec.asn,
                        EventKind::announcement, false});
  }
  return s;
}

namespace {

std::vector<Timestamp> burst_instants(const IncidentSpec& incident) {
  std::vector<Timestamp> out;
  for (std::size_t k = 0;; ++k) {
    auto ts = incident.start
              + static_cast<Timestamp>(std::llround(double(k) * incident.burst_gap));
    if (ts >= incident.end)
      break;
    out.push_back(ts);
  }
  return out;
}

void check_within(const IncidentSpec& incident, Timestamp first,
                  Timestamp last) {
  incident.validate();
  if (incident.start < first || incident.end > last + 1)
    throw ConfigError("incident [" + std::to_string(incident.start) + ", "
                      + std::to_string(incident.end)
                      + ") is not inside the background span ["
                      + std::to_string(first) + ", " + std::to_string(last + 1)
                      + ")");
}

} // namespace

std::vector<AnnouncementEvent> incident_events(const IncidentSpec& incident,
                                               Asn asn,
                                               const std::string& collector) {
  incident.validate();
  std::vector<AnnouncementEvent> out;
  for (auto ts : burst_instants(incident))
    for (std::size_t j = 0; j < incident.prefixes_per_second; ++j)
      out.push_back({ts, collector, std::nullopt,
                     synthetic_prefix(asn, static_cast<std::uint16_t>(0x8000 + j)),
                     asn, EventKind::announcement, false});
  return out;
}

std::vector<AnnouncementEvent>
inject_incident(std::span<const AnnouncementEvent> background,
                const IncidentSpec& incident, Asn asn,
                const std::string& collector) {
  if (background.empty())
    throw ConfigError("cannot inject an incident into an empty background");
  auto [lo, hi] = std::minmax_element(
    background.begin(), background.end(),
    [](const auto& a, const auto& b) { return a.ts < b.ts; });
  check_within(incident, lo->ts, hi->ts);
  std::vector<AnnouncementEvent> out{background.begin(), background.end()};
  auto extra = incident_events(incident, asn, collector);
  out.insert(out.end(), std::make_move_iterator(extra.begin()),
             std::make_move_iterator(extra.end()));
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.ts < b.ts; });
  return out;
}

EventSeries inject_incident(const EventSeries& background,
                            const IncidentSpec& incident) {
  if (background.empty())
    throw ConfigError("cannot inject an incident into an empty background");
  check_within(incident, background.timestamps.front(),
               background.timestamps.back());
  EventSeries out = background;
  for (auto ts : burst_instants(incident))
    out.timestamps.insert(out.timestamps.end(), incident.prefixes_per_second,
                          ts);
  std::sort(out.timestamps.begin(), out.timestamps.end());
  return out;
}

namespace {

using json = nlohmann::json;

template <class T>
T field(const json& j, const char* key, const std::string& where, T fallback) {
  if (!j.contains(key))
    return fallback;
  const auto& v = j.at(key);
  if constexpr (std::is_unsigned_v<T>) {
    if (!v.is_number_unsigned())
      throw ConfigError(where + "field '" + key
                        + "' must be a nonnegative integer");
  }
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "field '" + key + "' has the wrong type");
  }
}

Simulation parse_one(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("stream"))
    throw ConfigError(where + "missing field 'stream'");
  const auto& s = j["stream"];
  auto sw = where + "stream: ";
  Simulation sim;
  auto& g = sim.stream;
  auto process = field<std::string>(s, "process", sw, "poisson");
  if (process == "regular")
    g.process = Process::regular;
  else if (process == "poisson")
    g.process = Process::poisson;
  else if (process == "pareto")
    g.process = Process::pareto;
  else
    throw ConfigError(sw + "field 'process' must be regular, poisson or pareto");
  g.mean_gap = field(s, "mean_gap", sw, g.mean_gap);
  g.pareto_alpha = field(s, "pareto_alpha", sw, g.pareto_alpha);
  g.n_events = field(s, "n_events", sw, g.n_events);
  g.start_ts = field(s, "start_ts", sw, g.start_ts);
  g.asn = field(s, "asn", sw, g.asn);
  g.collector = field(s, "collector", sw, g.collector);
  g.seed = field(s, "seed", sw, g.seed);
  g.prefix_pool = field(s, "prefix_pool", sw, g.prefix_pool);
  try {
    g.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(sw + e.what());
  }
  if (j.contains("incidents")) {
    std::size_t i = 0;
    for (const auto& inc : j["incidents"]) {
      auto iw = where + "incidents[" + std::to_string(i++) + "]: ";
      IncidentSpec spec;
      for (const char* key : {"start", "end"})
        if (!inc.contains(key))
          throw ConfigError(iw + "missing field '" + key + "'");
      spec.start = field<Timestamp>(inc, "start", iw, 0);
      spec.end = field<Timestamp>(inc, "end", iw, 0);
      spec.burst_gap = field(inc, "burst_gap", iw, spec.burst_gap);
      spec.prefixes_per_second
        = field(inc, "prefixes_per_second", iw, spec.prefixes_per_second);
      try {
        spec.validate();
      } catch (const ConfigError& e) {
        throw ConfigError(iw + e.what());
      }
      sim.incidents.push_back(spec);
    }
  }
  return sim;
}

} // namespace

std::vector<Simulation> parse_simulations(std::string_view json_text) {
  auto j = json::parse(json_text, nullptr, false);
  if (j.is_discarded())
    throw ConfigError("simulation spec is not valid JSON");
  std::vector<Simulation> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(parse_one(j[i], "simulation #" + std::to_string(i) + ": "));
  } else {
    out.push_back(parse_one(j, ""));
  }
  return out;
}

std::vector<AnnouncementEvent> run(const Simulation& simulation) {
  auto events = generate_stream(simulation.stream).events;
  for (const auto& inc : simulation.incidents)
    events = inject_incident(events, inc, simulation.stream.asn,
                             simulation.stream.collector);
  return events;
}

} // namespace bgpburst::synth
