#include "bgpburst/joint.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "bgpburst/error.hpp"
#include "bgpburst/stats.hpp"

namespace bgpburst {

Quadrant classify(double b, double count, double b_threshold,
                  double count_threshold) noexcept {
  bool bursty = b > b_threshold;
  bool busy = count > count_threshold;
  if (busy)
    return bursty ? Quadrant::bursty_high_volume : Quadrant::calm_high_volume;
  return bursty ? Quadrant::bursty_low_volume : Quadrant::calm_low_volume;
}

JointActivityTable joint_distribution(std::span<const EventSeries> corpus,
                                      TimeWindow window,
                                      const JointOptions& options) {
  JointActivityTable table;
  table.window = window;
  table.percentile = options.percentile;
  if (!corpus.empty())
    table.collector = corpus.front().collector;

  std::vector<const EventSeries*> ordered;
  for (const auto& s : corpus) {
    if (s.collector != table.collector)
      throw ConfigError("joint distribution mixes collectors '"
                        + table.collector + "' and '" + s.collector + "'");
    ordered.push_back(&s);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](auto* a, auto* b) { return a->origin_asn < b->origin_asn; });

  for (const auto* s : ordered) {
    auto in_window = ingest::restrict_to(*s, window.start, window.end);
    auto count = in_window.size();
    if (count < options.min_events) {
      table.skipped.push_back({s->origin_asn, count,
                               "fewer than " + std::to_string(options.min_events)
                                 + " announcements"});
      continue;
    }
    try {
      auto b = burstiness_corrected(inter_arrivals(in_window),
                                    options.min_events);
      table.rows.push_back({s->origin_asn, b, count, Quadrant{}});
    } catch (const UndefinedStatistic& e) {
      table.skipped.push_back({s->origin_asn, count, e.what()});
    }
  }
  if (table.rows.size() < 2)
    throw DegenerateTable("joint distribution needs at least 2 qualifying "
                          "ASes, got " + std::to_string(table.rows.size()));

  std::vector<double> bs, counts;
  for (const auto& r : table.rows) {
    bs.push_back(r.b_corrected);
    counts.push_back(static_cast<double>(r.count));
  }
  table.b_threshold = stats::quantile(bs, options.percentile);
  table.count_threshold = stats::quantile(counts, options.percentile);
  for (auto& r : table.rows)
    r.quadrant = classify(r.b_corrected, static_cast<double>(r.count),
                          table.b_threshold, table.count_threshold);
  return table;
}

void write_joint_csv(std::ostream& out, const JointActivityTable& table) {
  out << "asn,b_corrected,count,quadrant\n";
  auto old = out.precision(17);
  for (const auto& r : table.rows)
    out << r.asn << ',' << r.b_corrected << ',' << r.count << ','
        << static_cast<int>(r.quadrant) << '\n';
  out.precision(old);
}

void write_joint_sidecar(std::ostream& out, const JointActivityTable& table) {
  nlohmann::ordered_json j;
  j["collector"] = table.collector;
  j["window"] = {{"start", table.window.start}, {"end", table.window.end}};
  j["percentile"] = table.percentile;
  j["b_threshold"] = table.b_threshold;
  j["count_threshold"] = table.count_threshold;
  j["qualifying"] = table.rows.size();
  auto skipped = nlohmann::ordered_json::array();
  for (const auto& s : table.skipped)
    skipped.push_back({{"asn", s.asn}, {"count", s.count},
                       {"reason", s.reason}});
  j["skipped"] = std::move(skipped);
  out << j.dump(2) << '\n';
}

} // namespace bgpburst
