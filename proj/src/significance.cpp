#include "bgpburst/significance.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "bgpburst/error.hpp"
#include "bgpburst/stats.hpp"

namespace bgpburst {

BoxSummary box_summary(std::span<const double> samples) {
  std::vector<double> s{samples.begin(), samples.end()};
  std::sort(s.begin(), s.end());
  BoxSummary b;
  b.q1 = stats::quantile_sorted(s, 0.25);
  b.median = stats::quantile_sorted(s, 0.5);
  b.q3 = stats::quantile_sorted(s, 0.75);
  auto iqr = b.q3 - b.q1;
  auto lo_fence = b.q1 - 1.5 * iqr;
  auto hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = *std::lower_bound(s.begin(), s.end(), lo_fence);
  b.whisker_high = *std::prev(std::upper_bound(s.begin(), s.end(), hi_fence));
  auto half = 1.57 * iqr / std::sqrt(static_cast<double>(s.size()));
  b.notch_low = b.median - half;
  b.notch_high = b.median + half;
  return b;
}

SignificanceResult test_against_null(double observed,
                                     std::vector<double> null_samples,
                                     const SignificanceOptions& options) {
  if (null_samples.size() < options.min_null || null_samples.empty())
    throw InsufficientNullData("need at least "
                               + std::to_string(options.min_null)
                               + " usable null windows, got "
                               + std::to_string(null_samples.size()));
  SignificanceResult r;
  r.observed_b = observed;
  r.null_samples = std::move(null_samples);

  auto k = static_cast<double>(r.null_samples.size());
  auto at_least = std::count_if(r.null_samples.begin(), r.null_samples.end(),
                                [&](double x) { return x >= observed; });
  auto at_most = std::count_if(r.null_samples.begin(), r.null_samples.end(),
                               [&](double x) { return x <= observed; });
  auto upper_p = (1.0 + static_cast<double>(at_least)) / (1.0 + k);
  auto lower_p = (1.0 + static_cast<double>(at_most)) / (1.0 + k);
  r.tail = upper_p <= lower_p ? Tail::upper : Tail::lower;
  r.empirical_p = std::min(upper_p, lower_p);

  std::vector<double> sorted = r.null_samples;
  std::sort(sorted.begin(), sorted.end());
  r.band_low = stats::quantile_sorted(sorted, options.alpha / 2);
  r.band_high = stats::quantile_sorted(sorted, 1 - options.alpha / 2);
  r.significant = observed < r.band_low || observed > r.band_high;
  r.box = box_summary(sorted);
  return r;
}

SignificanceResult monte_carlo_null_test(std::span<const EventSeries> null_windows,
                                         const BurstinessResult& observed,
                                         const SignificanceOptions& options) {
  if (!observed.b_corrected)
    throw InsufficientData("observed window has "
                           + std::to_string(observed.n_events)
                           + " events, fewer than "
                           + std::to_string(options.min_events));
  std::vector<double> null;
  std::size_t skipped = 0;
  for (const auto& w : null_windows) {
    if (null.size() == options.samples)
      break;
    try {
      null.push_back(burstiness_corrected(inter_arrivals(w),
                                          options.min_events));
    } catch (const InsufficientData&) {
      ++skipped;
    } catch (const UndefinedStatistic&) {
      ++skipped;
    }
  }
  auto r = test_against_null(*observed.b_corrected, std::move(null), options);
  r.skipped_windows = skipped;
  return r;
}

void validate_null_windows(std::span<const TimeWindow> null_windows,
                           std::span<const TimeWindow> incidents) {
  for (const auto& w : null_windows) {
    if (!(w.start < w.end))
      throw ConfigError("null window [" + std::to_string(w.start) + ", "
                        + std::to_string(w.end) + ") is empty");
    for (const auto& inc : incidents)
      if (w.overlaps(inc))
        throw ConfigError("null window [" + std::to_string(w.start) + ", "
                          + std::to_string(w.end)
                          + ") overlaps incident window ["
                          + std::to_string(inc.start) + ", "
                          + std::to_string(inc.end) + ")");
  }
}

void write_significance_json(std::ostream& out, Asn asn,
                             const SignificanceResult& r) {
  nlohmann::ordered_json j;
  j["asn"] = asn;
  j["observed_b"] = r.observed_b;
  j["null_samples"] = r.null_samples;
  j["empirical_p"] = r.empirical_p;
  j["tail"] = r.tail == Tail::upper ? "upper" : "lower";
  j["band"] = {r.band_low, r.band_high};
  j["significant"] = r.significant;
  j["skipped_windows"] = r.skipped_windows;
  j["box"] = {{"q1", r.box.q1},
              {"median", r.box.median},
              {"q3", r.box.q3},
              {"whisker_low", r.box.whisker_low},
              {"whisker_high", r.box.whisker_high},
              {"notch_low", r.box.notch_low},
              {"notch_high", r.box.notch_high}};
  out << j.dump(2) << '\n';
}

} // namespace bgpburst
