#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bgpburst/ingest/series.hpp"

namespace bgpburst {

/// Announcement count below which the finite-size corrected burstiness is
/// not reported.
inline constexpr std::size_t default_min_events = 5;

/// Gaps between consecutive events of one series, in seconds.
struct InterArrivalSample {
  std::vector<double> intervals;
  std::size_t n_events = 0;
};

struct BurstinessResult {
  double mu = 0;    ///< mean inter-arrival time (s)
  double sigma = 0; ///< population standard deviation (s)
  double b_raw = 0;
  std::optional<double> b_corrected;
  std::size_t n_events = 0;
};

InterArrivalSample inter_arrivals(std::span<const Timestamp> timestamps);

inline InterArrivalSample inter_arrivals(const EventSeries& series) {
  return inter_arrivals(series.timestamps);
}

/// B = (sigma - mu) / (sigma + mu). -1 for perfectly regular gaps, 0 for
/// exponential gaps, approaching 1 for highly bursty ones.
/// Throws UndefinedStatistic for an empty sample or all-zero gaps.
double burstiness_raw(std::span<const double> intervals);

inline double burstiness_raw(const InterArrivalSample& sample) {
  return burstiness_raw(sample.intervals);
}

/// Finite-size correction of B for a sequence of `n_events` events. Keeps
/// B = -1 fixed and tends to B as n grows. Requires n_events >= 2.
double finite_size_burstiness(double b, std::size_t n_events);

/// Throws InsufficientData when sample.n_events < min_events and
/// UndefinedStatistic when B itself is undefined.
double burstiness_corrected(const InterArrivalSample& sample,
                            std::size_t min_events = default_min_events);

/// mu, sigma, B and (when n_events >= min_events) B(n) of a series.
BurstinessResult measure_burstiness(std::span<const Timestamp> timestamps,
                                    std::size_t min_events
                                    = default_min_events);

inline BurstinessResult
measure_burstiness(const EventSeries& series,
                   std::size_t min_events = default_min_events) {
  return measure_burstiness(series.timestamps, min_events);
}

} // namespace bgpburst
