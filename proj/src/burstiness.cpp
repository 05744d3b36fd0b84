#include "bgpburst/burstiness.hpp"

#include <cmath>

#include "bgpburst/error.hpp"
#include "bgpburst/stats.hpp"

namespace bgpburst {

namespace {

struct Moments {
  double mu;
  double sigma;
};

Moments moments(std::span<const double> intervals) {
  if (intervals.empty())
    throw UndefinedStatistic("burstiness of an empty inter-arrival sample");
  Moments m{stats::mean(intervals), stats::population_stddev(intervals)};
  if (!(m.mu + m.sigma > 0))
    throw UndefinedStatistic("burstiness undefined: all inter-arrival "
                             "times are zero");
  return m;
}

} // namespace

InterArrivalSample inter_arrivals(std::span<const Timestamp> timestamps) {
  InterArrivalSample s;
  s.n_events = timestamps.size();
  if (timestamps.size() < 2)
    return s;
  s.intervals.reserve(timestamps.size() - 1);
  for (std::size_t i = 1; i < timestamps.size(); ++i)
    s.intervals.push_back(static_cast<double>(timestamps[i] - timestamps[i - 1]));
  return s;
}

double burstiness_raw(std::span<const double> intervals) {
  auto [mu, sigma] = moments(intervals);
  return (sigma - mu) / (sigma + mu);
}

double finite_size_burstiness(double b, std::size_t n_events) {
  if (n_events < 2)
    throw InsufficientData("finite-size burstiness needs at least 2 events");
  auto n = static_cast<double>(n_events);
  auto up = std::sqrt(n + 1);
  auto down = std::sqrt(n - 1);
  return (up - down + (up + down) * b) / (up + down - 2 + (up - down - 2) * b);
}

double burstiness_corrected(const InterArrivalSample& sample,
                            std::size_t min_events) {
  if (sample.n_events < min_events || sample.n_events < 2)
    throw InsufficientData("burstiness needs at least "
                           + std::to_string(min_events) + " events, got "
                           + std::to_string(sample.n_events));
  return finite_size_burstiness(burstiness_raw(sample), sample.n_events);
}

BurstinessResult measure_burstiness(std::span<const Timestamp> timestamps,
                                    std::size_t min_events) {
  auto sample = inter_arrivals(timestamps);
  auto [mu, sigma] = moments(sample.intervals);
  BurstinessResult r;
  r.mu = mu;
  r.sigma = sigma;
  r.b_raw = (sigma - mu) / (sigma + mu);
  r.n_events = sample.n_events;
  if (r.n_events >= min_events && r.n_events >= 2)
    r.b_corrected = finite_size_burstiness(r.b_raw, r.n_events);
  return r;
}

} // namespace bgpburst
