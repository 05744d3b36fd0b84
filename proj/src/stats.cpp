#include "bgpburst/stats.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bgpburst::stats {

double mean(std::span<const double> xs) {
  if (xs.empty())
    throw std::invalid_argument("mean of empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0)
         / static_cast<double>(xs.size());
}

double population_stddev(std::span<const double> xs) {
  auto mu = mean(xs);
  double ss = 0;
  for (auto x : xs)
    ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty())
    throw std::invalid_argument("quantile of empty sample");
  assert(std::is_sorted(sorted.begin(), sorted.end()));
  p = std::clamp(p, 0.0, 1.0);
  auto pos = p * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  auto hi = std::min(lo + 1, sorted.size() - 1);
  auto frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, p);
}

} // namespace bgpburst::stats
