#pragma once

#include <span>
#include <vector>

namespace bgpburst::stats {

double mean(std::span<const double> xs);

/// Standard deviation normalised by the number of values.
double population_stddev(std::span<const double> xs);

/// Quantile with linear interpolation between order statistics
/// (position p * (n - 1)), p in [0, 1]. `sorted` must be ascending and
/// nonempty.
double quantile_sorted(std::span<const double> sorted, double p);

/// Sorts a copy and calls quantile_sorted.
double quantile(std::vector<double> values, double p);

} // namespace bgpburst::stats
