#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "bgpburst/burstiness.hpp"

namespace bgpburst {

struct SignificanceOptions {
  std::size_t samples = 100;     ///< K, null windows used at most
  double alpha = 0.05;           ///< two-sided level
  std::size_t min_null = 20;     ///< usable null windows required
  std::size_t min_events = default_min_events;
};

/// Summary of the null distribution as drawn in a notched box plot.
struct BoxSummary {
  double q1 = 0, median = 0, q3 = 0;
  double whisker_low = 0, whisker_high = 0; ///< furthest data within 1.5 IQR
  double notch_low = 0, notch_high = 0;     ///< median -+ 1.57 IQR / sqrt(n)
};

enum class Tail { upper, lower };

struct SignificanceResult {
  double observed_b = 0;
  std::vector<double> null_samples;
  /// (1 + #{null on the observed side}) / (1 + K) for the tail the
  /// observation lies in. Never 0, never above 1.
  double empirical_p = 1;
  Tail tail = Tail::upper;
  /// Central 1 - alpha band of the null samples.
  double band_low = 0, band_high = 0;
  bool significant = false;
  std::size_t skipped_windows = 0;
  BoxSummary box;
};

BoxSummary box_summary(std::span<const double> samples);

/// Rank test of `observed` against an already computed null sample.
/// Throws InsufficientNullData when fewer than options.min_null samples.
SignificanceResult test_against_null(double observed,
                                     std::vector<double> null_samples,
                                     const SignificanceOptions& options = {});

/// Computes corrected burstiness of each null window (skipping windows with
/// too few events or undefined B), keeps the first K usable ones and tests
/// `observed.b_corrected` against them.
/// Throws InsufficientData when the observation has no corrected
/// burstiness, InsufficientNullData when too few windows are usable.
SignificanceResult monte_carlo_null_test(std::span<const EventSeries> null_windows,
                                         const BurstinessResult& observed,
                                         const SignificanceOptions& options
                                         = {});

/// Null windows must not overlap any incident. Throws ConfigError naming the
/// first offending pair.
void validate_null_windows(std::span<const TimeWindow> null_windows,
                           std::span<const TimeWindow> incidents);

void write_significance_json(std::ostream& out, Asn asn,
                             const SignificanceResult& result);

} // namespace bgpburst
