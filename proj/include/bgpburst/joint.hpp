#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bgpburst/burstiness.hpp"

namespace bgpburst {

/// Quadrants of the (burstiness, count) plane split at the two percentile
/// thresholds. "High" means strictly above the threshold.
enum class Quadrant : int {
  bursty_high_volume = 1, ///< high B, high count
  calm_high_volume = 2,   ///< low B, high count
  calm_low_volume = 3,    ///< low B, low count
  bursty_low_volume = 4,  ///< high B, low count
};

Quadrant classify(double b, double count, double b_threshold,
                  double count_threshold) noexcept;

struct JointRow {
  Asn asn = 0;
  double b_corrected = 0;
  std::size_t count = 0;
  Quadrant quadrant = Quadrant::calm_low_volume;
};

struct SkippedAs {
  Asn asn = 0;
  std::size_t count = 0;
  std::string reason;
};

struct JointActivityTable {
  std::string collector;
  TimeWindow window;
  double percentile = 0.95;
  double b_threshold = 0;
  double count_threshold = 0;
  std::vector<JointRow> rows;      ///< sorted by ASN
  std::vector<SkippedAs> skipped;  ///< sorted by ASN
};

struct JointOptions {
  std::size_t min_events = default_min_events;
  double percentile = 0.95;
};

/// Burstiness and announcement count of every AS at one collector inside
/// `window`. ASes with fewer than `min_events` announcements, or whose
/// burstiness is undefined, are reported in `skipped`. Thresholds are
/// computed over qualifying ASes only.
///
/// Throws ConfigError when the series come from different collectors and
/// DegenerateTable when fewer than two ASes qualify.
JointActivityTable joint_distribution(std::span<const EventSeries> corpus,
                                      TimeWindow window,
                                      const JointOptions& options = {});

/// `asn,b_corrected,count,quadrant`
void write_joint_csv(std::ostream& out, const JointActivityTable& table);

/// Thresholds, window bounds and skipped ASes.
void write_joint_sidecar(std::ostream& out, const JointActivityTable& table);

} // namespace bgpburst
