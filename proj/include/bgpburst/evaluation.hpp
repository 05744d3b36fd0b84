#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bgpburst/detector.hpp"

namespace bgpburst {

/// Detection resolution used for all reported tables: three hours.
inline constexpr Timestamp default_bin_length = 3 * 3600;

enum class IncidentKind { large_scale, interception };

struct IncidentWindow {
  std::string name;
  Asn perpetrator_asn = 0;
  TimeWindow window;
  IncidentKind kind = IncidentKind::large_scale;
  std::string note;
};

using BinSet = std::set<std::size_t>;

/// Study period [t0, t1) split into bins of length m. The last bin may be
/// shorter than m.
struct StudyBounds {
  Timestamp t0 = 0;
  Timestamp t1 = 0;

  std::size_t bin_count(Timestamp m) const;
};

struct Metrics {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

struct BinnedEvaluation {
  StudyBounds bounds;
  Timestamp m = default_bin_length;
  std::size_t n = 0;
  BinSet truth;
  BinSet detected;
  Metrics metrics;
};

struct EvaluationRow {
  std::string incident;
  std::string collector;
  std::string detector;
  BinnedEvaluation evaluation;
};

/// floor((ts - t0) / m) for every timestamp; duplicates collapse.
/// Throws OutOfBounds listing timestamps outside [t0, t1).
BinSet bin_timestamps(std::span<const Timestamp> timestamps,
                      const StudyBounds& bounds, Timestamp m);

/// Bins overlapping `window` by any amount. Throws ConfigError when the
/// window is empty or not inside the study bounds.
BinSet window_bins(const TimeWindow& window, const StudyBounds& bounds,
                   Timestamp m);

/// Confusion counts and precision / recall / F1 over N bins. Undefined
/// ratios stay empty rather than becoming 0.
Metrics score(const BinSet& truth, const BinSet& detected, std::size_t n);

/// One row per detector, ground truth from the incident window.
std::vector<EvaluationRow>
evaluate_incident(const std::map<std::string, AnomalyReport>& reports,
                  const IncidentWindow& incident, const StudyBounds& bounds,
                  Timestamp m = default_bin_length);

/// [min ts, max ts + 1) over all given timestamps.
StudyBounds bounds_of(std::span<const Timestamp> timestamps);

/// Reads a JSON array of {name, asn, start_utc, end_utc, kind[, note]}.
/// Throws ConfigError on invalid entries or overlapping windows.
std::vector<IncidentWindow> parse_incidents(std::string_view json_text);
std::vector<IncidentWindow> load_incidents(const std::filesystem::path& path);

/// `incident,collector,detector,precision,recall,f1,tp,fp,fn,tn`; undefined
/// metrics are written as `null`.
void write_results_csv(std::ostream& out, std::span<const EvaluationRow> rows);

} // namespace bgpburst
