#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "bgpburst/error.hpp"
#include "bgpburst/ingest/series.hpp"

namespace bgpburst {

struct DetectorConfig {
  /// Decay factor of the intensity, 1/s. 1/300 gives a 300 s half-life.
  double r = 1.0 / 300.0;
  /// EMA window length in events.
  std::size_t omega = 200;
  /// Band width in standard deviations.
  double delta = 2.0;
  /// Processed events whose flags are suppressed.
  std::size_t warmup = 0;
  /// Lower bound applied to the predictor's standard deviation in the band
  /// test only. 0 reproduces the unmodified criterion.
  double variance_floor = 1e-9;
  /// Minimum announcements for burstiness statistics.
  std::size_t min_events = 5;
  std::size_t min_series_len = 2;

  /// EMA weighting decrease a = 2 / (1 + omega).
  double weight() const noexcept {
    return 2.0 / (1.0 + static_cast<double>(omega));
  }

  /// Throws ConfigError.
  void validate() const;

  /// Defaults with the variance floor disabled.
  static DetectorConfig unfloored() {
    DetectorConfig c;
    c.variance_floor = 0;
    return c;
  }
};

/// Q' = 1 + 2^(-r * (new_ts - last_ts)) * Q. Throws OutOfOrder when
/// new_ts < last_ts.
double intensity_update(double q, Timestamp last_ts, Timestamp new_ts,
                        double r);

struct EmaStep {
  double mean = 0;
  double var = 0;
  double sigma = 0;
};

/// One step of the exponentially weighted mean and variance. The variance
/// uses the residual against the mean *before* this step.
inline EmaStep ema_update(double mean, double var, double y, double a) {
  auto residual = y - mean;
  EmaStep s;
  s.mean = a * y + (1 - a) * mean;
  s.var = (1 - a) * (var + a * residual * residual);
  s.sigma = std::sqrt(s.var);
  return s;
}

/// A streaming one-step predictor: consumes an observation and then exposes
/// its current mean and standard deviation estimate.
template <class P>
concept Predictor = requires(P p, const P cp, double y) {
  p.update(y);
  { cp.mean() } -> std::convertible_to<double>;
  { cp.stddev() } -> std::convertible_to<double>;
};

class EmaPredictor {
public:
  explicit EmaPredictor(double a) : a_(a) {}

  void update(double y) {
    auto s = ema_update(mean_, var_, y, a_);
    mean_ = s.mean;
    var_ = s.var;
  }

  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return var_; }
  double stddev() const noexcept { return std::sqrt(var_); }
  double weight() const noexcept { return a_; }

private:
  double a_;
  double mean_ = 0;
  double var_ = 0;
};

static_assert(Predictor<EmaPredictor>);

/// Snapshot of the streaming state of one series.
struct IntensityState {
  double q = 0;
  Timestamp last_ts = 0;
  double ema_mean = 0;
  double ema_var = 0;
  std::size_t events_seen = 0;
};

struct TracePoint {
  Timestamp ts = 0;
  double value = 0; ///< Q for the intensity detector, count for volume
  double psi = 0;
  double sigma = 0;
  bool flag = false;
};

inline bool above_band(double value, double mean, double sigma,
                       const DetectorConfig& c) noexcept {
  return value >= mean + c.delta * std::max(sigma, c.variance_floor);
}

/// Streaming event detector for one (AS, collector) series. The first event
/// only seeds the clock; every later event updates Q, feeds Q to the
/// predictor and is flagged when Q >= mean + delta * std of the predictor
/// after that update.
template <Predictor P = EmaPredictor>
class IntensityDetector {
public:
  explicit IntensityDetector(const DetectorConfig& config)
    requires std::same_as<P, EmaPredictor>
    : config_(config), predictor_(config.weight()) {}

  IntensityDetector(const DetectorConfig& config, P predictor)
    : config_(config), predictor_(std::move(predictor)) {}

  TracePoint push(Timestamp ts) {
    if (seen_ == 0) {
      last_ts_ = ts;
      ++seen_;
      return {ts, q_, 0, 0, false};
    }
    q_ = intensity_update(q_, last_ts_, ts, config_.r);
    last_ts_ = ts;
    predictor_.update(q_);
    TracePoint p{ts, q_, predictor_.mean(), predictor_.stddev(), false};
    p.flag = seen_ > config_.warmup
             && above_band(q_, p.psi, p.sigma, config_);
    ++seen_;
    return p;
  }

  double intensity() const noexcept { return q_; }
  std::size_t events_seen() const noexcept { return seen_; }
  const P& predictor() const noexcept { return predictor_; }

  IntensityState state() const
    requires std::same_as<P, EmaPredictor>
  {
    return {q_, last_ts_, predictor_.mean(), predictor_.variance(), seen_};
  }

private:
  DetectorConfig config_;
  P predictor_;
  double q_ = 0;
  Timestamp last_ts_ = 0;
  std::size_t seen_ = 0;
};

enum class DetectorKind { intensity, volume };

std::string to_string(DetectorKind kind);

struct AnomalyReport {
  Asn asn = 0;
  std::string collector;
  DetectorKind detector = DetectorKind::intensity;
  /// Sorted, distinct.
  std::vector<Timestamp> anomalous;
  std::vector<TracePoint> trace;
};

template <Predictor P>
AnomalyReport detect_events_with(const EventSeries& series,
                                 const DetectorConfig& config, P predictor,
                                 bool keep_trace = false) {
  AnomalyReport report{series.origin_asn, series.collector,
                       DetectorKind::intensity, {}, {}};
  if (series.size() < std::max<std::size_t>(config.min_series_len, 2))
    return report;
  IntensityDetector<P> detector{config, std::move(predictor)};
  if (keep_trace)
    report.trace.reserve(series.size());
  for (auto ts : series.timestamps) {
    auto p = detector.push(ts);
    if (p.flag && (report.anomalous.empty() || report.anomalous.back() != ts))
      report.anomalous.push_back(ts);
    if (keep_trace)
      report.trace.push_back(p);
  }
  return report;
}

/// Flags announcement timestamps whose intensity rises above the EMA band.
AnomalyReport detect_events(const EventSeries& series,
                            const DetectorConfig& config,
                            bool keep_trace = false);

/// The same band criterion applied to per-second unique-prefix counts.
/// Every point, including the first, is an observation.
AnomalyReport detect_volume(const VolumeSeries& volume,
                            const DetectorConfig& config,
                            bool keep_trace = false);

/// `ts,q,psi,sigma,flag` (the second column is `count` for volume traces).
void write_trace_csv(std::ostream& out, const AnomalyReport& report);

void write_report_json(std::ostream& out,
                       const std::vector<AnomalyReport>& reports,
                       const DetectorConfig& config);

} // namespace bgpburst
