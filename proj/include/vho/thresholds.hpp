#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "vho/geometry.hpp"

namespace vho {

// One-way handover execution times.
struct HandoverLatencies {
    double into_wlan_s = 2.0;
    double out_of_wlan_s = 2.0;
};

// Acceptable probabilities of failed and unnecessary handovers.
struct ToleranceTargets {
    double max_failure_prob = 0.02;
    double max_unnecessary_prob = 0.04;
};

// Dwell-time thresholds; a trigger requires the estimate to reach the larger.
struct ThresholdResult {
    double t1_s = 0.0;
    double t2_s = 0.0;
    double trigger_threshold_s = 0.0;
};

namespace detail {

inline void require_latency(double latency_s) {
    if (!(latency_s > 0.0)) throw std::domain_error("latency must be positive");
}

inline void require_prob_target(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("probability target outside (0, 1)");
}

}  // namespace detail

// Smallest dwell threshold keeping the failure probability at or below
// max_prob: crossings with dwell in [T1, latency) trigger but cannot finish.
// Clamped at 0; +infinity signals a cell no crossing of which outlasts the
// latency, so no threshold can help.
inline double time_threshold_t1(const CellGeometry& cell, double speed_mps,
                                double latency_s, double max_prob) {
    detail::require_cell(cell);
    detail::require_speed(speed_mps);
    detail::require_latency(latency_s);
    detail::require_prob_target(max_prob);
    const double x = speed_mps * latency_s / (2.0 * cell.radius_m);
    if (x > 1.0) return std::numeric_limits<double>::infinity();
    const double a = std::asin(x) - 0.5 * std::numbers::pi * max_prob;
    if (a <= 0.0) return 0.0;
    return (2.0 * cell.radius_m / speed_mps) * std::sin(a);
}

// Same construction against the round-trip latency: dwells in [T2, in+out)
// make the stay too short to be worth entering.
inline double time_threshold_t2(const CellGeometry& cell, double speed_mps,
                                double latency_into_s, double latency_out_s,
                                double max_prob) {
    detail::require_latency(latency_into_s);
    detail::require_latency(latency_out_s);
    return time_threshold_t1(cell, speed_mps, latency_into_s + latency_out_s, max_prob);
}

inline ThresholdResult compute_thresholds(const CellGeometry& cell, double speed_mps,
                                          const HandoverLatencies& latencies,
                                          const ToleranceTargets& targets) {
    ThresholdResult r;
    r.t1_s = time_threshold_t1(cell, speed_mps, latencies.into_wlan_s, targets.max_failure_prob);
    r.t2_s = time_threshold_t2(cell, speed_mps, latencies.into_wlan_s, latencies.out_of_wlan_s,
                               targets.max_unnecessary_prob);
    r.trigger_threshold_s = std::max(r.t1_s, r.t2_s);
    return r;
}

// Probability that a crossing triggers at threshold t1 yet leaves before the
// handover completes: dwell mass on [max(t1, 0), latency).
inline double failure_prob_for_t1(const CellGeometry& cell, double speed_mps,
                                  double latency_s, double t1_s) {
    detail::require_cell(cell);
    detail::require_speed(speed_mps);
    detail::require_latency(latency_s);
    const double x = speed_mps * latency_s / (2.0 * cell.radius_m);
    if (x > 1.0) throw std::domain_error("cell too small for the handover latency");
    if (t1_s >= latency_s) return 0.0;
    const double lo = std::max(t1_s, 0.0);
    return (2.0 / std::numbers::pi) *
           (std::asin(x) - std::asin(speed_mps * lo / (2.0 * cell.radius_m)));
}

// Probability that a crossing triggers at threshold t2 yet leaves before the
// round trip pays off: dwell mass on [max(t2, 0), in+out).
inline double unnecessary_prob_for_t2(const CellGeometry& cell, double speed_mps,
                                      double latency_into_s, double latency_out_s,
                                      double t2_s) {
    detail::require_latency(latency_into_s);
    detail::require_latency(latency_out_s);
    return failure_prob_for_t1(cell, speed_mps, latency_into_s + latency_out_s, t2_s);
}

// Failure probability of a strategy that triggers on every crossing of the
// radius-r1 circle: dwell mass below the latency, 1 when even the diameter
// is too short.
inline double failure_prob_baseline(double speed_mps, double latency_s, double r1_m) {
    detail::require_speed(speed_mps);
    detail::require_latency(latency_s);
    if (!(r1_m > 0.0)) throw std::domain_error("trigger radius must be positive");
    const double x = speed_mps * latency_s / (2.0 * r1_m);
    if (x > 1.0) return 1.0;
    return (2.0 / std::numbers::pi) * std::asin(x);
}

// Unnecessary-handover probability of the same strategy: dwell mass below the
// round-trip latency (cumulative, so it contains the failure mass).
inline double unnecessary_prob_baseline(double speed_mps, double latency_into_s,
                                        double latency_out_s, double r1_m) {
    detail::require_latency(latency_into_s);
    detail::require_latency(latency_out_s);
    return failure_prob_baseline(speed_mps, latency_into_s + latency_out_s, r1_m);
}

}  // namespace vho
