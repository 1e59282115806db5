#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>

#include "vho/random.hpp"

namespace vho {

// Circular WLAN cell with the access point at its center.
struct CellGeometry {
    double radius_m = 150.0;
};

// Straight constant-speed crossing of the cell. central_angle_rad is the
// folded angle subtended by the chord at the center, always in [0, pi];
// entry_angle_rad locates the entry point on the rim.
struct ChordTrajectory {
    double entry_angle_rad = 0.0;
    double central_angle_rad = 0.0;
    double speed_mps = 1.0;
    double entry_time_s = 0.0;
};

namespace detail {

inline void require_cell(const CellGeometry& cell) {
    if (!(cell.radius_m > 0.0)) throw std::domain_error("cell radius must be positive");
}

inline void require_speed(double speed_mps) {
    if (!(speed_mps > 0.0)) throw std::domain_error("speed must be positive");
}

}  // namespace detail

// Chord length for a central angle in [0, 2*pi]; symmetric around pi.
inline double chord_length(const CellGeometry& cell, double central_angle_rad) {
    detail::require_cell(cell);
    if (central_angle_rad < 0.0 || central_angle_rad > 2.0 * std::numbers::pi)
        throw std::domain_error("central angle outside [0, 2*pi]");
    return 2.0 * cell.radius_m * std::sin(0.5 * central_angle_rad);
}

// Time spent inside the cell.
inline double dwell_time(const CellGeometry& cell, const ChordTrajectory& traj) {
    detail::require_speed(traj.speed_mps);
    return chord_length(cell, traj.central_angle_rad) / traj.speed_mps;
}

// Distance from the access point while traversing the chord. Valid only for
// times within the crossing.
inline double distance_to_ap(const CellGeometry& cell, const ChordTrajectory& traj,
                             double time_s) {
    const double dwell = dwell_time(cell, traj);
    const double slack = 1e-9 * (1.0 + dwell);
    if (time_s < traj.entry_time_s - slack || time_s > traj.entry_time_s + dwell + slack)
        throw std::domain_error("time outside the chord crossing");
    const double half = 0.5 * chord_length(cell, traj.central_angle_rad);
    const double perp2 = std::max(cell.radius_m * cell.radius_m - half * half, 0.0);
    const double along = half - traj.speed_mps * (time_s - traj.entry_time_s);
    return std::sqrt(perp2 + along * along);
}

// Absolute [enter, exit] times during which the trajectory is within
// `radius_m` of the access point; empty when the chord never comes that close.
// The interval is clipped to the crossing itself.
inline std::optional<std::pair<double, double>> radius_crossing(const CellGeometry& cell,
                                                                const ChordTrajectory& traj,
                                                                double radius_m) {
    if (!(radius_m > 0.0)) throw std::domain_error("crossing radius must be positive");
    const double dwell = dwell_time(cell, traj);
    const double half = 0.5 * chord_length(cell, traj.central_angle_rad);
    const double perp2 = std::max(cell.radius_m * cell.radius_m - half * half, 0.0);
    const double reach2 = radius_m * radius_m - perp2;
    if (reach2 <= 0.0) return std::nullopt;  // closest approach stays outside
    const double reach = std::sqrt(reach2);
    const double enter = traj.entry_time_s + (half - reach) / traj.speed_mps;
    const double exit = traj.entry_time_s + (half + reach) / traj.speed_mps;
    const double lo = std::max(enter, traj.entry_time_s);
    const double hi = std::min(exit, traj.entry_time_s + dwell);
    if (!(hi > lo)) return std::nullopt;
    return std::make_pair(lo, hi);
}

// Density of the folded central angle: entry and exit rim angles are
// independent uniforms, so |difference| folded to [0, pi] is uniform and the
// unfolded separation on [0, 2*pi] has the triangular density below.
inline double angle_pdf(double central_angle_rad) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (central_angle_rad < 0.0 || central_angle_rad > two_pi) return 0.0;
    return (1.0 / std::numbers::pi) * (1.0 - central_angle_rad / two_pi);
}

// Dwell-time density over [0, 2R/v): T = (2R/v) sin(theta/2) with theta
// uniform on [0, pi]. The density diverges (integrably) at the right edge.
inline double dwell_time_pdf(const CellGeometry& cell, double speed_mps, double dwell_s) {
    detail::require_cell(cell);
    detail::require_speed(speed_mps);
    const double tmax = 2.0 * cell.radius_m / speed_mps;
    if (dwell_s < 0.0 || dwell_s >= tmax) return 0.0;
    const double d = 4.0 * cell.radius_m * cell.radius_m - speed_mps * speed_mps * dwell_s * dwell_s;
    return 2.0 * speed_mps / (std::numbers::pi * std::sqrt(d));
}

// Dwell-time distribution function; 0 below 0, 1 at and beyond 2R/v.
inline double dwell_time_cdf(const CellGeometry& cell, double speed_mps, double dwell_s) {
    detail::require_cell(cell);
    detail::require_speed(speed_mps);
    if (dwell_s <= 0.0) return 0.0;
    const double x = speed_mps * dwell_s / (2.0 * cell.radius_m);
    if (x >= 1.0) return 1.0;
    return (2.0 / std::numbers::pi) * std::asin(x);
}

// Draws a crossing via the inscribed-angle construction: an entry point
// uniform on the rim and an inward direction uniform over the half-plane give
// a folded central angle uniform on [0, pi].
inline ChordTrajectory sample_chord(RandomStream& rng, const CellGeometry& cell,
                                    double speed_mps, double entry_time_s = 0.0) {
    detail::require_cell(cell);
    detail::require_speed(speed_mps);
    ChordTrajectory traj;
    traj.entry_angle_rad = rng.uniform(0.0, 2.0 * std::numbers::pi);
    traj.central_angle_rad = 2.0 * rng.uniform(0.0, 0.5 * std::numbers::pi);
    traj.speed_mps = speed_mps;
    traj.entry_time_s = entry_time_s;
    return traj;
}

// Draws a crossing from two independent uniform rim points and folds their
// separation into [0, pi]. Distributionally identical to sample_chord.
inline ChordTrajectory sample_chord_endpoints(RandomStream& rng, const CellGeometry& cell,
                                              double speed_mps, double entry_time_s = 0.0) {
    detail::require_cell(cell);
    detail::require_speed(speed_mps);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double entry = rng.uniform(0.0, two_pi);
    const double exit = rng.uniform(0.0, two_pi);
    double sep = std::fabs(entry - exit);
    if (sep > std::numbers::pi) sep = two_pi - sep;
    ChordTrajectory traj;
    traj.entry_angle_rad = entry;
    traj.central_angle_rad = sep;
    traj.speed_mps = speed_mps;
    traj.entry_time_s = entry_time_s;
    return traj;
}

}  // namespace vho
