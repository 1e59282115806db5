#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "vho/random.hpp"

namespace vho {

// Log-distance path loss with lognormal shadowing, all terms in dB/dBm.
struct RadioModel {
    double tx_power_dbm = 20.0;
    double ref_distance_m = 1.0;
    double ref_path_loss_db = 40.0;
    double path_loss_exponent = 3.5;
    double shadow_sigma_db = 4.3;
};

// Timestamped received signal strength.
struct RssSample {
    double time_s = 0.0;
    double rss_dbm = 0.0;
};

namespace detail {

inline void require_radio(const RadioModel& m) {
    if (!(m.ref_distance_m > 0.0)) throw std::domain_error("reference distance must be positive");
    if (!(m.path_loss_exponent > 0.0)) throw std::domain_error("path loss exponent must be positive");
    if (m.shadow_sigma_db < 0.0) throw std::domain_error("shadow sigma must be non-negative");
}

}  // namespace detail

// Shadow-free mean RSS at a distance at or beyond the reference distance.
inline double mean_rss(const RadioModel& model, double distance_m) {
    detail::require_radio(model);
    if (!(distance_m >= model.ref_distance_m))
        throw std::domain_error("distance below the reference distance");
    const double et = model.tx_power_dbm - model.ref_path_loss_db;
    return et - 10.0 * model.path_loss_exponent * std::log10(distance_m / model.ref_distance_m);
}

// Mean RSS plus one shadowing deviate. Consumes no draws when sigma is zero,
// so noise-free configs stay stream-compatible with noisy ones.
inline double sample_rss(const RadioModel& model, double distance_m, RandomStream& rng) {
    const double mean = mean_rss(model, distance_m);
    if (model.shadow_sigma_db == 0.0) return mean;
    return mean + rng.normal(model.shadow_sigma_db);
}

// Inverts the mean path-loss curve; shadowing makes this lognormally
// distributed around the true distance.
inline double estimate_distance(const RadioModel& model, double rss_dbm) {
    detail::require_radio(model);
    const double et = model.tx_power_dbm - model.ref_path_loss_db;
    return model.ref_distance_m *
           std::pow(10.0, (et - rss_dbm) / (10.0 * model.path_loss_exponent));
}

// RSS level whose mean curve crosses exactly at the given radius.
inline double radius_to_threshold(const RadioModel& model, double radius_m) {
    return mean_rss(model, radius_m);
}

// Radius at which the mean curve crosses the given RSS level.
inline double threshold_to_radius(const RadioModel& model, double threshold_dbm) {
    return estimate_distance(model, threshold_dbm);
}

// Plain dB-domain average of a sample window.
inline double mean_rss_dbm(std::span<const RssSample> samples) {
    if (samples.empty()) throw std::domain_error("cannot average an empty window");
    double sum = 0.0;
    for (const auto& s : samples) sum += s.rss_dbm;
    return sum / static_cast<double>(samples.size());
}

}  // namespace vho
