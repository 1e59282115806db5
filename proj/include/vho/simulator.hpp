#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "vho/decision.hpp"
#include "vho/geometry.hpp"
#include "vho/radio.hpp"
#include "vho/random.hpp"
#include "vho/thresholds.hpp"

namespace vho {

enum class Method { Hne, FixedRss, Hysteresis };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Hne: return "hne";
        case Method::FixedRss: return "fixed_rss";
        case Method::Hysteresis: return "hysteresis";
    }
    throw std::logic_error("unreachable method");
}

inline std::optional<Method> method_from_name(const std::string& name) {
    if (name == "hne") return Method::Hne;
    if (name == "fixed_rss") return Method::FixedRss;
    if (name == "hysteresis") return Method::Hysteresis;
    return std::nullopt;
}

enum class TrialOutcome { NoHandover, Success, Failure, Unnecessary };

// Measurement cadence of the decision strategies.
struct SamplingPolicy {
    double interval_s = 0.1;
    int window_samples = 30;
};

inline std::vector<double> default_speeds_kmh() {
    std::vector<double> speeds;
    for (int i = 0;; ++i) {
        const double v = 3.6 + 2.0 * i;
        if (v > 100.0 + 1e-9) break;
        speeds.push_back(v);
    }
    return speeds;
}

// Full description of one Monte Carlo campaign.
struct SimConfig {
    CellGeometry cell{};
    RadioModel radio{};
    HandoverLatencies latencies{};
    ToleranceTargets targets{};
    SamplingPolicy sampling{};
    std::vector<double> speeds_kmh = default_speeds_kmh();
    int trials_per_speed = 10000;
    std::uint64_t seed = 20260814;
    std::vector<Method> methods{Method::Hne, Method::FixedRss, Method::Hysteresis};
    double fixed_radius_m = 150.0;
    std::optional<double> fixed_rss_dbm;       // derived from the radius when absent
    double hysteresis_radius_m = 120.0;
    std::optional<double> hysteresis_rss_dbm;  // derived from the radius when absent
    std::vector<double> verify_speeds_kmh{10.0, 50.0, 100.0};
    long verify_samples = 100000;
    int threads = 0;  // 0 = hardware concurrency
};

inline double kmh_to_mps(double kmh) { return kmh / 3.6; }

// Trigger level of the fixed-RSS baseline; the geometric radius is the
// fallback parameterization.
inline double fixed_threshold_dbm(const SimConfig& cfg) {
    if (cfg.fixed_rss_dbm) return *cfg.fixed_rss_dbm;
    return radius_to_threshold(cfg.radio, cfg.fixed_radius_m);
}

inline double hysteresis_threshold_dbm(const SimConfig& cfg) {
    if (cfg.hysteresis_rss_dbm) return *cfg.hysteresis_rss_dbm;
    return radius_to_threshold(cfg.radio, cfg.hysteresis_radius_m);
}

// Residual lifetime is measured from the moment the trigger circle is first
// crossed; a triggered handover fails when that lifetime cannot even cover the
// inbound latency, and is unnecessary when it cannot cover the round trip.
inline TrialOutcome classify_outcome(bool triggered, std::optional<double> /*trigger_time_s*/,
                                     double residual_s, const HandoverLatencies& latencies) {
    if (!triggered) return TrialOutcome::NoHandover;
    if (residual_s < 0.0) throw std::logic_error("triggered trial with negative residual");
    if (residual_s < latencies.into_wlan_s) return TrialOutcome::Failure;
    if (residual_s < latencies.into_wlan_s + latencies.out_of_wlan_s)
        return TrialOutcome::Unnecessary;
    return TrialOutcome::Success;
}

// One crossing under one strategy. All methods replay the same chord when
// handed streams derived from the same id, so comparisons are paired.
inline TrialOutcome run_trial(const SimConfig& cfg, Method method, double speed_mps,
                              RandomStream& rng) {
    const ChordTrajectory traj = sample_chord(rng, cfg.cell, speed_mps, 0.0);
    const double dwell = dwell_time(cfg.cell, traj);
    const double dt = cfg.sampling.interval_s;

    DecisionContext ctx;
    ctx.cell = cfg.cell;
    ctx.radio = cfg.radio;
    ctx.latencies = cfg.latencies;
    ctx.targets = cfg.targets;
    ctx.speed_mps = speed_mps;
    ctx.entry_time_s = traj.entry_time_s;

    // measured distances saturate at the path-loss model's validity floor
    const auto ranged = [&](double t) {
        return std::max(distance_to_ap(cfg.cell, traj, t), cfg.radio.ref_distance_m);
    };

    if (method == Method::Hne) {
        const int w = cfg.sampling.window_samples;
        ctx.rss_samples.reserve(static_cast<std::size_t>(w));
        for (int k = 1; k <= w; ++k) {
            const double t = traj.entry_time_s + k * dt;
            if (t > traj.entry_time_s + dwell) break;  // left the cell mid-window
            ctx.rss_samples.push_back({t, sample_rss(cfg.radio, ranged(t), rng)});
        }
        const Decision d = hne_decide(ctx, static_cast<std::size_t>(w));
        const bool triggered = d.verdict == Verdict::Trigger;
        return classify_outcome(triggered, d.trigger_time_s, triggered ? dwell : 0.0,
                                cfg.latencies);
    }

    // Baselines compare the shadow-free measurement stream; shadowing stresses
    // the necessity estimator only.
    const double threshold_dbm =
        method == Method::FixedRss ? fixed_threshold_dbm(cfg) : hysteresis_threshold_dbm(cfg);
    ctx.rss_samples.reserve(static_cast<std::size_t>(dwell / dt) + 1);
    for (int k = 1;; ++k) {
        const double t = traj.entry_time_s + k * dt;
        if (t > traj.entry_time_s + dwell) break;
        ctx.rss_samples.push_back({t, mean_rss(cfg.radio, ranged(t))});
    }
    const Decision d = method == Method::FixedRss ? fixed_rss_decide(ctx, threshold_dbm)
                                                  : hysteresis_decide(ctx, threshold_dbm);
    const bool triggered = d.verdict == Verdict::Trigger;
    double residual = 0.0;
    if (triggered) {
        const double r1 = threshold_to_radius(cfg.radio, threshold_dbm);
        const auto crossing = radius_crossing(cfg.cell, traj, r1);
        residual = crossing ? crossing->second - crossing->first : 0.0;
    }
    return classify_outcome(triggered, d.trigger_time_s, residual, cfg.latencies);
}

// One (speed, method) aggregate of the sweep.
struct SweepCell {
    double speed_kmh = 0.0;
    Method method = Method::Hne;
    long trials = 0;
    long triggers = 0;
    long failures = 0;
    long unnecessary = 0;
    long successes = 0;
    long no_handover = 0;
    double empirical_failure_prob = 0.0;
    double analytic_failure_prob = 0.0;
    double empirical_unnecessary_prob = 0.0;
    double analytic_unnecessary_prob = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> rows;  // speed-major, then config method order
};

namespace detail {

inline void fill_analytic(const SimConfig& cfg, SweepCell& cell) {
    const double v = kmh_to_mps(cell.speed_kmh);
    const double ti = cfg.latencies.into_wlan_s;
    const double to = cfg.latencies.out_of_wlan_s;
    switch (cell.method) {
        case Method::Hne: {
            const ThresholdResult thr = compute_thresholds(cfg.cell, v, cfg.latencies, cfg.targets);
            if (!std::isfinite(thr.trigger_threshold_s)) {
                cell.analytic_failure_prob = 0.0;  // estimator can never trigger
                cell.analytic_unnecessary_prob = 0.0;
                return;
            }
            cell.analytic_failure_prob =
                failure_prob_for_t1(cfg.cell, v, ti, thr.trigger_threshold_s);
            cell.analytic_unnecessary_prob =
                unnecessary_prob_for_t2(cfg.cell, v, ti, to, thr.trigger_threshold_s);
            return;
        }
        case Method::FixedRss: {
            const double r1 = threshold_to_radius(cfg.radio, fixed_threshold_dbm(cfg));
            cell.analytic_failure_prob = failure_prob_baseline(v, ti, r1);
            cell.analytic_unnecessary_prob = unnecessary_prob_baseline(v, ti, to, r1);
            return;
        }
        case Method::Hysteresis: {
            const double r1 = threshold_to_radius(cfg.radio, hysteresis_threshold_dbm(cfg));
            cell.analytic_failure_prob = failure_prob_baseline(v, ti, r1);
            cell.analytic_unnecessary_prob = unnecessary_prob_baseline(v, ti, to, r1);
            return;
        }
    }
}

}  // namespace detail

// Runs trials_per_speed crossings per (speed, method). The draw stream of a
// trial depends only on (seed, speed index * trials + trial index), never on
// the method, thread count, or scheduling, so output is byte-reproducible.
inline SweepResult run_sweep(const SimConfig& cfg) {
    if (cfg.trials_per_speed <= 0) throw std::domain_error("trials per speed must be positive");
    if (cfg.speeds_kmh.empty()) throw std::domain_error("speed grid is empty");
    if (cfg.methods.empty()) throw std::domain_error("no methods selected");

    const std::size_t n_speeds = cfg.speeds_kmh.size();
    const std::size_t n_methods = cfg.methods.size();
    SweepResult result;
    result.rows.assign(n_speeds * n_methods, SweepCell{});

    const auto run_speed = [&](std::size_t si) {
        const double v = kmh_to_mps(cfg.speeds_kmh[si]);
        std::vector<std::array<long, 4>> counts(n_methods, {0, 0, 0, 0});
        for (long trial = 0; trial < cfg.trials_per_speed; ++trial) {
            const std::uint64_t stream =
                static_cast<std::uint64_t>(si) * static_cast<std::uint64_t>(cfg.trials_per_speed) +
                static_cast<std::uint64_t>(trial);
            for (std::size_t mi = 0; mi < n_methods; ++mi) {
                RandomStream rng(cfg.seed, stream);
                const TrialOutcome out = run_trial(cfg, cfg.methods[mi], v, rng);
                ++counts[mi][static_cast<std::size_t>(out)];
            }
        }
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            SweepCell& cell = result.rows[si * n_methods + mi];
            cell.speed_kmh = cfg.speeds_kmh[si];
            cell.method = cfg.methods[mi];
            cell.trials = cfg.trials_per_speed;
            cell.no_handover = counts[mi][static_cast<std::size_t>(TrialOutcome::NoHandover)];
            cell.successes = counts[mi][static_cast<std::size_t>(TrialOutcome::Success)];
            cell.failures = counts[mi][static_cast<std::size_t>(TrialOutcome::Failure)];
            cell.unnecessary = counts[mi][static_cast<std::size_t>(TrialOutcome::Unnecessary)];
            cell.triggers = cell.successes + cell.failures + cell.unnecessary;
            cell.empirical_failure_prob =
                cell.triggers ? static_cast<double>(cell.failures) / cell.triggers : 0.0;
            cell.empirical_unnecessary_prob =
                cell.triggers ? static_cast<double>(cell.unnecessary) / cell.triggers : 0.0;
            detail::fill_analytic(cfg, cell);
        }
    };

    unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_speeds));
    if (n_threads <= 1) {
        for (std::size_t si = 0; si < n_speeds; ++si) run_speed(si);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                try {
                    for (std::size_t si = next.fetch_add(1); si < n_speeds;
                         si = next.fetch_add(1))
                        run_speed(si);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    next.store(n_speeds);  // drain remaining work
                }
            });
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    return result;
}

inline std::string sweep_csv_header() {
    return "speed_kmh,method,trials,triggers,failures,unnecessary,successes,no_handover,"
           "empirical_failure_prob,analytic_failure_prob,empirical_unnecessary_prob,"
           "analytic_unnecessary_prob";
}

inline std::string sweep_csv(const SweepResult& result) {
    std::string out = sweep_csv_header();
    out += '\n';
    char buf[256];
    for (const SweepCell& c : result.rows) {
        std::snprintf(buf, sizeof(buf), "%.6g,%s,%ld,%ld,%ld,%ld,%ld,%ld,%.6f,%.6f,%.6f,%.6f\n",
                      c.speed_kmh, method_name(c.method), c.trials, c.triggers, c.failures,
                      c.unnecessary, c.successes, c.no_handover, c.empirical_failure_prob,
                      c.analytic_failure_prob, c.empirical_unnecessary_prob,
                      c.analytic_unnecessary_prob);
        out += buf;
    }
    return out;
}

// One closed-form check: an instant-trigger Monte Carlo estimate of a dwell
// band against the matching formula, bound at three binomial sigma.
struct VerifyCell {
    std::string label;
    double speed_kmh = 0.0;
    long samples = 0;
    double empirical = 0.0;
    double analytic = 0.0;
    double deviation = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyCell> cells;
    bool all_pass = true;
};

namespace detail {

// Fraction of sampled dwell times falling in [lo, hi) on a circle of radius
// r; lo may be 0 for cumulative bands.
inline double dwell_band_fraction(double radius_m, double speed_mps, double lo_s, double hi_s,
                                  long samples, RandomStream& rng) {
    long hits = 0;
    for (long i = 0; i < samples; ++i) {
        const double theta = 2.0 * rng.uniform(0.0, 0.5 * std::numbers::pi);
        const double dwell = 2.0 * radius_m * std::sin(0.5 * theta) / speed_mps;
        if (dwell >= lo_s && dwell < hi_s) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

inline VerifyCell make_cell(std::string label, double speed_kmh, long samples, double empirical,
                            double analytic) {
    VerifyCell c;
    c.label = std::move(label);
    c.speed_kmh = speed_kmh;
    c.samples = samples;
    c.empirical = empirical;
    c.analytic = analytic;
    c.deviation = std::fabs(empirical - analytic);
    c.bound = 3.0 * std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(samples));
    c.pass = c.deviation <= c.bound || c.deviation == 0.0;
    return c;
}

}  // namespace detail

// Cross-checks every closed form against a fresh instant-trigger Monte Carlo
// at each verify speed. Chord samplers run on the configured geometric radii;
// analytic values derive their radii from the RSS thresholds, so an
// inconsistent radius/threshold pair surfaces as a failed cell.
inline VerifyReport verify_analytic(const SimConfig& cfg) {
    if (cfg.verify_samples < 10000)
        throw std::domain_error("verification needs at least 10000 samples");
    if (cfg.verify_speeds_kmh.empty()) throw std::domain_error("verification speed list is empty");

    const double ti = cfg.latencies.into_wlan_s;
    const double to = cfg.latencies.out_of_wlan_s;
    const double fixed_r_analytic = threshold_to_radius(cfg.radio, fixed_threshold_dbm(cfg));
    const double hyst_r_analytic = threshold_to_radius(cfg.radio, hysteresis_threshold_dbm(cfg));
    constexpr std::uint64_t verify_salt = 0x76686f2d76657279ull;

    VerifyReport report;
    const long n = cfg.verify_samples;
    for (std::size_t si = 0; si < cfg.verify_speeds_kmh.size(); ++si) {
        const double kmh = cfg.verify_speeds_kmh[si];
        const double v = kmh_to_mps(kmh);
        const ThresholdResult thr = compute_thresholds(cfg.cell, v, cfg.latencies, cfg.targets);
        RandomStream rng(cfg.seed ^ verify_salt, si);

        report.cells.push_back(detail::make_cell(
            "hne_failure_at_t1", kmh, n,
            detail::dwell_band_fraction(cfg.cell.radius_m, v, std::max(thr.t1_s, 0.0), ti, n, rng),
            failure_prob_for_t1(cfg.cell, v, ti, thr.t1_s)));
        report.cells.push_back(detail::make_cell(
            "hne_unnecessary_at_t2", kmh, n,
            detail::dwell_band_fraction(cfg.cell.radius_m, v, std::max(thr.t2_s, 0.0), ti + to, n,
                                        rng),
            unnecessary_prob_for_t2(cfg.cell, v, ti, to, thr.t2_s)));
        report.cells.push_back(detail::make_cell(
            "fixed_failure", kmh, n,
            detail::dwell_band_fraction(cfg.fixed_radius_m, v, 0.0, ti, n, rng),
            failure_prob_baseline(v, ti, fixed_r_analytic)));
        report.cells.push_back(detail::make_cell(
            "fixed_unnecessary", kmh, n,
            detail::dwell_band_fraction(cfg.fixed_radius_m, v, 0.0, ti + to, n, rng),
            unnecessary_prob_baseline(v, ti, to, fixed_r_analytic)));
        report.cells.push_back(detail::make_cell(
            "hysteresis_failure", kmh, n,
            detail::dwell_band_fraction(cfg.hysteresis_radius_m, v, 0.0, ti, n, rng),
            failure_prob_baseline(v, ti, hyst_r_analytic)));
        report.cells.push_back(detail::make_cell(
            "hysteresis_unnecessary", kmh, n,
            detail::dwell_band_fraction(cfg.hysteresis_radius_m, v, 0.0, ti + to, n, rng),
            unnecessary_prob_baseline(v, ti, to, hyst_r_analytic)));
    }
    for (const VerifyCell& c : report.cells) report.all_pass = report.all_pass && c.pass;
    return report;
}

inline std::string verify_report_text(const VerifyReport& report) {
    std::string out;
    char buf[256];
    for (const VerifyCell& c : report.cells) {
        std::snprintf(buf, sizeof(buf),
                      "%-24s v=%-6.6g km/h n=%ld empirical=%.6f analytic=%.6f |dev|=%.6f "
                      "bound=%.6f %s\n",
                      c.label.c_str(), c.speed_kmh, c.samples, c.empirical, c.analytic,
                      c.deviation, c.bound, c.pass ? "PASS" : "FAIL");
        out += buf;
    }
    out += report.all_pass ? "verification: all cells PASS\n" : "verification: FAIL\n";
    return out;
}

}  // namespace vho
