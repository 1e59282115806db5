#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "vho/geometry.hpp"
#include "vho/radio.hpp"
#include "vho/thresholds.hpp"

namespace vho {

enum class Verdict {
    Wait,     // not enough samples observed yet
    Trigger,  // hand over to the WLAN
    Never,    // stay on the cellular network for this crossing
};

struct Decision {
    Verdict verdict = Verdict::Wait;
    std::optional<double> estimated_dwell_s;  // dwell estimate (necessity methods)
    std::optional<double> threshold_s;        // operating dwell threshold
    std::optional<double> trigger_time_s;     // sample time the verdict fired on
};

// Everything a decision strategy may consult about one crossing.
struct DecisionContext {
    CellGeometry cell;
    RadioModel radio;
    HandoverLatencies latencies;
    ToleranceTargets targets;
    double speed_mps = 1.0;
    double entry_time_s = 0.0;
    std::vector<RssSample> rss_samples;  // in-cell samples, ascending time
};

// Dwell estimate from one ranging sample: with l_os the distance at sample
// time t_s and entry at t_in, the chord geometry gives
//   dwell = (R^2 - l_os^2 + v^2 (t_s - t_in)^2) / (v^2 (t_s - t_in)).
// Exact for noise-free l_os regardless of where the sample falls.
inline double hne_estimate_dwell(const CellGeometry& cell, double l_os_m, double speed_mps,
                                 double sample_time_s, double entry_time_s) {
    detail::require_cell(cell);
    detail::require_speed(speed_mps);
    if (!(sample_time_s > entry_time_s))
        throw std::domain_error("ranging sample must come after the cell entry");
    const double l = std::min(l_os_m, cell.radius_m);  // estimates beyond R carry no information
    const double dt = sample_time_s - entry_time_s;
    const double v2 = speed_mps * speed_mps;
    return (cell.radius_m * cell.radius_m - l * l + v2 * dt * dt) / (v2 * dt);
}

// Handover necessity estimation. Waits until `window_samples` measurements
// are in, then least-squares fits the single-sample relation across the whole
// window: y_k = R^2 - l_k^2 + (v dt_k)^2 = v^2 * dwell * dt_k, so
//   dwell = sum(y_k dt_k) / (v^2 sum(dt_k^2)),
// the inverse-variance weighting of the per-sample estimates. Exact when the
// samples are noise-free; shadowing inflates l_k on average and biases the
// estimate low, which errs toward not handing over. Triggers when the
// estimate reaches max(T1, T2).
inline Decision hne_decide(const DecisionContext& ctx, std::size_t window_samples) {
    if (window_samples == 0) throw std::domain_error("window must hold at least one sample");
    Decision d;
    const ThresholdResult thr =
        compute_thresholds(ctx.cell, ctx.speed_mps, ctx.latencies, ctx.targets);
    d.threshold_s = thr.trigger_threshold_s;
    if (ctx.rss_samples.size() < window_samples) return d;  // Wait

    const double v2 = ctx.speed_mps * ctx.speed_mps;
    const double r2 = ctx.cell.radius_m * ctx.cell.radius_m;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < window_samples; ++k) {
        const RssSample& s = ctx.rss_samples[k];
        const double dt = s.time_s - ctx.entry_time_s;
        if (!(dt > 0.0)) throw std::domain_error("window samples must follow the cell entry");
        // deliberately unclamped: a weak sample decoding past the rim is
        // evidence of a short stay and must keep pulling the estimate down
        const double l = estimate_distance(ctx.radio, s.rss_dbm);
        num += (r2 - l * l + v2 * dt * dt) * dt;
        den += dt * dt;
    }
    const double raw = num / (v2 * den);
    const double est = std::clamp(raw, 0.0, 2.0 * ctx.cell.radius_m / ctx.speed_mps);
    d.estimated_dwell_s = est;
    d.trigger_time_s = ctx.rss_samples[window_samples - 1].time_s;
    d.verdict = est >= thr.trigger_threshold_s ? Verdict::Trigger : Verdict::Never;
    return d;
}

namespace detail {

// Shared comparison core of the RSS-threshold baselines: hand over at the
// first sample at or above the threshold.
inline Decision first_sample_reaching(const std::vector<RssSample>& samples,
                                      double threshold_dbm) {
    Decision d;
    d.verdict = Verdict::Never;
    for (const RssSample& s : samples) {
        if (s.rss_dbm >= threshold_dbm) {
            d.verdict = Verdict::Trigger;
            d.trigger_time_s = s.time_s;
            break;
        }
    }
    return d;
}

}  // namespace detail

// Fixed-RSS baseline: threshold chosen so its mean-RSS circle is the cell
// edge itself.
inline Decision fixed_rss_decide(const DecisionContext& ctx, double threshold_dbm) {
    return detail::first_sample_reaching(ctx.rss_samples, threshold_dbm);
}

// Hysteresis baseline: same comparison against a stricter threshold whose
// circle sits inside the cell. Kept distinct so the two baselines
// parameterize independently.
inline Decision hysteresis_decide(const DecisionContext& ctx, double threshold_dbm) {
    return detail::first_sample_reaching(ctx.rss_samples, threshold_dbm);
}

}  // namespace vho
