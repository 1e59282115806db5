// Acceptance gate: every release-blocking requirement, one verdict line each.
// Exits 0 only if every criterion passes.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vho/config.hpp"
#include "vho/simulator.hpp"

using namespace vho;

namespace {

int failures_total = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("CRITERION %d (%s): %s - %s\n", number, name.c_str(), pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++failures_total;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

const SweepCell* find_row(const SweepResult& r, double speed_kmh, Method m) {
    for (const SweepCell& c : r.rows)
        if (c.method == m && std::fabs(c.speed_kmh - speed_kmh) < 1e-9) return &c;
    return nullptr;
}

}  // namespace

int main() {
    SimConfig cfg;  // release defaults: the Monte Carlo scenario under test
    validate_config(cfg);

    std::printf("running default sweep (%zu speeds x %d trials x %zu methods)...\n",
                cfg.speeds_kmh.size(), cfg.trials_per_speed, cfg.methods.size());
    const SweepResult sweep = run_sweep(cfg);

    // 1. necessity-estimation counts stay under 200 failed / 500 unnecessary
    //    per 10000 trials at every grid speed
    {
        long worst_fail = -1, worst_unn = -1;
        double at_fail = 0.0, at_unn = 0.0;
        for (const SweepCell& c : sweep.rows) {
            if (c.method != Method::Hne) continue;
            if (c.failures > worst_fail) {
                worst_fail = c.failures;
                at_fail = c.speed_kmh;
            }
            if (c.unnecessary > worst_unn) {
                worst_unn = c.unnecessary;
                at_unn = c.speed_kmh;
            }
        }
        const bool pass = worst_fail < 200 && worst_unn < 500;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "worst failures %ld/10000 at %.6g km/h (bound 200), worst unnecessary "
                      "%ld/10000 at %.6g km/h (bound 500)",
                      worst_fail, at_fail, worst_unn, at_unn);
        report(1, "estimator count bounds across the sweep", pass, buf);
    }

    // 2. at 100 km/h the estimator cuts failures to <= 30% and unnecessary
    //    handovers to <= 40% of the fixed-RSS baseline
    {
        SimConfig top = cfg;
        top.speeds_kmh = {100.0};
        const SweepResult r = run_sweep(top);
        const SweepCell* hne = find_row(r, 100.0, Method::Hne);
        const SweepCell* fixed = find_row(r, 100.0, Method::FixedRss);
        bool pass = hne && fixed && fixed->failures > 0 && fixed->unnecessary > 0;
        double fr = 1.0, ur = 1.0;
        if (pass) {
            fr = double(hne->failures) / double(fixed->failures);
            ur = double(hne->unnecessary) / double(fixed->unnecessary);
            pass = fr <= 0.30 && ur <= 0.40;
        }
        report(2, "high-speed reduction vs fixed-RSS", pass,
               fmt("failure ratio %.4f (bound 0.30), unnecessary ratio %.4f (bound 0.40)", fr, ur));
    }

    // 3. at speeds <= 20 km/h the estimator's counts exceed neither baseline's
    //    by more than 100 per 10000 trials
    {
        long worst_gap = -100000;
        double at = 0.0;
        std::string what = "none";
        for (double speed : cfg.speeds_kmh) {
            if (speed > 20.0 + 1e-9) continue;
            const SweepCell* hne = find_row(sweep, speed, Method::Hne);
            for (Method m : {Method::FixedRss, Method::Hysteresis}) {
                const SweepCell* base = find_row(sweep, speed, m);
                const long gap_f = hne->failures - base->failures;
                const long gap_u = hne->unnecessary - base->unnecessary;
                if (gap_f > worst_gap) {
                    worst_gap = gap_f;
                    at = speed;
                    what = std::string("failures vs ") + method_name(m);
                }
                if (gap_u > worst_gap) {
                    worst_gap = gap_u;
                    at = speed;
                    what = std::string("unnecessary vs ") + method_name(m);
                }
            }
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf), "worst low-speed gap %+ld per 10000 (%s at %.6g km/h, bound +100)",
                      worst_gap, what.c_str(), at);
        report(3, "low-speed crossover stays tight", worst_gap <= 100, buf);
    }

    // 4. every closed form matches an instant-trigger Monte Carlo within
    //    three binomial sigma at 10, 50, and 100 km/h
    {
        const VerifyReport vr = verify_analytic(cfg);
        double worst = 0.0;
        std::string where = "none";
        for (const VerifyCell& c : vr.cells) {
            const double ratio = c.bound > 0.0 ? c.deviation / c.bound : (c.deviation > 0 ? 2.0 : 0.0);
            if (ratio > worst) {
                worst = ratio;
                where = c.label + fmt(" at %.6g km/h", c.speed_kmh);
            }
        }
        report(4, "closed forms vs Monte Carlo (18 cells, 3-sigma)", vr.all_pass,
               fmt("worst deviation %.2f of bound", worst) + " (" + where + ")");
    }

    // 5. threshold construction and probability recovery are inverse maps to
    //    1e-9 relative across a 100-point (speed, probability) grid
    {
        double worst = 0.0;
        int checked = 0;
        for (int vi = 1; vi <= 10; ++vi) {
            const double v = 27.78 * vi / 10.0;
            for (int pi_ = 1; pi_ <= 10; ++pi_) {
                const double p = 0.01 * pi_;
                const double t1 = time_threshold_t1(cfg.cell, v, 2.0, p);
                if (t1 > 0.0 && std::isfinite(t1)) {
                    worst = std::max(worst,
                                     std::fabs(failure_prob_for_t1(cfg.cell, v, 2.0, t1) - p) / p);
                    ++checked;
                }
                const double t2 = time_threshold_t2(cfg.cell, v, 2.0, 2.0, p);
                if (t2 > 0.0 && std::isfinite(t2)) {
                    worst = std::max(
                        worst,
                        std::fabs(unnecessary_prob_for_t2(cfg.cell, v, 2.0, 2.0, t2) - p) / p);
                    ++checked;
                }
            }
        }
        report(5, "threshold/probability inverse round trip", checked >= 100 && worst <= 1e-9,
               fmt("%0.0f pairs, worst relative error %.3g (bound 1e-9)", double(checked), worst));
    }

    // 6. the dwell law is a proper distribution and the samplers draw from it
    {
        double worst_int = 0.0;
        for (auto [r, v] : std::vector<std::pair<double, double>>{
                 {150.0, 20.0}, {150.0, 27.78}, {50.0, 5.0}}) {
            const CellGeometry c{r};
            const double integral = oracle::tanh_sinh(
                [&](double t) { return dwell_time_pdf(c, v, t); }, 0.0, 2.0 * r / v);
            worst_int = std::max(worst_int, std::fabs(integral - 1.0));
        }
        const int n = 100000;
        RandomStream rng(cfg.seed, 77);
        std::vector<double> da, db;
        da.reserve(n);
        db.reserve(n);
        const double v = 20.0;
        for (int i = 0; i < n; ++i) {
            da.push_back(dwell_time(cfg.cell, sample_chord(rng, cfg.cell, v)));
            db.push_back(dwell_time(cfg.cell, sample_chord_endpoints(rng, cfg.cell, v)));
        }
        const double ks = oracle::ks_distance(
            da, [&](double t) { return dwell_time_cdf(cfg.cell, v, t); });
        const double ks2 = oracle::ks_distance_two(da, db);
        const bool pass = worst_int <= 1e-6 && ks <= 0.01 && ks2 <= 0.01;
        report(6, "dwell law normalization and sampler agreement", pass,
               fmt("pdf integral off by %.2g (bound 1e-6), KS %.4f, two-sampler KS %.4f (bounds 0.01)",
                   worst_int, ks, ks2));
    }

    // 7. the noise-free ranging estimator is exact over random chords and
    //    sample instants
    {
        RandomStream rng(cfg.seed, 78);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double b = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const oracle::CartesianChord chord(cfg.cell.radius_m, a, b);
            if (chord.length() < 1.0) continue;
            const double v = rng.uniform(1.0, 27.78);
            const double dwell = chord.length() / v;
            const double t = rng.uniform(1e-3 * dwell, dwell);
            const double l = chord.distance_to_center(v * t);
            const double est = hne_estimate_dwell(cfg.cell, l, v, t, 0.0);
            worst = std::max(worst, std::fabs(est - dwell) / dwell);
        }
        report(7, "noise-free dwell estimator exactness", worst <= 1e-9,
               fmt("worst relative error %.3g (bound 1e-9)", worst));
    }

    // 8. the radio inversion round-trips and the pinned threshold levels decode
    {
        double worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double d = std::pow(10.0, std::log10(300.0) * i / 100.0);
            worst = std::max(
                worst, std::fabs(estimate_distance(cfg.radio, mean_rss(cfg.radio, d)) - d) / d);
        }
        const double th150 = radius_to_threshold(cfg.radio, 150.0);
        const double th120 = radius_to_threshold(cfg.radio, 120.0);
        const bool pins = std::fabs(th150 - oracle::frozen::mean_rss_150m) < 1e-9 &&
                          std::fabs(th120 - oracle::frozen::mean_rss_120m) < 1e-9 &&
                          std::fabs(threshold_to_radius(cfg.radio, th150) - 150.0) < 1e-6 &&
                          std::fabs(threshold_to_radius(cfg.radio, th120) - 120.0) < 1e-6;
        report(8, "radio model inversion", worst <= 1e-9 && pins,
               fmt("worst round-trip error %.3g (bound 1e-9), thresholds %.3f / %.3f dBm", worst,
                   th150, th120));
    }

    // 9. identical config and seed give byte-identical CSV at any parallelism
    {
        SimConfig alt = cfg;
        alt.threads = 2;
        const std::string full_a = sweep_csv(sweep);
        const std::string full_b = sweep_csv(run_sweep(alt));
        SimConfig small = cfg;
        small.speeds_kmh = {10.0, 50.0, 90.0};
        small.trials_per_speed = 2000;
        small.threads = 1;
        SimConfig small4 = small;
        small4.threads = 4;
        const bool pass = full_a == full_b && sweep_csv(run_sweep(small)) ==
                                                  sweep_csv(run_sweep(small4));
        report(9, "byte-identical reruns across thread counts", pass,
               pass ? "full and reduced sweeps reproduce exactly"
                    : "CSV outputs diverged between runs");
    }

    if (failures_total == 0) {
        std::printf("acceptance: all criteria PASS\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", failures_total);
    return 1;
}
