#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vho/simulator.hpp"

using namespace vho;
using Catch::Approx;

namespace {

SimConfig small_config() {
    SimConfig cfg;
    cfg.speeds_kmh = {30.0, 60.0};
    cfg.trials_per_speed = 500;
    cfg.threads = 1;
    return cfg;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("outcomes classify against the latency budget") {
    const HandoverLatencies lat{2.0, 2.0};
    CHECK(classify_outcome(false, {}, 0.0, lat) == TrialOutcome::NoHandover);
    CHECK(classify_outcome(false, {}, 100.0, lat) == TrialOutcome::NoHandover);
    // trigger at entry with only 1 s of circle time left: cannot complete
    CHECK(classify_outcome(true, 0.0, 1.0, lat) == TrialOutcome::Failure);
    CHECK(classify_outcome(true, 0.0, 1.999, lat) == TrialOutcome::Failure);
    // completes the way in but not the round trip
    CHECK(classify_outcome(true, 0.0, 2.0, lat) == TrialOutcome::Unnecessary);
    CHECK(classify_outcome(true, 0.0, 3.9, lat) == TrialOutcome::Unnecessary);
    // a residual of 30 s comfortably covers 4 s of handovers
    CHECK(classify_outcome(true, 0.0, 30.0, lat) == TrialOutcome::Success);
    CHECK(classify_outcome(true, 0.0, 4.0, lat) == TrialOutcome::Success);
    CHECK_THROWS_AS(classify_outcome(true, 0.0, -0.5, lat), std::logic_error);
}

TEST_CASE("method names round trip") {
    for (Method m : {Method::Hne, Method::FixedRss, Method::Hysteresis}) {
        const auto back = method_from_name(method_name(m));
        REQUIRE(back.has_value());
        CHECK(*back == m);
    }
    CHECK_FALSE(method_from_name("nonsense").has_value());
}

TEST_CASE("default speed grid spans 3.6 to 99.6 in 49 steps") {
    const auto speeds = default_speeds_kmh();
    REQUIRE(speeds.size() == 49);
    CHECK(speeds.front() == Approx(3.6).margin(1e-12));
    CHECK(speeds.back() == Approx(99.6).margin(1e-9));
}

TEST_CASE("trials are a pure function of seed and stream") {
    const SimConfig cfg = small_config();
    for (Method m : {Method::Hne, Method::FixedRss, Method::Hysteresis}) {
        RandomStream r1(cfg.seed, 3), r2(cfg.seed, 3);
        CHECK(run_trial(cfg, m, 10.0, r1) == run_trial(cfg, m, 10.0, r2));
    }
}

TEST_CASE("sweep counts are consistent and ordered") {
    const SimConfig cfg = small_config();
    const SweepResult result = run_sweep(cfg);
    REQUIRE(result.rows.size() == cfg.speeds_kmh.size() * cfg.methods.size());
    std::size_t idx = 0;
    for (double speed : cfg.speeds_kmh) {
        for (Method m : cfg.methods) {
            const SweepCell& c = result.rows[idx++];
            CHECK(c.speed_kmh == speed);
            CHECK(c.method == m);
            CHECK(c.trials == cfg.trials_per_speed);
            CHECK(c.failures + c.unnecessary + c.successes == c.triggers);
            CHECK(c.triggers + c.no_handover == c.trials);
            if (c.triggers > 0) {
                CHECK(c.empirical_failure_prob ==
                      Approx(double(c.failures) / c.triggers).margin(1e-12));
                CHECK(c.empirical_unnecessary_prob ==
                      Approx(double(c.unnecessary) / c.triggers).margin(1e-12));
            }
        }
    }
}

TEST_CASE("a method's counts do not depend on which other methods run") {
    SimConfig lone = small_config();
    lone.methods = {Method::Hne};
    SimConfig both = small_config();
    both.methods = {Method::Hne, Method::FixedRss};
    const SweepResult a = run_sweep(lone);
    const SweepResult b = run_sweep(both);
    REQUIRE(a.rows.size() * 2 == b.rows.size());
    for (std::size_t si = 0; si < lone.speeds_kmh.size(); ++si) {
        const SweepCell& x = a.rows[si];
        const SweepCell& y = b.rows[si * 2];
        CHECK(x.failures == y.failures);
        CHECK(x.unnecessary == y.unnecessary);
        CHECK(x.successes == y.successes);
        CHECK(x.no_handover == y.no_handover);
    }
}

TEST_CASE("thread count never changes the rendered sweep") {
    SimConfig serial = small_config();
    SimConfig parallel = small_config();
    parallel.threads = 4;
    CHECK(sweep_csv(run_sweep(serial)) == sweep_csv(run_sweep(parallel)));
}

TEST_CASE("csv header and shape are stable") {
    CHECK(sweep_csv_header() ==
          "speed_kmh,method,trials,triggers,failures,unnecessary,successes,no_handover,"
          "empirical_failure_prob,analytic_failure_prob,empirical_unnecessary_prob,"
          "analytic_unnecessary_prob");
    const SimConfig cfg = small_config();
    const std::string csv = sweep_csv(run_sweep(cfg));
    CHECK(count_lines(csv) == 1 + 2 * 3);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == sweep_csv_header());
    std::getline(in, line);
    CHECK(line.rfind("30,hne,500,", 0) == 0);
    int commas = 0;
    for (char c : line)
        if (c == ',') ++commas;
    CHECK(commas == 11);
}

TEST_CASE("analytic columns carry the closed forms") {
    SimConfig cfg = small_config();
    cfg.speeds_kmh = {100.0};
    cfg.trials_per_speed = 1;  // analytic columns do not depend on trials
    const SweepResult result = run_sweep(cfg);
    REQUIRE(result.rows.size() == 3);
    const SweepCell& hne = result.rows[0];
    const SweepCell& fixed = result.rows[1];
    const SweepCell& hyst = result.rows[2];
    // the operating threshold exceeds the inbound latency at 100 km/h, so the
    // analytic failure mass is empty and the unnecessary mass sits at its target
    CHECK(hne.analytic_failure_prob == 0.0);
    CHECK(hne.analytic_unnecessary_prob == Approx(0.04).margin(1e-12));
    CHECK(fixed.analytic_failure_prob ==
          Approx(oracle::frozen::fixed_fail_100kmh).margin(1e-9));
    CHECK(fixed.analytic_unnecessary_prob ==
          Approx(oracle::frozen::fixed_unn_100kmh).margin(1e-9));
    CHECK(hyst.analytic_failure_prob ==
          Approx(oracle::frozen::hyst_fail_100kmh).margin(1e-9));
    CHECK(hyst.analytic_unnecessary_prob ==
          Approx(oracle::frozen::hyst_unn_100kmh).margin(1e-9));
}

TEST_CASE("noise-free necessity decisions are geometrically perfect") {
    // with sigma = 0 the estimator is exact, so failures can only come from
    // dwells in [threshold, latency) and there are none once the observation
    // window itself exceeds the latency
    SimConfig cfg = small_config();
    cfg.radio.shadow_sigma_db = 0.0;
    cfg.speeds_kmh = {50.0};
    cfg.trials_per_speed = 4000;
    cfg.methods = {Method::Hne};
    const SweepCell& c = run_sweep(cfg).rows[0];
    CHECK(c.failures == 0);
    // every triggered crossing dwells at least the 3 s window, and the
    // operating threshold at 50 km/h is 2.66 s < 3 s, so unnecessary
    // handovers are exactly the dwells in [3, 4) seconds
    const CellGeometry cell{150.0};
    const double v = 50.0 / 3.6;
    const double expect =
        (dwell_time_cdf(cell, v, 4.0) - dwell_time_cdf(cell, v, 3.0)) * cfg.trials_per_speed;
    CHECK(std::fabs(c.unnecessary - expect) < 3.0 * std::sqrt(expect) + 3.0);
}

TEST_CASE("verification passes on a consistent configuration") {
    SimConfig cfg;
    cfg.verify_speeds_kmh = {50.0};
    cfg.verify_samples = 20000;
    const VerifyReport report = verify_analytic(cfg);
    CHECK(report.cells.size() == 6);
    CHECK(report.all_pass);
    const std::string text = verify_report_text(report);
    CHECK(text.find("hne_failure_at_t1") != std::string::npos);
    CHECK(text.find("verification: all cells PASS") != std::string::npos);
}

TEST_CASE("verification exposes a radius inconsistent with its threshold") {
    SimConfig cfg;
    cfg.verify_speeds_kmh = {100.0};
    cfg.verify_samples = 100000;
    // sampler runs on 130 m while the threshold still encodes 150 m
    cfg.fixed_rss_dbm = radius_to_threshold(cfg.radio, 150.0);
    cfg.fixed_radius_m = 130.0;
    const VerifyReport report = verify_analytic(cfg);
    CHECK_FALSE(report.all_pass);
    bool fixed_cell_failed = false;
    for (const VerifyCell& c : report.cells)
        if (c.label == "fixed_failure" && !c.pass) fixed_cell_failed = true;
    CHECK(fixed_cell_failed);
    CHECK(verify_report_text(report).find("verification: FAIL") != std::string::npos);
}

TEST_CASE("verification refuses undersized sampling") {
    SimConfig cfg;
    cfg.verify_samples = 5000;
    CHECK_THROWS_AS(verify_analytic(cfg), std::domain_error);
}

TEST_CASE("sweep rejects empty work") {
    SimConfig cfg = small_config();
    cfg.speeds_kmh.clear();
    CHECK_THROWS_AS(run_sweep(cfg), std::domain_error);
    cfg = small_config();
    cfg.methods.clear();
    CHECK_THROWS_AS(run_sweep(cfg), std::domain_error);
    cfg = small_config();
    cfg.trials_per_speed = 0;
    CHECK_THROWS_AS(run_sweep(cfg), std::domain_error);
}
