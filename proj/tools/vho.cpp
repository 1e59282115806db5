// Command line front end: sweep, thresholds, verify, and pdf subcommands.
// Exit codes: 0 success, 1 config/usage error, 2 I/O error, 3 domain
// violation (e.g. cell too small for the latency), 4 verification failure.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vho/config.hpp"
#include "vho/simulator.hpp"
#include "vho/version.hpp"

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw vho::IoError("cannot open for writing: " + path.string());
    out << text;
    out.flush();
    if (!out) throw vho::IoError("failed while writing: " + path.string());
}

// Flags shared by the config-driven subcommands; empty/absent means "keep the
// config file's value".
struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string speeds;
    std::optional<int> trials;
    std::optional<long> samples;
    std::string methods;
    std::optional<int> threads;
};

vho::SimConfig resolve_config(const Overrides& ov, bool speeds_are_verify) {
    vho::SimConfig cfg;
    if (!ov.config_path.empty()) cfg = vho::load_config_file(ov.config_path);
    if (ov.seed) cfg.seed = *ov.seed;
    if (!ov.speeds.empty()) {
        auto speeds = vho::parse_speed_spec(ov.speeds, "--speeds");
        if (speeds_are_verify)
            cfg.verify_speeds_kmh = std::move(speeds);
        else
            cfg.speeds_kmh = std::move(speeds);
    }
    if (ov.trials) cfg.trials_per_speed = *ov.trials;
    if (ov.samples) cfg.verify_samples = *ov.samples;
    if (!ov.methods.empty()) cfg.methods = vho::parse_method_list(ov.methods, "--method");
    if (ov.threads) cfg.threads = *ov.threads;
    vho::validate_config(cfg);
    return cfg;
}

std::string manifest_text(const vho::SimConfig& cfg, const std::string& csv_name,
                          const std::string& started, const std::string& finished) {
    std::string out;
    out += "# sweep run manifest; loadable as a config file\n";
    out += "# tool_version = ";
    out += vho::version_string;
    out += "\n# started_utc = " + started + "\n";
    out += "# finished_utc = " + finished + "\n";
    out += "# csv = " + csv_name + "\n";
    char buf[64];
    std::string mps;
    for (std::size_t i = 0; i < cfg.speeds_kmh.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6g", vho::kmh_to_mps(cfg.speeds_kmh[i]));
        if (i) mps += ",";
        mps += buf;
    }
    out += "# speeds_mps = " + mps + "\n";
    std::snprintf(buf, sizeof(buf), "%.6f", vho::fixed_threshold_dbm(cfg));
    out += "# fixed_threshold_dbm = " + std::string(buf) + "\n";
    std::snprintf(buf, sizeof(buf), "%.6f", vho::hysteresis_threshold_dbm(cfg));
    out += "# hysteresis_threshold_dbm = " + std::string(buf) + "\n";
    out += vho::serialize_config(cfg);
    return out;
}

int cmd_sweep(const Overrides& ov, const std::string& out_dir) {
    const vho::SimConfig cfg = resolve_config(ov, false);
    const std::string started = utc_now();
    const vho::SweepResult result = vho::run_sweep(cfg);
    const std::string finished = utc_now();

    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw vho::IoError("cannot create output directory: " + dir.string());
    write_text_file(dir / "sweep.csv", vho::sweep_csv(result));
    write_text_file(dir / "manifest.txt", manifest_text(cfg, "sweep.csv", started, finished));
    std::cout << "wrote " << (dir / "sweep.csv").string() << " (" << result.rows.size()
              << " rows)\n";
    std::cout << "wrote " << (dir / "manifest.txt").string() << "\n";
    return 0;
}

int cmd_thresholds(const vho::CellGeometry& cell, double speed_mps,
                   const vho::HandoverLatencies& lat, const vho::ToleranceTargets& targets) {
    const vho::ThresholdResult thr = vho::compute_thresholds(cell, speed_mps, lat, targets);
    // Throws (exit 3 upstream) when even the diameter cannot cover a latency.
    const double pf = vho::failure_prob_for_t1(cell, speed_mps, lat.into_wlan_s, thr.t1_s);
    const double pu = vho::unnecessary_prob_for_t2(cell, speed_mps, lat.into_wlan_s,
                                                   lat.out_of_wlan_s, thr.t2_s);
    std::printf("T1 = %.5g s\n", thr.t1_s);
    std::printf("T2 = %.5g s\n", thr.t2_s);
    std::printf("trigger_threshold = %.5g s\n", thr.trigger_threshold_s);
    std::printf("recovered_failure_prob = %.6f\n", pf);
    std::printf("recovered_unnecessary_prob = %.6f\n", pu);
    return 0;
}

int cmd_verify(const Overrides& ov) {
    const vho::SimConfig cfg = resolve_config(ov, true);
    if (cfg.verify_samples < 10000)
        throw vho::ConfigError("verify.samples must be at least 10000");
    const vho::VerifyReport report = vho::verify_analytic(cfg);
    std::cout << vho::verify_report_text(report);
    return report.all_pass ? 0 : 4;
}

int cmd_pdf(double radius_m, double speed_mps, long points, const std::string& out_path) {
    if (points < 2) throw vho::ConfigError("--points must be at least 2");
    const vho::CellGeometry cell{radius_m};
    const double tmax = 2.0 * radius_m / speed_mps;
    std::string csv = "dwell_s,pdf,cdf\n";
    char buf[128];
    for (long i = 0; i < points; ++i) {
        const double t = tmax * static_cast<double>(i) / static_cast<double>(points - 1);
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", t,
                      vho::dwell_time_pdf(cell, speed_mps, t),
                      vho::dwell_time_cdf(cell, speed_mps, t));
        csv += buf;
    }
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_text_file(out_path, csv);
        std::cout << "wrote " << out_path << " (" << points << " rows)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale laboratory for vertical handover decision algorithms"};
    app.set_version_flag("--version", vho::version_string);
    app.require_subcommand(1);

    Overrides ov;
    std::string out_dir = "out";
    auto* sweep = app.add_subcommand("sweep", "run the Monte Carlo sweep, write CSV + manifest");
    sweep->add_option("--config", ov.config_path, "config file (key = value)");
    sweep->add_option("--out", out_dir, "output directory")->capture_default_str();
    sweep->add_option("--seed", ov.seed, "RNG seed override");
    sweep->add_option("--speeds", ov.speeds, "speed grid, km/h (start:stop:step or comma list)");
    sweep->add_option("--trials", ov.trials, "trials per speed");
    sweep->add_option("--method", ov.methods, "methods to run (comma list: hne,fixed_rss,hysteresis)");
    sweep->add_option("--threads", ov.threads, "worker threads (0 = hardware)");

    vho::CellGeometry thr_cell;
    vho::HandoverLatencies thr_lat;
    vho::ToleranceTargets thr_targets;
    double thr_speed = 20.0;
    auto* thresholds = app.add_subcommand("thresholds", "print dwell thresholds for one speed");
    thresholds->add_option("--radius", thr_cell.radius_m, "cell radius, m")->capture_default_str();
    thresholds->add_option("--speed-mps", thr_speed, "speed, m/s")->capture_default_str();
    thresholds->add_option("--latency-into", thr_lat.into_wlan_s, "handover-in latency, s")
        ->capture_default_str();
    thresholds->add_option("--latency-out", thr_lat.out_of_wlan_s, "handover-out latency, s")
        ->capture_default_str();
    thresholds->add_option("--max-failure", thr_targets.max_failure_prob,
                           "failure probability target")
        ->capture_default_str();
    thresholds->add_option("--max-unnecessary", thr_targets.max_unnecessary_prob,
                           "unnecessary-handover probability target")
        ->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Monte Carlo cross-check of the closed forms");
    verify->add_option("--config", ov.config_path, "config file (key = value)");
    verify->add_option("--seed", ov.seed, "RNG seed override");
    verify->add_option("--speeds", ov.speeds, "verification speeds, km/h");
    verify->add_option("--samples", ov.samples, "samples per verification cell");

    double pdf_radius = 150.0;
    double pdf_speed = 20.0;
    long pdf_points = 10001;
    std::string pdf_out;
    auto* pdf = app.add_subcommand("pdf", "tabulate the dwell-time pdf and cdf as CSV");
    pdf->add_option("--radius", pdf_radius, "cell radius, m")->capture_default_str();
    pdf->add_option("--speed-mps", pdf_speed, "speed, m/s")->capture_default_str();
    pdf->add_option("--points", pdf_points, "grid points over [0, 2R/v]")->capture_default_str();
    pdf->add_option("--out", pdf_out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // normalize usage errors; --help/--version stay 0
    }

    try {
        if (sweep->parsed()) return cmd_sweep(ov, out_dir);
        if (thresholds->parsed()) return cmd_thresholds(thr_cell, thr_speed, thr_lat, thr_targets);
        if (verify->parsed()) return cmd_verify(ov);
        if (pdf->parsed()) return cmd_pdf(pdf_radius, pdf_speed, pdf_points, pdf_out);
    } catch (const vho::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const vho::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
