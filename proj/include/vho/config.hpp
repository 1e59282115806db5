#pragma once

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vho/simulator.hpp"

namespace vho {

// Malformed or out-of-range configuration; maps to exit code 1 in the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failure while reading or writing artifacts; exit code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError("invalid numeric value for " + key + ": '" + value + "'");
    return d;
}

inline long long parse_int(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long long n = std::strtoll(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError("invalid integer value for " + key + ": '" + value + "'");
    return n;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long n = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE ||
        value.find('-') != std::string::npos)
        throw ConfigError("invalid unsigned value for " + key + ": '" + value + "'");
    return n;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

}  // namespace detail

// Speed grids come either as an inclusive range "start:stop:step" or as an
// explicit comma list, both in km/h.
inline std::vector<double> parse_speed_spec(const std::string& spec, const std::string& key) {
    std::vector<double> speeds;
    if (spec.find(':') != std::string::npos) {
        const auto parts = detail::split(spec, ':');
        if (parts.size() != 3)
            throw ConfigError("range for " + key + " must be start:stop:step, got '" + spec + "'");
        const double start = detail::parse_double(key, parts[0]);
        const double stop = detail::parse_double(key, parts[1]);
        const double step = detail::parse_double(key, parts[2]);
        if (!(step > 0.0) || stop < start)
            throw ConfigError("range for " + key + " must ascend with a positive step");
        for (int i = 0;; ++i) {
            const double v = start + step * i;
            if (v > stop + 1e-9) break;
            speeds.push_back(v);
        }
    } else {
        for (const std::string& part : detail::split(spec, ',')) {
            if (part.empty()) throw ConfigError("empty entry in " + key);
            speeds.push_back(detail::parse_double(key, part));
        }
    }
    if (speeds.empty()) throw ConfigError(key + " expanded to an empty list");
    return speeds;
}

inline std::vector<Method> parse_method_list(const std::string& spec, const std::string& key) {
    std::vector<Method> methods;
    for (const std::string& part : detail::split(spec, ',')) {
        const auto m = method_from_name(part);
        if (!m) throw ConfigError("unknown method in " + key + ": '" + part + "'");
        methods.push_back(*m);
    }
    return methods;
}

// Applies one key=value pair on top of cfg. Unknown keys are errors so typos
// cannot silently fall back to defaults.
inline void apply_config_entry(SimConfig& cfg, const std::string& key, const std::string& value) {
    using detail::parse_double;
    using detail::parse_int;
    using detail::parse_uint;
    if (key == "cell.radius_m") cfg.cell.radius_m = parse_double(key, value);
    else if (key == "radio.tx_power_dbm") cfg.radio.tx_power_dbm = parse_double(key, value);
    else if (key == "radio.ref_distance_m") cfg.radio.ref_distance_m = parse_double(key, value);
    else if (key == "radio.ref_path_loss_db") cfg.radio.ref_path_loss_db = parse_double(key, value);
    else if (key == "radio.path_loss_exponent") cfg.radio.path_loss_exponent = parse_double(key, value);
    else if (key == "radio.shadow_sigma_db") cfg.radio.shadow_sigma_db = parse_double(key, value);
    else if (key == "latency.into_wlan_s") cfg.latencies.into_wlan_s = parse_double(key, value);
    else if (key == "latency.out_of_wlan_s") cfg.latencies.out_of_wlan_s = parse_double(key, value);
    else if (key == "targets.max_failure_prob") cfg.targets.max_failure_prob = parse_double(key, value);
    else if (key == "targets.max_unnecessary_prob") cfg.targets.max_unnecessary_prob = parse_double(key, value);
    else if (key == "decision.fixed_radius_m") cfg.fixed_radius_m = parse_double(key, value);
    else if (key == "decision.fixed_rss_dbm") cfg.fixed_rss_dbm = parse_double(key, value);
    else if (key == "decision.hysteresis_radius_m") cfg.hysteresis_radius_m = parse_double(key, value);
    else if (key == "decision.hysteresis_rss_dbm") cfg.hysteresis_rss_dbm = parse_double(key, value);
    else if (key == "sampling.interval_s") cfg.sampling.interval_s = parse_double(key, value);
    else if (key == "sampling.window_samples") cfg.sampling.window_samples = static_cast<int>(parse_int(key, value));
    else if (key == "sweep.speeds_kmh") cfg.speeds_kmh = parse_speed_spec(value, key);
    else if (key == "sweep.trials_per_speed") cfg.trials_per_speed = static_cast<int>(parse_int(key, value));
    else if (key == "sweep.seed") cfg.seed = parse_uint(key, value);
    else if (key == "sweep.methods") cfg.methods = parse_method_list(value, key);
    else if (key == "verify.speeds_kmh") cfg.verify_speeds_kmh = parse_speed_spec(value, key);
    else if (key == "verify.samples") cfg.verify_samples = parse_int(key, value);
    else if (key == "run.threads") cfg.threads = static_cast<int>(parse_int(key, value));
    else throw ConfigError("unknown config key: '" + key + "'");
}

// Parses flat key = value text. '#' starts a comment, blank lines are
// ignored, later entries override earlier ones.
inline SimConfig parse_config(const std::string& text, SimConfig base = SimConfig{}) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + " is not key = value: '" +
                              stripped + "'");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + " has an empty key");
        apply_config_entry(base, key, value);
    }
    return base;
}

inline SimConfig load_config_file(const std::string& path, SimConfig base = SimConfig{}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), base);
}

// Rejects configurations the model cannot represent. The radius/threshold
// pairs are range-checked individually; cross-consistency between a radius
// and an explicit dBm override is the verify subcommand's job.
inline void validate_config(const SimConfig& cfg) {
    const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (!(cfg.cell.radius_m > 0.0)) fail("cell.radius_m must be positive");
    if (!(cfg.radio.ref_distance_m > 0.0)) fail("radio.ref_distance_m must be positive");
    if (!(cfg.radio.ref_distance_m <= cfg.cell.radius_m))
        fail("radio.ref_distance_m must not exceed the cell radius");
    if (!(cfg.radio.path_loss_exponent > 0.0)) fail("radio.path_loss_exponent must be positive");
    if (cfg.radio.shadow_sigma_db < 0.0) fail("radio.shadow_sigma_db must be non-negative");
    if (!(cfg.latencies.into_wlan_s > 0.0)) fail("latency.into_wlan_s must be positive");
    if (!(cfg.latencies.out_of_wlan_s > 0.0)) fail("latency.out_of_wlan_s must be positive");
    if (!(cfg.targets.max_failure_prob > 0.0 && cfg.targets.max_failure_prob < 1.0))
        fail("targets.max_failure_prob must lie in (0, 1)");
    if (!(cfg.targets.max_unnecessary_prob > 0.0 && cfg.targets.max_unnecessary_prob < 1.0))
        fail("targets.max_unnecessary_prob must lie in (0, 1)");
    if (!(cfg.sampling.interval_s > 0.0)) fail("sampling.interval_s must be positive");
    if (cfg.sampling.window_samples < 1) fail("sampling.window_samples must be at least 1");
    if (cfg.trials_per_speed < 1) fail("sweep.trials_per_speed must be at least 1");
    if (cfg.verify_samples < 1) fail("verify.samples must be at least 1");
    if (cfg.threads < 0) fail("run.threads must be non-negative");
    if (cfg.speeds_kmh.empty()) fail("sweep.speeds_kmh is empty");
    for (double s : cfg.speeds_kmh)
        if (!(s > 0.0)) fail("sweep.speeds_kmh entries must be positive");
    if (cfg.verify_speeds_kmh.empty()) fail("verify.speeds_kmh is empty");
    for (double s : cfg.verify_speeds_kmh)
        if (!(s > 0.0)) fail("verify.speeds_kmh entries must be positive");

    const auto check_radius = [&](double r, const std::string& key) {
        if (!(r >= cfg.radio.ref_distance_m && r <= cfg.cell.radius_m))
            fail(key + " must lie within [radio.ref_distance_m, cell.radius_m]");
    };
    check_radius(cfg.fixed_radius_m, "decision.fixed_radius_m");
    check_radius(cfg.hysteresis_radius_m, "decision.hysteresis_radius_m");
    if (cfg.fixed_rss_dbm)
        check_radius(threshold_to_radius(cfg.radio, *cfg.fixed_rss_dbm),
                     "radius derived from decision.fixed_rss_dbm");
    if (cfg.hysteresis_rss_dbm)
        check_radius(threshold_to_radius(cfg.radio, *cfg.hysteresis_rss_dbm),
                     "radius derived from decision.hysteresis_rss_dbm");
}

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string join_doubles(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += fmt(xs[i]);
    }
    return out;
}

}  // namespace detail

// Canonical echo of a config; parse_config(serialize_config(c)) reproduces c
// bit for bit, which is what makes manifests re-runnable.
inline std::string serialize_config(const SimConfig& cfg) {
    using detail::fmt;
    std::string out;
    const auto kv = [&out](const std::string& k, const std::string& v) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    };
    kv("cell.radius_m", fmt(cfg.cell.radius_m));
    kv("radio.tx_power_dbm", fmt(cfg.radio.tx_power_dbm));
    kv("radio.ref_distance_m", fmt(cfg.radio.ref_distance_m));
    kv("radio.ref_path_loss_db", fmt(cfg.radio.ref_path_loss_db));
    kv("radio.path_loss_exponent", fmt(cfg.radio.path_loss_exponent));
    kv("radio.shadow_sigma_db", fmt(cfg.radio.shadow_sigma_db));
    kv("latency.into_wlan_s", fmt(cfg.latencies.into_wlan_s));
    kv("latency.out_of_wlan_s", fmt(cfg.latencies.out_of_wlan_s));
    kv("targets.max_failure_prob", fmt(cfg.targets.max_failure_prob));
    kv("targets.max_unnecessary_prob", fmt(cfg.targets.max_unnecessary_prob));
    kv("decision.fixed_radius_m", fmt(cfg.fixed_radius_m));
    if (cfg.fixed_rss_dbm) kv("decision.fixed_rss_dbm", fmt(*cfg.fixed_rss_dbm));
    kv("decision.hysteresis_radius_m", fmt(cfg.hysteresis_radius_m));
    if (cfg.hysteresis_rss_dbm) kv("decision.hysteresis_rss_dbm", fmt(*cfg.hysteresis_rss_dbm));
    kv("sampling.interval_s", fmt(cfg.sampling.interval_s));
    kv("sampling.window_samples", std::to_string(cfg.sampling.window_samples));
    kv("sweep.speeds_kmh", detail::join_doubles(cfg.speeds_kmh));
    kv("sweep.trials_per_speed", std::to_string(cfg.trials_per_speed));
    kv("sweep.seed", std::to_string(cfg.seed));
    {
        std::string names;
        for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
            if (i) names += ",";
            names += method_name(cfg.methods[i]);
        }
        kv("sweep.methods", names);
    }
    kv("verify.speeds_kmh", detail::join_doubles(cfg.verify_speeds_kmh));
    kv("verify.samples", std::to_string(cfg.verify_samples));
    kv("run.threads", std::to_string(cfg.threads));
    return out;
}

}  // namespace vho
