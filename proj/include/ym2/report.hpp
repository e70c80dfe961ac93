#pragma once
// Experiment report and run manifest artifacts.
//
// A Metric is a normalized check: `pass` holds exactly when
// lo <= estimate <= hi, so every verdict is recomputable from the stored
// numbers alone.  Slope metrics additionally carry the fitted slope, its
// standard error and a 95% confidence interval.
//
// Reports deliberately contain no wall-clock data; two runs from the same
// (config, seed) produce byte-identical report files.  Timing and
// timestamps live in the RunManifest only.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ym2 {

// FNV-1a 64-bit hash rendered as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

struct Metric {
    std::string name;
    double estimate = 0.0;
    std::optional<double> se;
    std::optional<double> slope;
    std::optional<std::array<double, 2>> ci;
    double lo = 0.0;
    double hi = 0.0;
    bool pass = false;

    static Metric check(std::string name, double estimate, double lo, double hi);
    nlohmann::json to_json() const;
    static Metric from_json(const nlohmann::json& j);
};

struct ExperimentReport {
    std::string experiment;
    std::string config_hash;
    std::uint64_t seed_base = 0;
    std::vector<Metric> metrics;
    double runtime_s = 0.0;  // transient; serialized into the manifest, not the report

    bool pass() const;
    const Metric* failing() const;  // first failing metric, nullptr if none

    nlohmann::json to_json() const;
    static ExperimentReport from_json(const nlohmann::json& j);
    // Canonical serialization written to disk (2-space indent, trailing \n).
    std::string to_string() const;
    void save(const std::string& path) const;
    static ExperimentReport load(const std::string& path);
};

struct RunManifest {
    std::string tool_version;
    std::string config_path;
    std::string config_hash;
    std::uint64_t seed_base = 0;
    std::string out_dir;
    std::string started_utc;
    std::string finished_utc;
    std::map<std::string, double> runtime_s;  // per report file stem

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static RunManifest load(const std::string& path);
};

// Current UTC time as an ISO-8601 string (manifest timestamps).
std::string utc_now_iso8601();

}  // namespace ym2
