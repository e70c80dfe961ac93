#include "ym2/report.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ym2 {

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

Metric Metric::check(std::string name, double estimate, double lo, double hi) {
    Metric m;
    m.name = std::move(name);
    m.estimate = estimate;
    m.lo = lo;
    m.hi = hi;
    m.pass = (lo <= estimate && estimate <= hi);
    return m;
}

nlohmann::json Metric::to_json() const {
    nlohmann::json j{{"name", name}, {"estimate", estimate}, {"lo", lo}, {"hi", hi},
                     {"pass", pass}};
    if (se) j["se"] = *se;
    if (slope) j["slope"] = *slope;
    if (ci) j["ci"] = {(*ci)[0], (*ci)[1]};
    return j;
}

Metric Metric::from_json(const nlohmann::json& j) {
    Metric m;
    m.name = j.at("name").get<std::string>();
    m.estimate = j.at("estimate").get<double>();
    m.lo = j.at("lo").get<double>();
    m.hi = j.at("hi").get<double>();
    m.pass = j.at("pass").get<bool>();
    if (j.contains("se")) m.se = j["se"].get<double>();
    if (j.contains("slope")) m.slope = j["slope"].get<double>();
    if (j.contains("ci")) m.ci = std::array<double, 2>{j["ci"][0].get<double>(), j["ci"][1].get<double>()};
    return m;
}

bool ExperimentReport::pass() const {
    for (const auto& m : metrics)
        if (!m.pass) return false;
    return true;
}

const Metric* ExperimentReport::failing() const {
    for (const auto& m : metrics)
        if (!m.pass) return &m;
    return nullptr;
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& m : metrics) ms.push_back(m.to_json());
    return nlohmann::json{{"experiment", experiment},
                          {"config_hash", config_hash},
                          {"seed_base", seed_base},
                          {"metrics", ms}};
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
    ExperimentReport r;
    r.experiment = j.at("experiment").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.seed_base = j.at("seed_base").get<std::uint64_t>();
    for (const auto& m : j.at("metrics")) r.metrics.push_back(Metric::from_json(m));
    return r;
}

std::string ExperimentReport::to_string() const { return to_json().dump(2) + "\n"; }

void ExperimentReport::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("ExperimentReport::save: cannot open " + path);
    out << to_string();
}

ExperimentReport ExperimentReport::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("ExperimentReport::load: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

nlohmann::json RunManifest::to_json() const {
    return nlohmann::json{{"tool_version", tool_version},
                          {"config_path", config_path},
                          {"config_hash", config_hash},
                          {"seed_base", seed_base},
                          {"out_dir", out_dir},
                          {"started_utc", started_utc},
                          {"finished_utc", finished_utc},
                          {"runtime_s", runtime_s}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.config_path = j.at("config_path").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.seed_base = j.at("seed_base").get<std::uint64_t>();
    m.out_dir = j.at("out_dir").get<std::string>();
    m.started_utc = j.at("started_utc").get<std::string>();
    m.finished_utc = j.at("finished_utc").get<std::string>();
    if (j.contains("runtime_s")) m.runtime_s = j["runtime_s"].get<std::map<std::string, double>>();
    return m;
}

void RunManifest::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("RunManifest::save: cannot open " + path);
    out << to_json().dump(2) << "\n";
}

RunManifest RunManifest::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("RunManifest::load: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

std::string utc_now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace ym2
