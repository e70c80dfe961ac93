// ym2lab: command-line front end for the 2D gauge-field simulation library.
//
//   ym2lab run <config.json> [--seed N] [--out DIR] [--workers K]
//   ym2lab inspect <path>
//
// Exit codes are the machine contract: 0 all experiments pass, 1 experiment
// failure, 2 usage or config error.  Reports are byte-identical for a given
// (config, seed); wall-clock data lives only in the run manifest.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ym2/experiments.hpp"
#include "ym2/grid.hpp"
#include "ym2/report.hpp"
#include "ym2/roughpath.hpp"
#include "ym2/transport.hpp"

namespace fs = std::filesystem;
using namespace ym2;

namespace {

constexpr const char* kToolVersion = "ym2lab 1.0.0";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_metric_table(const ExperimentReport& rep) {
    std::printf("  %-30s %14s %12s %26s  %s\n", "metric", "estimate", "s.e.", "bounds", "status");
    for (const auto& m : rep.metrics) {
        char se[32] = "-";
        if (m.se) std::snprintf(se, sizeof se, "%.4g", *m.se);
        char bounds[64];
        std::snprintf(bounds, sizeof bounds, "[%.6g, %.6g]", m.lo,
                      m.hi >= 1e299 ? std::numeric_limits<double>::infinity() : m.hi);
        std::printf("  %-30s %14.7g %12s %26s  %s\n", m.name.c_str(), m.estimate, se, bounds,
                    m.pass ? "pass" : "FAIL");
    }
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir, std::optional<int> workers) {
    std::string raw;
    try {
        raw = read_file(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
        std::fprintf(stderr, "error: %s is not valid JSON: %s\n", config_path.c_str(), e.what());
        return 2;
    }
    RunConfig rc;
    try {
        rc = RunConfig::from_json(j, seed);
        if (workers) {
            if (*workers < 1) throw ConfigError("config error: --workers must be >= 1");
            rc.workers = *workers;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "error: cannot create output directory %s: %s\n", out_dir.c_str(),
                     ec.message().c_str());
        return 2;
    }

    // Manifest goes to disk before any experiment output.
    RunManifest man;
    man.tool_version = kToolVersion;
    man.config_path = config_path;
    man.config_hash = fnv1a64_hex(raw);
    man.seed_base = rc.seed;
    man.out_dir = out_dir;
    man.started_utc = utc_now_iso8601();
    const std::string man_path = (fs::path(out_dir) / "manifest.json").string();
    man.save(man_path);

    std::printf("%s | seed %llu | %d worker%s | %zu experiment%s -> %s\n", kToolVersion,
                static_cast<unsigned long long>(rc.seed), rc.workers, rc.workers == 1 ? "" : "s",
                rc.experiments.size(), rc.experiments.size() == 1 ? "" : "s", out_dir.c_str());

    bool all_pass = true;
    std::vector<ExperimentReport> reports;
    for (const auto& cfg : rc.experiments) {
        std::printf("[run ] %-18s samples=%-6d grid=(%g, %d) seed=%llu\n", cfg.name.c_str(),
                    cfg.samples, cfg.grid.L, cfg.grid.N,
                    static_cast<unsigned long long>(cfg.seed_base));
        std::fflush(stdout);
        ExperimentReport rep;
        try {
            rep = run_experiment(cfg, rc.workers);
        } catch (const ConfigError& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: experiment %s failed: %s\n", cfg.name.c_str(), e.what());
            return 1;
        }
        const std::string rep_path =
            (fs::path(out_dir) / ("report_" + cfg.name + ".json")).string();
        rep.save(rep_path);
        man.runtime_s[cfg.name] = rep.runtime_s;
        if (rep.pass()) {
            std::printf("[ ok ] %-18s %zu metrics pass (%.1fs)\n", cfg.name.c_str(),
                        rep.metrics.size(), rep.runtime_s);
        } else {
            all_pass = false;
            const Metric* bad = rep.failing();
            std::printf("[FAIL] %-18s metric %s: estimate %.6g outside [%.6g, %.6g] (%.1fs)\n",
                        cfg.name.c_str(), bad->name.c_str(), bad->estimate, bad->lo, bad->hi,
                        rep.runtime_s);
        }
        std::fflush(stdout);
        reports.push_back(std::move(rep));
    }

    man.finished_utc = utc_now_iso8601();
    man.save(man_path);

    if (!all_pass) {
        for (const auto& rep : reports)
            if (!rep.pass())
                std::fprintf(stderr, "FAIL: %s / %s\n", rep.experiment.c_str(),
                             rep.failing()->name.c_str());
        return 1;
    }
    std::printf("all experiments pass\n");
    return 0;
}

int inspect_report_json(const nlohmann::json& j, const std::string& path) {
    if (j.contains("metrics")) {
        ExperimentReport rep;
        try {
            rep = ExperimentReport::from_json(j);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s is not a valid report: %s\n", path.c_str(), e.what());
            return 2;
        }
        std::printf("experiment report: %s\n", rep.experiment.c_str());
        std::printf("  config hash %s, seed %llu, %zu metrics, %s\n", rep.config_hash.c_str(),
                    static_cast<unsigned long long>(rep.seed_base), rep.metrics.size(),
                    rep.pass() ? "all pass" : "FAILING");
        print_metric_table(rep);
        return 0;
    }
    if (j.contains("tool_version")) {
        RunManifest man;
        try {
            man = RunManifest::from_json(j);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s is not a valid manifest: %s\n", path.c_str(),
                         e.what());
            return 2;
        }
        std::printf("run manifest (%s)\n", man.tool_version.c_str());
        std::printf("  config   %s (hash %s)\n", man.config_path.c_str(),
                    man.config_hash.c_str());
        std::printf("  seed     %llu\n", static_cast<unsigned long long>(man.seed_base));
        std::printf("  output   %s\n", man.out_dir.c_str());
        std::printf("  started  %s\n", man.started_utc.c_str());
        std::printf("  finished %s\n",
                    man.finished_utc.empty() ? "(incomplete)" : man.finished_utc.c_str());
        for (const auto& [name, secs] : man.runtime_s)
            std::printf("  runtime  %-18s %.1fs\n", name.c_str(), secs);
        return 0;
    }
    std::fprintf(stderr, "error: %s: unrecognized JSON artifact\n", path.c_str());
    return 2;
}

int inspect_level2_csv(const std::string& path) {
    Level2Path p;
    try {
        p = Level2Path::from_csv(path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    std::printf("level-2 path: %d nodes, dim %d, t in [%g, %g]\n", p.nodes(), p.dim(),
                p.t.front(), p.t.back());
    // Recheck internal consistency on load: every stored increment must be
    // group-like (symmetric part = half outer square), and the Chen relation
    // must hold across a sweep of split points.
    double sym_resid = 0.0;
    const int n = p.nodes();
    for (int k = 1; k < n; ++k) {
        const Level2Increment g = p.increment(0, k);
        const RMat sym = 0.5 * (g.xx + g.xx.transpose());
        const RMat target = 0.5 * g.x * g.x.transpose();
        sym_resid = std::max(sym_resid, (sym - target).norm() / (1.0 + g.x.squaredNorm()));
    }
    double chen_resid = 0.0;
    const int step = std::max(1, (n - 1) / 16);
    for (int k = step; k < n - 1; k += step) {
        const Level2Increment left = p.increment(0, k);
        const Level2Increment right = p.increment(k, n - 1);
        const Level2Increment whole = p.increment(0, n - 1);
        const Level2Increment glued = tensor_mul(left, right);
        chen_resid = std::max(chen_resid, (glued.x - whole.x).norm() +
                                              (glued.xx - whole.xx).norm());
    }
    const bool ok = sym_resid <= 1e-10 && chen_resid <= 1e-10;
    std::printf("  group-like residual %.3g, Chen residual %.3g -> %s\n", sym_resid, chen_resid,
                ok ? "consistent" : "INCONSISTENT");
    return 0;
}

int inspect_transport_csv(const std::string& path) {
    TransportPath p;
    try {
        p = transport_path_from_csv(path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    const int n = static_cast<int>(p.U.front().rows());
    double unit = 0.0;
    for (const auto& u : p.U)
        unit = std::max(unit, (u.adjoint() * u - Mat::Identity(n, n)).norm());
    std::printf("transport path: %d nodes, SU(%d), t in [%g, %g]\n", p.nodes(), n, p.t.front(),
                p.t.back());
    std::printf("  unitarity defect %.3g -> %s, final Re tr U = %.6g\n", unit,
                unit <= 1e-8 ? "unitary" : "NOT UNITARY", re_trace(p.U.back()));
    return 0;
}

int inspect_grid_field(const std::string& path) {
    GridField f;
    try {
        f = GridField::load(path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    std::printf("grid field: L=%g N=%d channels=%d\n", f.grid().L, f.grid().N, f.channels());
    for (int ch = 0; ch < f.channels(); ++ch)
        std::printf("  channel %d  L2 norm %.6g\n", ch,
                    std::sqrt(std::max(0.0, GridField::inner_l2(f, ch, f, ch))));
    return 0;
}

int cmd_inspect(const std::string& path) {
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        const fs::path man_path = fs::path(path) / "manifest.json";
        if (!fs::exists(man_path, ec)) {
            std::fprintf(stderr, "error: %s has no manifest.json\n", path.c_str());
            return 2;
        }
        nlohmann::json mj;
        try {
            mj = nlohmann::json::parse(read_file(man_path.string()));
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        }
        if (const int rcode = inspect_report_json(mj, man_path.string()); rcode != 0)
            return rcode;
        std::vector<std::string> reports;
        for (const auto& entry : fs::directory_iterator(path)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("report_", 0) == 0 && entry.path().extension() == ".json")
                reports.push_back(entry.path().string());
        }
        std::sort(reports.begin(), reports.end());
        for (const auto& r : reports) {
            std::printf("\n");
            nlohmann::json rj;
            try {
                rj = nlohmann::json::parse(read_file(r));
            } catch (const std::exception& e) {
                std::fprintf(stderr, "error: %s\n", e.what());
                return 2;
            }
            if (const int rcode = inspect_report_json(rj, r); rcode != 0) return rcode;
        }
        return 0;
    }
    if (!fs::exists(path, ec)) {
        std::fprintf(stderr, "error: %s does not exist\n", path.c_str());
        return 2;
    }
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(path));
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        }
        return inspect_report_json(j, path);
    }
    if (ext == ".csv") {
        std::ifstream in(path);
        std::string header;
        std::getline(in, header);
        in.close();
        if (header.rfind("t,x_", 0) == 0) return inspect_level2_csv(path);
        if (header.rfind("t,u_re_1_1", 0) == 0) return inspect_transport_csv(path);
        std::fprintf(stderr, "error: %s: unrecognized CSV header\n", path.c_str());
        return 2;
    }
    return inspect_grid_field(path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D gauge-field simulation lab"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "ym2lab_out";
    std::uint64_t seed_val = 0;
    int workers_val = 0;
    CLI::App* run = app.add_subcommand("run", "run the experiments named in a JSON config");
    run->add_option("config", config_path, "run configuration (JSON)")->required();
    CLI::Option* seed_opt =
        run->add_option("--seed", seed_val, "override the base seed for the whole run");
    run->add_option("--out", out_dir, "output directory (default ym2lab_out)");
    CLI::Option* workers_opt =
        run->add_option("--workers", workers_val, "worker threads (default: config value)");

    std::string artifact;
    CLI::App* insp =
        app.add_subcommand("inspect", "summarize a report, manifest, run directory, "
                                      "path CSV, or grid-field file");
    insp->add_option("path", artifact, "artifact to inspect")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (run->parsed())
        return cmd_run(config_path,
                       seed_opt->count() ? std::optional<std::uint64_t>(seed_val) : std::nullopt,
                       out_dir,
                       workers_opt->count() ? std::optional<int>(workers_val) : std::nullopt);
    return cmd_inspect(artifact);
}
