#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ym2/curves.hpp"
#include "ym2/experiments.hpp"
#include "ym2/grid.hpp"
#include "ym2/noise.hpp"
#include "ym2/report.hpp"
#include "ym2/roughpath.hpp"
#include "ym2/transport.hpp"

using namespace ym2;
namespace fs = std::filesystem;
using nlohmann::json;

// These tests drive the installed binary end to end: exit codes, report
// bytes, manifest contents and the inspect subcommand.  The binary path
// arrives via YM2LAB_BIN (set by CTest); the shipped config directory via
// YM2_CONFIG_DIR.

namespace {

std::string bin_path() {
    const char* p = std::getenv("YM2LAB_BIN");
    REQUIRE_MESSAGE(p != nullptr, "YM2LAB_BIN must point at the ym2lab binary");
    return p;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("ym2lab_test_" + tag + "_" + std::to_string(++counter));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& leaf = "") const {
        return leaf.empty() ? path.string() : (path / leaf).string();
    }
};

// Runs `ym2lab <args>`, captures combined stdout/stderr, returns exit code.
int run_tool(const std::string& args, const fs::path& capture, std::string* out = nullptr) {
    const std::string cmd = bin_path() + " " + args + " > " + capture.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    if (out) {
        std::ifstream f(capture);
        std::ostringstream ss;
        ss << f.rdbuf();
        *out = ss.str();
    }
    REQUIRE(raw != -1);
    return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

// A configuration that runs in about a second and passes deterministically:
// a zero-area lasso concentrates the holonomy at the identity, so every
// comparison is exact up to solver roundoff.
json fast_passing_config(bool pin_seed = true) {
    ExperimentConfig c = default_experiment("wilson_density");
    c.grid = TorusGrid(4.0, 64);
    c.samples = 4;
    c.j_lo = 0;
    c.j_hi = 4;
    c.j_fixed = 4;
    c.transport_steps = 1024;  // keeps the identity residual far below 1e-5
    c.oracle_steps = 64;
    c.lassos = {Lasso::rectangle({1.5, 1.5}, {1.5, 1.6}, 0.4, 0.0)};
    RunConfig rc;
    rc.seed = 5;
    rc.workers = 1;
    rc.experiments = {c};
    json j = rc.to_json();
    if (!pin_seed) j["experiments"][0].erase("seed");
    return j;
}

// Small nontrivial config whose metrics are allowed to fail; used for the
// failure exit path by pinning an impossible tolerance.
json failing_config() {
    ExperimentConfig c = default_experiment("holder_first");
    c.grid = TorusGrid(4.0, 64);
    c.samples = 5;
    c.j_lo = 0;
    c.j_hi = 4;
    c.j_fixed = 3;
    c.tol = {{"exponent_min", 5.0}};  // unreachable
    RunConfig rc;
    rc.experiments = {c};
    return rc.to_json();
}

}  // namespace

TEST_CASE("run: passing config exits 0 and writes manifest plus reports") {
    TempDir tmp("run_ok");
    const fs::path cfg = tmp.path / "cfg.json";
    spit(cfg, fast_passing_config().dump(2));
    std::string out;
    const int rc = run_tool("run " + cfg.string() + " --out " + tmp.str("out"), tmp.path / "log",
                            &out);
    CHECK(rc == 0);
    CHECK(out.find("wilson_density") != std::string::npos);

    const RunManifest man = RunManifest::load(tmp.str("out/manifest.json"));
    CHECK(man.config_hash == fnv1a64_hex(slurp(cfg)));
    CHECK(man.seed_base == 5);
    CHECK(!man.started_utc.empty());
    CHECK(!man.finished_utc.empty());
    CHECK(man.runtime_s.count("wilson_density") == 1);

    const ExperimentReport rep = ExperimentReport::load(tmp.str("out/report_wilson_density.json"));
    CHECK(rep.pass());
    CHECK(rep.experiment == "wilson_density");
}

TEST_CASE("run: failing metric exits 1 and names the metric") {
    TempDir tmp("run_fail");
    const fs::path cfg = tmp.path / "cfg.json";
    spit(cfg, failing_config().dump(2));
    std::string out;
    const int rc = run_tool("run " + cfg.string() + " --out " + tmp.str("out"), tmp.path / "log",
                            &out);
    CHECK(rc == 1);
    CHECK(out.find("t_exponent") != std::string::npos);
    CHECK(out.find("FAIL") != std::string::npos);
    // The report is still written, with the failing metric recorded.
    const ExperimentReport rep = ExperimentReport::load(tmp.str("out/report_holder_first.json"));
    CHECK_FALSE(rep.pass());
}

TEST_CASE("run: usage and config errors exit 2") {
    TempDir tmp("run_err");
    std::string out;
    CHECK(run_tool("run " + tmp.str("missing.json"), tmp.path / "log1", &out) == 2);

    spit(tmp.path / "broken.json", "{ \"seed\": ");
    CHECK(run_tool("run " + tmp.str("broken.json"), tmp.path / "log2", &out) == 2);
    CHECK(out.find("parse") != std::string::npos);

    json bad = fast_passing_config();
    bad["experiments"][0]["bogus_key"] = 1;
    spit(tmp.path / "bad.json", bad.dump());
    CHECK(run_tool("run " + tmp.str("bad.json"), tmp.path / "log3", &out) == 2);
    CHECK(out.find("bogus_key") != std::string::npos);

    CHECK(run_tool("", tmp.path / "log4", &out) == 2);            // missing subcommand
    CHECK(run_tool("--nope", tmp.path / "log5", &out) == 2);      // unknown flag
    CHECK(run_tool("frobnicate", tmp.path / "log6", &out) == 2);  // unknown subcommand

    json negw = fast_passing_config();
    spit(tmp.path / "w.json", negw.dump());
    CHECK(run_tool("run " + tmp.str("w.json") + " --workers 0", tmp.path / "log7", &out) == 2);
}

TEST_CASE("run: reports are byte-identical across reruns and worker counts") {
    TempDir tmp("determinism");
    const fs::path cfg = tmp.path / "cfg.json";
    spit(cfg, fast_passing_config().dump(2));
    for (const char* variant : {"a", "b"}) {
        CHECK(run_tool("run " + cfg.string() + " --out " + tmp.str(variant), tmp.path / "log") ==
              0);
    }
    CHECK(run_tool("run " + cfg.string() + " --out " + tmp.str("c") + " --workers 2",
                   tmp.path / "log") == 0);
    const std::string rep = "report_wilson_density.json";
    const std::string a = slurp(tmp.path / "a" / rep);
    CHECK(a == slurp(tmp.path / "b" / rep));
    CHECK(a == slurp(tmp.path / "c" / rep));
}

TEST_CASE("run: --seed override rederives unpinned experiment seeds") {
    TempDir tmp("seed_override");
    const fs::path cfg = tmp.path / "cfg.json";
    spit(cfg, fast_passing_config(/*pin_seed=*/false).dump(2));
    CHECK(run_tool("run " + cfg.string() + " --out " + tmp.str("s5"), tmp.path / "log") == 0);
    CHECK(run_tool("run " + cfg.string() + " --out " + tmp.str("s6") + " --seed 6",
                   tmp.path / "log") == 0);
    const ExperimentReport r5 =
        ExperimentReport::load(tmp.str("s5/report_wilson_density.json"));
    const ExperimentReport r6 =
        ExperimentReport::load(tmp.str("s6/report_wilson_density.json"));
    CHECK(r5.seed_base != r6.seed_base);
    CHECK(RunManifest::load(tmp.str("s6/manifest.json")).seed_base == 6);
}

TEST_CASE("inspect: reports, manifests and run directories") {
    TempDir tmp("inspect_run");
    const fs::path cfg = tmp.path / "cfg.json";
    spit(cfg, fast_passing_config().dump(2));
    REQUIRE(run_tool("run " + cfg.string() + " --out " + tmp.str("out"), tmp.path / "log") == 0);

    std::string out;
    CHECK(run_tool("inspect " + tmp.str("out/report_wilson_density.json"), tmp.path / "i1",
                   &out) == 0);
    CHECK(out.find("angle_identity_max") != std::string::npos);

    CHECK(run_tool("inspect " + tmp.str("out/manifest.json"), tmp.path / "i2", &out) == 0);
    CHECK(out.find("ym2lab") != std::string::npos);

    CHECK(run_tool("inspect " + tmp.str("out"), tmp.path / "i3", &out) == 0);
    CHECK(out.find("wilson_density") != std::string::npos);

    CHECK(run_tool("inspect " + tmp.str("nowhere"), tmp.path / "i4", &out) == 2);
}

TEST_CASE("inspect: lift and transport CSV files and grid fields") {
    TempDir tmp("inspect_files");
    const TorusGrid grid(4.0, 64);
    const NoiseSample W(grid, 3, 11);

    const Curve line = Curve::line(2.0, 1.2, 2.0, 2.8);
    const Level2Path lift = lift_smoothed(line, W, 3, refine_knots(line, 33));
    lift.to_csv(tmp.str("lift.csv"));
    std::string out;
    CHECK(run_tool("inspect " + tmp.str("lift.csv"), tmp.path / "i1", &out) == 0);
    CHECK(out.find("consistent") != std::string::npos);
    CHECK(out.find("INCONSISTENT") == std::string::npos);

    const SmoothedPrefixField F(W, 3);
    TransportOptions opt;
    opt.steps = 128;
    opt.adapt = false;
    const TransportPath tp = parallel_transport(2, line, F, opt);
    tp.to_csv(tmp.str("transport.csv"));
    CHECK(run_tool("inspect " + tmp.str("transport.csv"), tmp.path / "i2", &out) == 0);
    CHECK(out.find("unitarity") != std::string::npos);

    GridField g(grid, 2);
    g.at(0, 5, 0) = 1.25;
    g.at(1, 7, 2) = -0.5;
    g.save(tmp.str("field.ym2"));
    CHECK(run_tool("inspect " + tmp.str("field.ym2"), tmp.path / "i3", &out) == 0);
    CHECK(out.find("channels") != std::string::npos);

    spit(tmp.path / "odd.csv", "a,b\n1,2\n");
    CHECK(run_tool("inspect " + tmp.str("odd.csv"), tmp.path / "i4", &out) == 2);

    spit(tmp.path / "blob.xyz", "???");
    CHECK(run_tool("inspect " + tmp.str("blob.xyz"), tmp.path / "i5", &out) == 2);
}

TEST_CASE("shipped configuration files parse and validate") {
    const char* dir = std::getenv("YM2_CONFIG_DIR");
    REQUIRE_MESSAGE(dir != nullptr, "YM2_CONFIG_DIR must point at the configs directory");
    for (const char* leaf : {"default.json", "smoke.json"}) {
        CAPTURE(leaf);
        const fs::path p = fs::path(dir) / leaf;
        REQUIRE(fs::exists(p));
        const json j = json::parse(slurp(p));
        const RunConfig rc = RunConfig::from_json(j);  // throws on any violation
        CHECK(!rc.experiments.empty());
        if (leaf == std::string("default.json")) {
            CHECK(rc.experiments.size() == 5);
            CHECK(rc.seed == 1);
        }
    }
}
