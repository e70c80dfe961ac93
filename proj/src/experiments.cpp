#include "ym2/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "ym2/fourier.hpp"
#include "ym2/liealg.hpp"
#include "ym2/noise.hpp"
#include "ym2/partition.hpp"
#include "ym2/rng.hpp"
#include "ym2/roughpath.hpp"
#include "ym2/stats.hpp"
#include "ym2/transport.hpp"

namespace ym2 {

namespace {

constexpr double kBigBound = 1e300;

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

[[noreturn]] void cfg_fail(const std::string& msg) { throw ConfigError("config error: " + msg); }

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
    if (!j.is_object()) cfg_fail(ctx + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) cfg_fail("unknown key \"" + key + "\" in " + ctx);
    }
}

// ---- norm estimates from per-sample squared values -------------------------

struct NormEst {
    double norm = 0.0;
    double se = 0.0;          // delta-method s.e. of the norm
    MomentSummary m2;         // summary of the squared values
};

NormEst norm_from_sq(const std::vector<double>& sq) {
    NormEst e;
    e.m2 = summarize(sq);
    e.norm = std::sqrt(std::max(0.0, e.m2.mean));
    e.se = e.norm > 0.0 ? e.m2.se / (2.0 * e.norm) : 0.0;
    return e;
}

Metric slope_metric(std::string name, const OlsFit& f, double lo, double hi) {
    Metric m = Metric::check(std::move(name), f.slope, lo, hi);
    m.slope = f.slope;
    m.se = f.se_slope;
    m.ci = f.ci95;
    return m;
}

Metric info_metric(std::string name, double est, double se) {
    Metric m = Metric::check(std::move(name), est, -kBigBound, kBigBound);
    m.se = se;
    return m;
}

OlsFit fit_loglog(const std::vector<double>& scale, const std::vector<double>& norm) {
    std::vector<double> x(scale.size()), y(norm.size());
    for (std::size_t i = 0; i < scale.size(); ++i) {
        if (!(norm[i] > 0.0)) throw std::runtime_error("slope fit: nonpositive norm estimate");
        x[i] = std::log2(scale[i]);
        y[i] = std::log2(norm[i]);
    }
    return ols_fit(x, y);
}

double ratio_z(double a, double b, double se_comb) {
    const double d = std::abs(a - b);
    // Differences at solver-roundoff scale count as exact agreement; every
    // genuine Monte-Carlo comparison here lives at >= 1e-4.
    if (d <= 1e-9) return 0.0;
    if (se_comb == 0.0) return kBigBound;
    return d / se_comb;
}

// ---- window sweep spectra --------------------------------------------------

std::vector<cplx> window_spectrum(const TorusGrid& grid, const Curve& c, double s, double t) {
    if (!(t > s)) return std::vector<cplx>(grid.cells(), cplx(0.0, 0.0));
    return sweep_spectrum(grid, c, s, t);
}

// ---- dyadic block decomposition of (1 - chi_j) on the grid -----------------
//
// The grid resolves finitely many frequencies, so there is a top block B with
// chi_{B+1} == 1 at every grid mode; for any j the blocks j..B then sum
// pointwise to 1 - chi_j (telescoping of the cumulative multipliers).  Each
// mode meets at most two block supports, stored explicitly.

struct BlockDecomp {
    int b_lo = 0;
    int b_hi = -1;
    std::vector<std::int16_t> b1, b2;
    std::vector<double> w1, w2;
};

BlockDecomp make_block_decomp(const TorusGrid& grid, int b_lo) {
    BlockDecomp d;
    d.b_lo = b_lo;
    const double r_max = std::sqrt(2.0) * grid.nyquist();
    int b_hi = b_lo;
    while (std::ldexp(1.0, b_hi + 1) < (7.0 / 6.0) * r_max) ++b_hi;
    d.b_hi = b_hi;
    const std::size_t cells = grid.cells();
    d.b1.assign(cells, -1);
    d.b2.assign(cells, -1);
    d.w1.assign(cells, 0.0);
    d.w2.assign(cells, 0.0);
    for (int ky = 0; ky < grid.N; ++ky) {
        for (int kx = 0; kx < grid.N; ++kx) {
            const std::size_t m = static_cast<std::size_t>(ky) * grid.N + kx;
            const double r = grid.xi_abs(kx, ky);
            for (int b = b_lo; b <= b_hi; ++b) {
                if (r < (6.0 / 7.0) * std::ldexp(1.0, b) || r > std::ldexp(2.0, b)) continue;
                const double w = rho_block(b, r);
                if (w == 0.0) continue;
                if (d.b1[m] < 0) {
                    d.b1[m] = static_cast<std::int16_t>(b);
                    d.w1[m] = w;
                } else {
                    d.b2[m] = static_cast<std::int16_t>(b);
                    d.w2[m] = w;
                }
            }
        }
    }
    return d;
}

// ---- geometry helpers ------------------------------------------------------

double su2_angle(const Mat& U) {
    return std::acos(std::clamp(0.5 * re_trace(U), -1.0, 1.0));
}

int orient_sign(const std::array<double, 2>& a, const std::array<double, 2>& b,
                const std::array<double, 2>& c, double eps) {
    const double v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    if (v > eps) return 1;
    if (v < -eps) return -1;
    return 0;
}

bool segments_properly_cross(const std::array<double, 2>& p1, const std::array<double, 2>& p2,
                             const std::array<double, 2>& q1, const std::array<double, 2>& q2) {
    const double eps = 1e-12;
    const int o1 = orient_sign(p1, p2, q1, eps);
    const int o2 = orient_sign(p1, p2, q2, eps);
    const int o3 = orient_sign(q1, q2, p1, eps);
    const int o4 = orient_sign(q1, q2, p2, eps);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

double point_segment_dist(const std::array<double, 2>& p, const std::array<double, 2>& a,
                          const std::array<double, 2>& b) {
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double u = len2 > 0.0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    return std::hypot(p[0] - (a[0] + u * dx), p[1] - (a[1] + u * dy));
}

bool point_strictly_inside(const std::array<double, 2>& p,
                           const std::vector<std::array<double, 2>>& poly) {
    const double eps = 1e-9;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
        if (point_segment_dist(p, poly[i], poly[(i + 1) % n]) <= eps) return false;
    // Crossing-number test against horizontal ray to +infinity.
    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        if ((a[1] > p[1]) != (b[1] > p[1])) {
            const double x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if (x > p[0]) inside = !inside;
        }
    }
    return inside;
}

std::array<double, 2> polygon_centroid(const std::vector<std::array<double, 2>>& poly) {
    double a2 = 0.0, cx = 0.0, cy = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        const double w = p[0] * q[1] - q[0] * p[1];
        a2 += w;
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    if (a2 == 0.0) return poly.front();
    return {cx / (3.0 * a2), cy / (3.0 * a2)};
}

}  // namespace

bool loop_interiors_overlap(const Curve& a, const Curve& b) {
    const auto pa = polygon_of(a);
    const auto pb = polygon_of(b);
    for (std::size_t i = 0; i < pa.size(); ++i)
        for (std::size_t k = 0; k < pb.size(); ++k)
            if (segments_properly_cross(pa[i], pa[(i + 1) % pa.size()], pb[k],
                                        pb[(k + 1) % pb.size()]))
                return true;
    auto probes = [](const std::vector<std::array<double, 2>>& poly) {
        std::vector<std::array<double, 2>> ps = poly;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const auto& p = poly[i];
            const auto& q = poly[(i + 1) % poly.size()];
            ps.push_back({0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])});
        }
        ps.push_back(polygon_centroid(poly));
        return ps;
    };
    for (const auto& p : probes(pa))
        if (point_strictly_inside(p, pb)) return true;
    for (const auto& p : probes(pb))
        if (point_strictly_inside(p, pa)) return true;
    return false;
}

// ---- configuration ---------------------------------------------------------

std::vector<std::pair<double, double>> WindowSpec::windows() const {
    std::vector<std::pair<double, double>> out;
    for (int k = 0; k < octaves; ++k) out.emplace_back(s, s + dt * std::ldexp(1.0, k));
    return out;
}

double ExperimentConfig::tol_or(const std::string& key, double dflt) const {
    const auto it = tol.find(key);
    return it == tol.end() ? dflt : it->second;
}

void ExperimentConfig::validate() const {
    if (name.empty()) cfg_fail("experiment name is empty");
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        cfg_fail("unknown experiment \"" + name + "\"");
    if (grid.N < 16) cfg_fail("grid.N must be >= 16");
    if (!(grid.L > 0.0)) cfg_fail("grid.L must be positive");
    if (dim < 1) cfg_fail("dim must be >= 1");
    if (group_n < 2) cfg_fail("group must be >= 2");
    if (samples < 2) cfg_fail("samples must be >= 2");
    const int jm = grid.j_max();
    if (j_lo < -1 || j_hi > jm || j_lo > j_hi)
        cfg_fail("j range must satisfy -1 <= lo <= hi <= " + std::to_string(jm));
    if (j_fixed < -1 || j_fixed > jm)
        cfg_fail("j.fixed must lie in [-1, " + std::to_string(jm) + "]");
    for (const WindowSpec* w : {&window, &t_window}) {
        if (w->octaves < 1) cfg_fail("window octaves must be >= 1");
        if (!(w->dt > 0.0)) cfg_fail("window dt must be positive");
        if (w->s < 0.0 || w->s + w->dt * std::ldexp(1.0, w->octaves - 1) > 1.0 + 1e-12)
            cfg_fail("window ladder must stay inside [0, 1]");
    }
    if (tgrid_nodes < 3) cfg_fail("tgrid_nodes must be >= 3");
    if (transport_steps < 1) cfg_fail("transport_steps must be >= 1");
    if (oracle_steps < 1) cfg_fail("oracle_steps must be >= 1");
    if (curve) {
        const auto bb = curve->bbox();
        if (!grid.in_window(bb[0], bb[2]) || !grid.in_window(bb[1], bb[3]))
            cfg_fail("curve leaves the experiment window [L/4, 3L/4]^2");
    }
    for (std::size_t l = 0; l < lassos.size(); ++l) {
        const auto& ls = lassos[l];
        const std::string tag = "lasso " + std::to_string(l);
        if (!ls.loop.closed(1e-9)) cfg_fail(tag + ": loop is not closed");
        const double area = ls.loop.signed_area();
        if (area < -1e-12) cfg_fail(tag + ": loop must be anticlockwise (positive area)");
        if (area > 1e-12 && !ls.loop.simple(1e-12)) cfg_fail(tag + ": loop is not simple");
        const auto bb = ls.composite().bbox();
        if (!grid.in_window(bb[0], bb[2]) || !grid.in_window(bb[1], bb[3]))
            cfg_fail(tag + ": lasso leaves the experiment window [L/4, 3L/4]^2");
    }
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j{{"name", name},
                     {"grid", {{"L", grid.L}, {"N", grid.N}}},
                     {"dim", dim},
                     {"group", group_n},
                     {"samples", samples},
                     {"seed", seed_base},
                     {"j", {{"lo", j_lo}, {"hi", j_hi}, {"fixed", j_fixed}}},
                     {"window", {{"s", window.s}, {"dt", window.dt}, {"octaves", window.octaves}}},
                     {"t_window",
                      {{"s", t_window.s}, {"dt", t_window.dt}, {"octaves", t_window.octaves}}},
                     {"tgrid_nodes", tgrid_nodes},
                     {"transport_steps", transport_steps},
                     {"oracle_steps", oracle_steps}};
    if (curve) j["curve"] = curve->to_json();
    if (!lassos.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& l : lassos) arr.push_back(l.to_json());
        j["lassos"] = arr;
    }
    if (!tol.empty()) j["tolerances"] = tol;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j,
                                             std::optional<std::uint64_t> derived_seed) {
    check_keys(j,
               {"name", "grid", "dim", "group", "samples", "seed", "j", "window", "t_window",
                "tgrid_nodes", "transport_steps", "oracle_steps", "curve", "lassos", "tolerances"},
               "experiment");
    if (!j.contains("name")) cfg_fail("experiment entry lacks \"name\"");
    ExperimentConfig c = default_experiment(j.at("name").get<std::string>());
    try {
        if (j.contains("grid")) {
            check_keys(j["grid"], {"L", "N"}, "grid");
            if (j["grid"].contains("L")) c.grid.L = j["grid"]["L"].get<double>();
            if (j["grid"].contains("N")) c.grid.N = j["grid"]["N"].get<int>();
        }
        if (j.contains("dim")) c.dim = j["dim"].get<int>();
        if (j.contains("group")) c.group_n = j["group"].get<int>();
        if (j.contains("samples")) c.samples = j["samples"].get<int>();
        if (j.contains("seed"))
            c.seed_base = j["seed"].get<std::uint64_t>();
        else if (derived_seed)
            c.seed_base = *derived_seed;
        if (j.contains("j")) {
            check_keys(j["j"], {"lo", "hi", "fixed"}, "j");
            if (j["j"].contains("lo")) c.j_lo = j["j"]["lo"].get<int>();
            if (j["j"].contains("hi")) c.j_hi = j["j"]["hi"].get<int>();
            if (j["j"].contains("fixed")) c.j_fixed = j["j"]["fixed"].get<int>();
        }
        auto read_window = [](const nlohmann::json& w, WindowSpec& spec) {
            check_keys(w, {"s", "dt", "octaves"}, "window");
            if (w.contains("s")) spec.s = w["s"].get<double>();
            if (w.contains("dt")) spec.dt = w["dt"].get<double>();
            if (w.contains("octaves")) spec.octaves = w["octaves"].get<int>();
        };
        if (j.contains("window")) read_window(j["window"], c.window);
        if (j.contains("t_window")) read_window(j["t_window"], c.t_window);
        if (j.contains("tgrid_nodes")) c.tgrid_nodes = j["tgrid_nodes"].get<int>();
        if (j.contains("transport_steps")) c.transport_steps = j["transport_steps"].get<int>();
        if (j.contains("oracle_steps")) c.oracle_steps = j["oracle_steps"].get<int>();
        if (j.contains("curve")) c.curve = Curve::from_json(j["curve"]);
        if (j.contains("lassos")) {
            c.lassos.clear();
            for (const auto& l : j["lassos"]) c.lassos.push_back(Lasso::from_json(l));
        }
        if (j.contains("tolerances"))
            c.tol = j["tolerances"].get<std::map<std::string, double>>();
    } catch (const nlohmann::json::exception& e) {
        cfg_fail(std::string("experiment \"") + c.name + "\": " + e.what());
    } catch (const std::invalid_argument& e) {
        cfg_fail(std::string("experiment \"") + c.name + "\": " + e.what());
    }
    return c;
}

std::string ExperimentConfig::canonical_hash() const { return fnv1a64_hex(to_json().dump()); }

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"first_level_decay", "holder_first",
                                               "second_level", "wilson_density", "independence"};
    return names;
}

ExperimentConfig default_experiment(const std::string& name) {
    ExperimentConfig c;
    c.name = name;
    auto vertical_line = [](const TorusGrid& g) {
        return Curve::line(0.5 * g.L, 0.2625 * g.L, 0.5 * g.L, 0.7375 * g.L);
    };
    if (name == "first_level_decay") {
        c.grid = TorusGrid(4.0, 1024);
        c.samples = 400;
        c.j_lo = 3;
        c.j_hi = 6;
        c.j_fixed = 3;
        c.window = {0.125, 0.75, 1};
        c.t_window = {0.25, 1.0 / 512.0, 4};
        c.curve = vertical_line(c.grid);
    } else if (name == "holder_first") {
        c.grid = TorusGrid(4.0, 512);
        c.samples = 400;
        c.j_lo = 0;
        c.j_hi = 7;
        c.j_fixed = 5;
        c.window = {0.0, 0.125, 4};
        c.curve = vertical_line(c.grid);
    } else if (name == "second_level") {
        c.grid = TorusGrid(4.0, 1024);
        c.samples = 300;
        c.j_lo = 4;
        c.j_hi = 8;
        c.j_fixed = 5;
        c.window = {0.25, 0.0625, 4};
        c.tgrid_nodes = 257;
        c.curve = vertical_line(c.grid);
    } else if (name == "wilson_density") {
        // The finite-band field sits slightly off the continuum law, with a
        // systematic offset that shrinks like 2^{-j}.  L = 4 with N = 1024
        // raises the resolvable band to j = 8, where the residual offset on
        // every loop below is within one combined s.e. at 10^4 samples.
        c.grid = TorusGrid(4.0, 1024);
        c.samples = 10000;
        c.j_lo = 0;
        c.j_hi = 8;
        c.j_fixed = 8;
        c.transport_steps = 2048;
        c.oracle_steps = 1024;
        c.lassos = {Lasso::rectangle({1.2, 1.05}, {1.2, 1.2}, 1.6, 0.625),
                    Lasso::rectangle({1.3, 1.8}, {1.3, 1.95}, 1.0, 1.0),
                    Lasso::rectangle({1.35, 2.3}, {1.35, 2.45}, 0.5, 0.5),
                    Lasso::rectangle({1.3, 1.3}, {1.3, 1.45}, 1.6, 1.25)};
    } else if (name == "independence") {
        c.grid = TorusGrid(8.0, 512);
        c.samples = 10000;
        c.j_lo = 0;
        c.j_hi = 6;
        c.j_fixed = 6;
        c.transport_steps = 2048;
        c.lassos = {Lasso::rectangle({3.2, 2.95}, {3.2, 3.2}, 1.0, 1.0),
                    Lasso::rectangle({2.8, 4.55}, {2.8, 4.7}, 1.8, 0.6),
                    Lasso::rectangle({2.8, 2.15}, {2.8, 2.0}, 1.8, 0.6),
                    Lasso::rectangle({4.95, 2.95}, {4.95, 3.2}, 1.0, 1.0)};
    } else {
        cfg_fail("unknown experiment \"" + name + "\"");
    }
    return c;
}

// ---- worker pool -----------------------------------------------------------

void parallel_samples(int n, int workers, const std::function<void(int)>& body) {
    if (n <= 0) return;
    const int k = std::max(1, std::min(workers, n));
    if (k == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto run = [&]() {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= n) break;
            try {
                body(i);
            } catch (...) {
                {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                }
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) threads.emplace_back(run);
    for (auto& t : threads) t.join();
    if (err) std::rethrow_exception(err);
}

// ---- experiment 1: decay of the band-truncation error in j -----------------

ExperimentReport exp_first_level_decay(const ExperimentConfig& cfg, int workers) {
    const auto t0 = Clock::now();
    cfg.validate();
    if (!cfg.curve) cfg_fail("first_level_decay: curve required");
    if (cfg.j_lo < 0) cfg_fail("first_level_decay: j.lo must be >= 0");
    if (cfg.j_fixed < cfg.j_lo || cfg.j_fixed > cfg.j_hi)
        cfg_fail("first_level_decay: j.fixed must lie in [j.lo, j.hi]");
    if (cfg.t_window.octaves < 3) cfg_fail("first_level_decay: t_window needs >= 3 octaves");
    const TorusGrid& grid = cfg.grid;
    const Curve& c = *cfg.curve;
    const auto wj = cfg.window.windows().front();
    const auto wt = cfg.t_window.windows();
    const int jcount = cfg.j_hi - cfg.j_lo + 1;
    const int tcount = static_cast<int>(wt.size());

    // Shared sweep spectra: index 0 is the j-slope window, 1.. the t-ladder.
    std::vector<std::vector<cplx>> sweeps;
    sweeps.push_back(window_spectrum(grid, c, wj.first, wj.second));
    for (const auto& w : wt) sweeps.push_back(window_spectrum(grid, c, w.first, w.second));
    const int nwin = static_cast<int>(sweeps.size());

    const int bmin = cfg.j_lo;
    const BlockDecomp bd = make_block_decomp(grid, bmin);
    const int bcount = bd.b_hi - bmin + 1;
    const BandTable& low_band = cumulative_band(grid, cfg.j_lo);

    // Per-sample slots: squared truncation error per j (slope window), per
    // t-window at j_fixed, the reference self-difference, and the dual-route
    // reconstruction residual (full pairing vs banded + block suffix).
    const int slots = jcount + tcount + 2;
    std::vector<double> out(static_cast<std::size_t>(cfg.samples) * slots, 0.0);

    parallel_samples(cfg.samples, workers, [&](int i) {
        const NoiseSample W(grid, cfg.dim, sample_seed(cfg.seed_base, i));
        std::vector<cplx> z;
        // acc[w * bcount + (b - bmin)] accumulates the pairing restricted to
        // block b of window w; suffix sums over b give the pairing against
        // (1 - chi_j) for every j at once.
        std::vector<cplx> acc(static_cast<std::size_t>(nwin) * bcount);
        std::vector<double> m2(static_cast<std::size_t>(nwin) * jcount, 0.0);
        double ref_abs = 0.0;
        double recon_abs = 0.0;
        for (int ch = 0; ch < cfg.dim; ++ch) {
            W.fill_filtered(ch, nullptr, z);
            std::fill(acc.begin(), acc.end(), cplx(0.0, 0.0));
            cplx full(0.0, 0.0);
            for (int w = 0; w < nwin; ++w) {
                const auto& f = sweeps[static_cast<std::size_t>(w)];
                cplx* a = acc.data() + static_cast<std::size_t>(w) * bcount;
                for (std::size_t m = 0; m < z.size(); ++m) {
                    const cplx zf = std::conj(z[m]) * f[m];
                    if (w == 0) full += zf;
                    if (bd.b1[m] < 0) continue;
                    a[bd.b1[m] - bmin] += bd.w1[m] * zf;
                    if (bd.b2[m] >= 0) a[bd.b2[m] - bmin] += bd.w2[m] * zf;
                }
            }
            // Banded pairing of window 0 below the lowest tested level.
            cplx banded(0.0, 0.0);
            for (std::size_t m = 0; m < low_band.modes.size(); ++m)
                banded += std::conj(z[low_band.modes[m]]) * low_band.mult[low_band.modes[m]] *
                          sweeps[0][low_band.modes[m]];
            for (int w = 0; w < nwin; ++w) {
                const cplx* a = acc.data() + static_cast<std::size_t>(w) * bcount;
                // re_at[q] = Re pairing with (1 - chi_{bmin+q}); the final
                // entry is the empty suffix: the reference paired against
                // itself, identically zero by construction.
                std::vector<double> re_at(static_cast<std::size_t>(bcount) + 1, 0.0);
                cplx suffix(0.0, 0.0);
                for (int b = bd.b_hi; b >= bmin; --b) {
                    suffix += a[b - bmin];
                    re_at[static_cast<std::size_t>(b - bmin)] = suffix.real();
                }
                for (int q = 0; q < jcount; ++q) {
                    const double x = re_at[static_cast<std::size_t>(cfg.j_lo + q - bmin)];
                    m2[static_cast<std::size_t>(w) * jcount + q] += x * x;
                }
                ref_abs = std::max(ref_abs, std::abs(re_at[static_cast<std::size_t>(bcount)]));
                if (w == 0)
                    recon_abs = std::max(recon_abs,
                                         std::abs(banded.real() + re_at[0] - full.real()));
            }
        }
        double* slot = out.data() + static_cast<std::size_t>(i) * slots;
        for (int q = 0; q < jcount; ++q) slot[q] = m2[static_cast<std::size_t>(q)];
        for (int k = 0; k < tcount; ++k) {
            const int q = cfg.j_fixed - cfg.j_lo;
            slot[jcount + k] = m2[static_cast<std::size_t>(k + 1) * jcount + q];
        }
        slot[jcount + tcount] = ref_abs;
        slot[jcount + tcount + 1] = recon_abs;
    });

    // Reduce in index order.
    ExperimentReport rep;
    rep.experiment = cfg.name;
    rep.config_hash = cfg.canonical_hash();
    rep.seed_base = cfg.seed_base;

    auto column = [&](int s) {
        std::vector<double> col(static_cast<std::size_t>(cfg.samples));
        for (int i = 0; i < cfg.samples; ++i)
            col[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i) * slots + s];
        return col;
    };

    std::vector<double> jscale, jnorm;
    for (int q = 0; q < jcount; ++q) {
        const NormEst e = norm_from_sq(column(q));
        jscale.push_back(std::ldexp(1.0, cfg.j_lo + q));
        jnorm.push_back(e.norm);
        rep.metrics.push_back(info_metric("norm_j" + std::to_string(cfg.j_lo + q), e.norm, e.se));
    }
    const OlsFit jf = fit_loglog(jscale, jnorm);
    rep.metrics.push_back(slope_metric("j_slope", jf, cfg.tol_or("j_slope_lo", -0.55),
                                       cfg.tol_or("j_slope_hi", -0.25)));
    rep.metrics.push_back(
        Metric::check("j_slope_r2", jf.r2, cfg.tol_or("r2_min", 0.9), 1.0 + 1e-9));

    std::vector<double> tscale, tnorm;
    for (int k = 0; k < tcount; ++k) {
        const NormEst e = norm_from_sq(column(jcount + k));
        tscale.push_back(wt[static_cast<std::size_t>(k)].second - wt[static_cast<std::size_t>(k)].first);
        tnorm.push_back(e.norm);
    }
    const OlsFit tf = fit_loglog(tscale, tnorm);
    rep.metrics.push_back(
        slope_metric("t_exponent", tf, cfg.tol_or("t_exp_lo", 0.4), cfg.tol_or("t_exp_hi", 0.6)));
    rep.metrics.push_back(
        Metric::check("t_exponent_r2", tf.r2, cfg.tol_or("r2_min", 0.9), 1.0 + 1e-9));

    double ref_max = 0.0;
    double recon_max = 0.0;
    for (int i = 0; i < cfg.samples; ++i) {
        ref_max = std::max(ref_max, out[static_cast<std::size_t>(i) * slots + jcount + tcount]);
        recon_max =
            std::max(recon_max, out[static_cast<std::size_t>(i) * slots + jcount + tcount + 1]);
    }
    rep.metrics.push_back(Metric::check("ref_self_zero", ref_max, 0.0, 0.0));
    rep.metrics.push_back(Metric::check("band_reconstruction_max", recon_max, 0.0,
                                        cfg.tol_or("recon_tol", 1e-9)));

    rep.runtime_s = elapsed_s(t0);
    return rep;
}

// ---- experiment 2: window exponent of the fixed-band pairing ---------------

ExperimentReport exp_holder_first(const ExperimentConfig& cfg, int workers) {
    const auto t0 = Clock::now();
    cfg.validate();
    if (!cfg.curve) cfg_fail("holder_first: curve required");
    if (cfg.j_fixed < 0) cfg_fail("holder_first: j.fixed must be >= 0");
    if (cfg.window.octaves < 3) cfg_fail("holder_first: window needs >= 3 octaves");
    const TorusGrid& grid = cfg.grid;
    const Curve& c = *cfg.curve;
    const auto wins = cfg.window.windows();
    const int nwin = static_cast<int>(wins.size());

    const BandTable& band = cumulative_band(grid, cfg.j_fixed);
    const std::size_t nmodes = band.modes.size();

    // Filtered window coefficients restricted to the band support, plus the
    // exact variance sigma^2 = ||chi_j * sweep||^2 shared by every channel.
    std::vector<std::vector<cplx>> fw(static_cast<std::size_t>(nwin) + 1);
    std::vector<double> sigma2(static_cast<std::size_t>(nwin), 0.0);
    for (int k = 0; k <= nwin; ++k) {
        const auto w = k < nwin ? wins[static_cast<std::size_t>(k)]
                                : std::make_pair(cfg.window.s, cfg.window.s);
        const std::vector<cplx> sw = window_spectrum(grid, c, w.first, w.second);
        auto& dst = fw[static_cast<std::size_t>(k)];
        dst.resize(nmodes);
        double s2 = 0.0;
        for (std::size_t m = 0; m < nmodes; ++m) {
            dst[m] = band.mult[band.modes[m]] * sw[band.modes[m]];
            s2 += std::norm(dst[m]);
        }
        if (k < nwin) sigma2[static_cast<std::size_t>(k)] = s2;
    }

    const int slots = (nwin + 1) * cfg.dim;
    std::vector<double> out(static_cast<std::size_t>(cfg.samples) * slots, 0.0);

    parallel_samples(cfg.samples, workers, [&](int i) {
        const NoiseSample W(grid, cfg.dim, sample_seed(cfg.seed_base, i));
        std::vector<cplx> z;
        double* slot = out.data() + static_cast<std::size_t>(i) * slots;
        for (int ch = 0; ch < cfg.dim; ++ch) {
            W.coeffs_at(ch, band.modes, z);
            for (int k = 0; k <= nwin; ++k) {
                const auto& f = fw[static_cast<std::size_t>(k)];
                cplx acc(0.0, 0.0);
                for (std::size_t m = 0; m < nmodes; ++m) acc += std::conj(z[m]) * f[m];
                slot[k * cfg.dim + ch] = acc.real();
            }
        }
    });

    ExperimentReport rep;
    rep.experiment = cfg.name;
    rep.config_hash = cfg.canonical_hash();
    rep.seed_base = cfg.seed_base;

    auto values = [&](int k, int ch) {
        std::vector<double> col(static_cast<std::size_t>(cfg.samples));
        for (int i = 0; i < cfg.samples; ++i)
            col[static_cast<std::size_t>(i)] =
                out[static_cast<std::size_t>(i) * slots + k * cfg.dim + ch];
        return col;
    };

    std::vector<double> scale, norm;
    double var_z_max = 0.0;
    for (int k = 0; k < nwin; ++k) {
        std::vector<double> sq(static_cast<std::size_t>(cfg.samples), 0.0);
        for (int ch = 0; ch < cfg.dim; ++ch) {
            const auto xs = values(k, ch);
            std::vector<double> xs2(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                xs2[i] = xs[i] * xs[i];
                sq[i] += xs2[i];
            }
            const MomentSummary m2 = summarize(xs2);
            const double z = ratio_z(m2.mean, sigma2[static_cast<std::size_t>(k)], m2.se);
            var_z_max = std::max(var_z_max, z);
        }
        const NormEst e = norm_from_sq(sq);
        scale.push_back(wins[static_cast<std::size_t>(k)].second -
                        wins[static_cast<std::size_t>(k)].first);
        norm.push_back(e.norm);
        rep.metrics.push_back(info_metric("norm_w" + std::to_string(k), e.norm, e.se));
    }
    const OlsFit f = fit_loglog(scale, norm);
    rep.metrics.push_back(slope_metric("t_exponent", f, cfg.tol_or("exponent_min", 0.45),
                                       cfg.tol_or("exponent_max", 1.5)));
    rep.metrics.push_back(
        Metric::check("t_exponent_r2", f.r2, cfg.tol_or("r2_min", 0.9), 1.0 + 1e-9));
    rep.metrics.push_back(
        Metric::check("variance_identity_max_z", var_z_max, 0.0, cfg.tol_or("var_z_max", 4.0)));

    double degen_max = 0.0;
    for (int ch = 0; ch < cfg.dim; ++ch)
        for (const double x : values(nwin, ch)) degen_max = std::max(degen_max, std::abs(x));
    rep.metrics.push_back(Metric::check("degenerate_window_zero", degen_max, 0.0, 0.0));

    rep.runtime_s = elapsed_s(t0);
    return rep;
}

// ---- experiment 3: second level of the lift --------------------------------

ExperimentReport exp_second_level(const ExperimentConfig& cfg, int workers) {
    const auto t0 = Clock::now();
    cfg.validate();
    if (!cfg.curve) cfg_fail("second_level: curve required");
    if (cfg.j_lo < 0) cfg_fail("second_level: j.lo must be >= 0");
    if (cfg.j_hi < cfg.j_lo + 2) cfg_fail("second_level: need j.hi >= j.lo + 2");
    if (cfg.window.octaves < 3) cfg_fail("second_level: window needs >= 3 octaves");
    const TorusGrid& grid = cfg.grid;
    const Curve& c = *cfg.curve;
    const auto wins = cfg.window.windows();
    const int nwin = static_cast<int>(wins.size());
    const int jcount = cfg.j_hi - cfg.j_lo + 1;

    const std::vector<double> tgrid = refine_knots(c, cfg.tgrid_nodes);
    auto node_of = [&](double t) {
        for (std::size_t k = 0; k < tgrid.size(); ++k)
            if (std::abs(tgrid[k] - t) <= 1e-9) return static_cast<int>(k);
        cfg_fail("second_level: window endpoint " + std::to_string(t) +
                 " does not land on the lift grid");
    };
    std::vector<std::pair<int, int>> wnode;
    for (const auto& w : wins) wnode.emplace_back(node_of(w.first), node_of(w.second));

    // Slots: ||second level||_F^2 per (j, window), Cauchy differences per
    // consecutive j at the largest window, degenerate-window norm.
    const int slots = jcount * nwin + (jcount - 1) + 1;
    std::vector<double> out(static_cast<std::size_t>(cfg.samples) * slots, 0.0);

    parallel_samples(cfg.samples, workers, [&](int i) {
        const NoiseSample W(grid, cfg.dim, sample_seed(cfg.seed_base, i));
        double* slot = out.data() + static_cast<std::size_t>(i) * slots;
        RMat prev_xx;
        for (int q = 0; q < jcount; ++q) {
            const Level2Path path = lift_smoothed(c, W, cfg.j_lo + q, tgrid);
            for (int k = 0; k < nwin; ++k) {
                const Level2Increment inc =
                    path.increment(wnode[static_cast<std::size_t>(k)].first,
                                   wnode[static_cast<std::size_t>(k)].second);
                slot[q * nwin + k] = inc.xx.squaredNorm();
            }
            const Level2Increment big =
                path.increment(wnode.back().first, wnode.back().second);
            if (q > 0) slot[jcount * nwin + (q - 1)] = (big.xx - prev_xx).squaredNorm();
            prev_xx = big.xx;
            if (q == 0) {
                const Level2Increment degen =
                    path.increment(wnode.front().first, wnode.front().first);
                slot[jcount * nwin + (jcount - 1)] =
                    degen.x.cwiseAbs().maxCoeff() + degen.xx.cwiseAbs().maxCoeff();
            }
        }
    });

    ExperimentReport rep;
    rep.experiment = cfg.name;
    rep.config_hash = cfg.canonical_hash();
    rep.seed_base = cfg.seed_base;

    auto column = [&](int s) {
        std::vector<double> col(static_cast<std::size_t>(cfg.samples));
        for (int i = 0; i < cfg.samples; ++i)
            col[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i) * slots + s];
        return col;
    };

    for (int q = 0; q < jcount; ++q) {
        std::vector<double> scale, norm;
        for (int k = 0; k < nwin; ++k) {
            const NormEst e = norm_from_sq(column(q * nwin + k));
            scale.push_back(wins[static_cast<std::size_t>(k)].second -
                            wins[static_cast<std::size_t>(k)].first);
            norm.push_back(e.norm);
        }
        const OlsFit f = fit_loglog(scale, norm);
        const std::string tag = "exponent_j" + std::to_string(cfg.j_lo + q);
        rep.metrics.push_back(slope_metric(tag, f, cfg.tol_or("exponent_min", 0.9),
                                           cfg.tol_or("exponent_max", 3.0)));
        rep.metrics.push_back(
            Metric::check(tag + "_r2", f.r2, cfg.tol_or("r2_min", 0.9), 1.0 + 1e-9));
    }

    std::vector<NormEst> cauchy;
    for (int q = 0; q + 1 < jcount; ++q) {
        cauchy.push_back(norm_from_sq(column(jcount * nwin + q)));
        rep.metrics.push_back(info_metric("cauchy_d" + std::to_string(cfg.j_lo + q),
                                          cauchy.back().norm, cauchy.back().se));
    }
    int inversions = 0;
    for (std::size_t q = 0; q + 1 < cauchy.size(); ++q) {
        const double se_comb = std::hypot(cauchy[q].se, cauchy[q + 1].se);
        if (cauchy[q + 1].norm > cauchy[q].norm + 3.0 * se_comb) ++inversions;
    }
    rep.metrics.push_back(Metric::check("cauchy_inversions", inversions, 0.0,
                                        cfg.tol_or("cauchy_inversions_max", 1.0)));
    const double decay = cauchy.back().norm > 0.0 ? cauchy.front().norm / cauchy.back().norm
                                                  : kBigBound;
    rep.metrics.push_back(Metric::check("cauchy_total_decay", decay,
                                        cfg.tol_or("cauchy_decay_min", 2.0), kBigBound));

    double degen_max = 0.0;
    for (const double v : column(jcount * nwin + (jcount - 1))) degen_max = std::max(degen_max, v);
    rep.metrics.push_back(Metric::check("degenerate_window_zero", degen_max, 0.0, 0.0));

    rep.runtime_s = elapsed_s(t0);
    return rep;
}

// ---- experiment 4: holonomy law vs the group Brownian oracle ---------------

namespace {

// Coupled pair of geometric Euler runs along one Brownian path: the fine run
// takes 2M steps, the coarse run combines consecutive increments (the exact
// M-step scheme for the same underlying motion).
struct CoupledEndpoints {
    double fine;
    double coarse;
};

CoupledEndpoints oracle_coupled_retr(int n, std::uint64_t seed, int m_coarse, double area) {
    const int dim = su_dim(n);
    const int mf = 2 * m_coarse;
    Rng rng(seed);
    std::vector<double> g(static_cast<std::size_t>(mf) * dim);
    for (auto& v : g) v = rng.next_gauss();
    const double s = std::sqrt(area / mf);
    RVec coords(dim);
    Mat uf = Mat::Identity(n, n);
    for (int k = 0; k < mf; ++k) {
        for (int d = 0; d < dim; ++d) coords[d] = -s * g[static_cast<std::size_t>(k) * dim + d];
        uf = uf * exp_su(n, coords);
    }
    Mat uc = Mat::Identity(n, n);
    for (int k = 0; k < m_coarse; ++k) {
        for (int d = 0; d < dim; ++d)
            coords[d] = -s * (g[static_cast<std::size_t>(2 * k) * dim + d] +
                              g[static_cast<std::size_t>(2 * k + 1) * dim + d]);
        uc = uc * exp_su(n, coords);
    }
    return {re_trace(uf), re_trace(uc)};
}

double oracle_retr(int n, std::uint64_t seed, int steps, double area, double* angle_out) {
    std::vector<double> t(static_cast<std::size_t>(steps) + 1);
    std::vector<double> a(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) {
        t[static_cast<std::size_t>(k)] = static_cast<double>(k) / steps;
        a[static_cast<std::size_t>(k)] = area * static_cast<double>(k) / steps;
    }
    const TransportPath p = lie_bm_oracle(n, seed, t, a);
    const Mat& U = p.U.back();
    if (angle_out) *angle_out = su2_angle(U);
    return re_trace(U);
}

}  // namespace

ExperimentReport exp_wilson_density(const ExperimentConfig& cfg, int workers) {
    const auto t0 = Clock::now();
    cfg.validate();
    if (cfg.lassos.empty()) cfg_fail("wilson_density: needs at least one lasso");
    if (cfg.dim != su_dim(cfg.group_n))
        cfg_fail("wilson_density: dim must equal n^2 - 1 for SU(n) transport");
    if (cfg.j_fixed < 0) cfg_fail("wilson_density: j.fixed must be >= 0");
    const TorusGrid& grid = cfg.grid;
    const int nl = static_cast<int>(cfg.lassos.size());
    const int ns = cfg.samples;

    std::vector<Curve> comps;
    std::vector<double> areas;
    for (const auto& l : cfg.lassos) {
        comps.push_back(l.composite());
        areas.push_back(l.enclosed_area());
    }

    // Distinct enclosed areas share one oracle stream each.
    std::vector<double> group_area;
    std::vector<int> group_of(static_cast<std::size_t>(nl), -1);
    for (int l = 0; l < nl; ++l) {
        for (std::size_t g = 0; g < group_area.size(); ++g)
            if (std::abs(group_area[g] - areas[static_cast<std::size_t>(l)]) <= 1e-9)
                group_of[static_cast<std::size_t>(l)] = static_cast<int>(g);
        if (group_of[static_cast<std::size_t>(l)] < 0) {
            group_of[static_cast<std::size_t>(l)] = static_cast<int>(group_area.size());
            group_area.push_back(areas[static_cast<std::size_t>(l)]);
        }
    }
    const int ng = static_cast<int>(group_area.size());

    TransportOptions opt;
    opt.steps = cfg.transport_steps;
    opt.adapt = false;
    opt.rule = StepRule::midpoint;

    // Field pipeline samples.
    std::vector<double> retr_f(static_cast<std::size_t>(nl) * ns, 0.0);
    std::vector<double> angle_f(static_cast<std::size_t>(ns), 0.0);
    parallel_samples(ns, workers, [&](int i) {
        const NoiseSample W(grid, cfg.dim, sample_seed(cfg.seed_base, i));
        const SmoothedPrefixField F(W, cfg.j_fixed);
        for (int l = 0; l < nl; ++l) {
            const Mat U = holonomy(cfg.group_n, comps[static_cast<std::size_t>(l)], F, opt);
            retr_f[static_cast<std::size_t>(l) * ns + i] = re_trace(U);
            if (l == 0 && cfg.group_n == 2) angle_f[static_cast<std::size_t>(i)] = su2_angle(U);
        }
    });

    // Oracle samples per area group.
    std::vector<double> retr_o(static_cast<std::size_t>(ng) * ns, 0.0);
    std::vector<double> angle_o(static_cast<std::size_t>(ns), 0.0);
    for (int g = 0; g < ng; ++g) {
        const std::uint64_t obase = mix64(cfg.seed_base, 1000 + static_cast<std::uint64_t>(g));
        const bool primary = (g == group_of[0]);
        parallel_samples(ns, workers, [&](int i) {
            double angle = 0.0;
            retr_o[static_cast<std::size_t>(g) * ns + i] =
                oracle_retr(cfg.group_n, sample_seed(obase, i), cfg.oracle_steps, group_area[static_cast<std::size_t>(g)],
                            cfg.group_n == 2 ? &angle : nullptr);
            if (primary && cfg.group_n == 2) angle_o[static_cast<std::size_t>(i)] = angle;
        });
    }

    // Coupled step-halving consistency run on the primary area.
    std::vector<double> retr_fine(static_cast<std::size_t>(ns), 0.0);
    std::vector<double> retr_coarse(static_cast<std::size_t>(ns), 0.0);
    {
        const std::uint64_t cbase = mix64(cfg.seed_base, 2000);
        const double area0 = areas[0];
        parallel_samples(ns, workers, [&](int i) {
            const CoupledEndpoints e =
                oracle_coupled_retr(cfg.group_n, sample_seed(cbase, i), cfg.oracle_steps, area0);
            retr_fine[static_cast<std::size_t>(i)] = e.fine;
            retr_coarse[static_cast<std::size_t>(i)] = e.coarse;
        });
    }

    ExperimentReport rep;
    rep.experiment = cfg.name;
    rep.config_hash = cfg.canonical_hash();
    rep.seed_base = cfg.seed_base;

    const double zmax = cfg.tol_or("moment_z_max", 3.0);
    auto slice = [ns](const std::vector<double>& v, int idx) {
        return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(idx) * ns,
                                   v.begin() + static_cast<std::ptrdiff_t>(idx + 1) * ns);
    };
    auto squared = [](std::vector<double> v) {
        for (auto& x : v) x *= x;
        return v;
    };

    for (int l = 0; l < nl; ++l) {
        const auto xf = slice(retr_f, l);
        const auto xo = slice(retr_o, group_of[static_cast<std::size_t>(l)]);
        const MomentSummary mf = summarize(xf);
        const MomentSummary mo = summarize(xo);
        const MomentSummary qf = summarize(squared(xf));
        const MomentSummary qo = summarize(squared(xo));
        const std::string tag = "lasso" + std::to_string(l);
        rep.metrics.push_back(info_metric("mean_retr_" + tag, mf.mean, mf.se));
        rep.metrics.push_back(info_metric("mean_retr_oracle_" + tag, mo.mean, mo.se));
        rep.metrics.push_back(Metric::check("mean_z_" + tag,
                                            ratio_z(mf.mean, mo.mean, std::hypot(mf.se, mo.se)),
                                            0.0, zmax));
        rep.metrics.push_back(Metric::check("m2_z_" + tag,
                                            ratio_z(qf.mean, qo.mean, std::hypot(qf.se, qo.se)),
                                            0.0, zmax));
    }

    for (int l = 0; l < nl; ++l) {
        for (int l2 = l + 1; l2 < nl; ++l2) {
            if (std::abs(areas[static_cast<std::size_t>(l)] - areas[static_cast<std::size_t>(l2)]) > 1e-9)
                continue;
            const auto xa = slice(retr_f, l);
            const auto xb = slice(retr_f, l2);
            const MomentSummary ma = summarize(xa);
            const MomentSummary mb = summarize(xb);
            const MomentSummary qa = summarize(squared(xa));
            const MomentSummary qb = summarize(squared(xb));
            const std::string tag = std::to_string(l) + "_" + std::to_string(l2);
            rep.metrics.push_back(Metric::check(
                "shape_mean_z_" + tag, ratio_z(ma.mean, mb.mean, std::hypot(ma.se, mb.se)), 0.0,
                zmax));
            rep.metrics.push_back(Metric::check(
                "shape_m2_z_" + tag, ratio_z(qa.mean, qb.mean, std::hypot(qa.se, qb.se)), 0.0,
                zmax));
        }
    }

    if (cfg.group_n == 2) {
        if (areas[0] > 1e-12) {
            const double ks = ks_statistic(angle_f, angle_o);
            const double crit = ks_critical(static_cast<std::size_t>(ns),
                                            static_cast<std::size_t>(ns),
                                            cfg.tol_or("ks_alpha", 0.01));
            rep.metrics.push_back(Metric::check("ks_angle_lasso0", ks, 0.0, crit));
        } else {
            // Zero enclosed area: both laws are the point mass at the
            // identity, so compare angles by concentration instead of KS.
            double amax = 0.0;
            for (int i = 0; i < ns; ++i)
                amax = std::max({amax, angle_f[static_cast<std::size_t>(i)],
                                 angle_o[static_cast<std::size_t>(i)]});
            rep.metrics.push_back(Metric::check("angle_identity_max", amax, 0.0, 1e-5));
        }
    }

    {
        const MomentSummary sf = summarize(retr_fine);
        const MomentSummary sc = summarize(retr_coarse);
        rep.metrics.push_back(Metric::check("oracle_step_shift_z",
                                            ratio_z(sf.mean, sc.mean, sc.se), 0.0,
                                            cfg.tol_or("oracle_z_max", 1.0)));
    }

    rep.runtime_s = elapsed_s(t0);
    return rep;
}

// ---- experiment 5: independence across disjoint loop interiors -------------

ExperimentReport exp_independence(const ExperimentConfig& cfg, int workers) {
    const auto t0 = Clock::now();
    cfg.validate();
    if (cfg.lassos.size() < 2) cfg_fail("independence: needs at least two lassos");
    if (cfg.dim != su_dim(cfg.group_n))
        cfg_fail("independence: dim must equal n^2 - 1 for SU(n) transport");
    if (cfg.j_fixed < 0) cfg_fail("independence: j.fixed must be >= 0");
    const int nl = static_cast<int>(cfg.lassos.size());
    for (int l = 0; l < nl; ++l) {
        if (cfg.lassos[static_cast<std::size_t>(l)].enclosed_area() <= 0.0)
            cfg_fail("independence: lasso " + std::to_string(l) + " has no enclosed area");
        for (int l2 = l + 1; l2 < nl; ++l2)
            if (loop_interiors_overlap(cfg.lassos[static_cast<std::size_t>(l)].loop,
                                       cfg.lassos[static_cast<std::size_t>(l2)].loop))
                cfg_fail("independence: lassos " + std::to_string(l) + " and " +
                         std::to_string(l2) + " have overlapping loop interiors");
    }
    const TorusGrid& grid = cfg.grid;
    const int ns = cfg.samples;

    std::vector<Curve> comps;
    for (const auto& l : cfg.lassos) comps.push_back(l.composite());

    TransportOptions opt;
    opt.steps = cfg.transport_steps;
    opt.adapt = false;
    opt.rule = StepRule::midpoint;

    std::vector<double> retr(static_cast<std::size_t>(nl) * ns, 0.0);
    parallel_samples(ns, workers, [&](int i) {
        const NoiseSample W(grid, cfg.dim, sample_seed(cfg.seed_base, i));
        const SmoothedPrefixField F(W, cfg.j_fixed);
        for (int l = 0; l < nl; ++l)
            retr[static_cast<std::size_t>(l) * ns + i] =
                re_trace(holonomy(cfg.group_n, comps[static_cast<std::size_t>(l)], F, opt));
    });

    ExperimentReport rep;
    rep.experiment = cfg.name;
    rep.config_hash = cfg.canonical_hash();
    rep.seed_base = cfg.seed_base;

    auto slice = [ns, &retr](int idx) {
        return std::vector<double>(retr.begin() + static_cast<std::ptrdiff_t>(idx) * ns,
                                   retr.begin() + static_cast<std::ptrdiff_t>(idx + 1) * ns);
    };

    const double bound =
        cfg.tol_or("corr_bound_factor", 3.0) / std::sqrt(static_cast<double>(ns));
    for (int l = 0; l < nl; ++l) {
        const MomentSummary m = summarize(slice(l));
        rep.metrics.push_back(info_metric("mean_retr_lasso" + std::to_string(l), m.mean, m.se));
    }
    for (int l = 0; l < nl; ++l)
        for (int l2 = l + 1; l2 < nl; ++l2)
            rep.metrics.push_back(
                Metric::check("abs_corr_" + std::to_string(l) + "_" + std::to_string(l2),
                              std::abs(pearson(slice(l), slice(l2))), 0.0, bound));
    rep.metrics.push_back(Metric::check("self_pair_corr", pearson(slice(0), slice(0)),
                                        cfg.tol_or("self_corr_min", 0.99), 1.0 + 1e-9));

    rep.runtime_s = elapsed_s(t0);
    return rep;
}

// ---- dispatch and suite config ---------------------------------------------

ExperimentReport run_experiment(const ExperimentConfig& cfg, int workers) {
    if (cfg.name == "first_level_decay") return exp_first_level_decay(cfg, workers);
    if (cfg.name == "holder_first") return exp_holder_first(cfg, workers);
    if (cfg.name == "second_level") return exp_second_level(cfg, workers);
    if (cfg.name == "wilson_density") return exp_wilson_density(cfg, workers);
    if (cfg.name == "independence") return exp_independence(cfg, workers);
    cfg_fail("unknown experiment \"" + cfg.name + "\"");
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : experiments) arr.push_back(e.to_json());
    return nlohmann::json{{"seed", seed}, {"workers", workers}, {"experiments", arr}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j,
                               std::optional<std::uint64_t> seed_override) {
    check_keys(j, {"seed", "workers", "experiments"}, "run config");
    RunConfig rc;
    try {
        if (j.contains("seed")) rc.seed = j["seed"].get<std::uint64_t>();
        if (seed_override) rc.seed = *seed_override;
        if (j.contains("workers")) rc.workers = j["workers"].get<int>();
        if (!j.contains("experiments") || !j["experiments"].is_array() ||
            j["experiments"].empty())
            cfg_fail("run config needs a nonempty \"experiments\" array");
        std::set<std::string> seen;
        for (std::size_t idx = 0; idx < j["experiments"].size(); ++idx) {
            ExperimentConfig e = ExperimentConfig::from_json(
                j["experiments"][idx], mix64(rc.seed, static_cast<std::uint64_t>(idx)));
            if (!seen.insert(e.name).second)
                cfg_fail("duplicate experiment \"" + e.name + "\" in run config");
            rc.experiments.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& e) {
        cfg_fail(std::string("run config: ") + e.what());
    }
    if (rc.workers < 0) cfg_fail("workers must be >= 0");
    if (rc.workers == 0)
        rc.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    for (const auto& e : rc.experiments) e.validate();
    return rc;
}

}  // namespace ym2
