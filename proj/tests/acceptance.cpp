// Acceptance gate: eleven criteria covering the algebra/group layer, the
// dyadic partition, the noise isometry, the swept-region calculus, Besov
// exponents, the statistical experiments at their shipped defaults, the
// transport solver and end-to-end reproducibility.
//
// Each criterion prints one "[ACCEPT] criterion N: PASS|FAIL" line after a
// short indented trace of what was measured; the process exits 0 only if
// every criterion passes.  All tolerances are pinned in this file (or, for
// the shipped experiment defaults, in the experiment metric bounds).

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ym2/besov.hpp"
#include "ym2/curves.hpp"
#include "ym2/ecal.hpp"
#include "ym2/experiments.hpp"
#include "ym2/fourier.hpp"
#include "ym2/grid.hpp"
#include "ym2/liealg.hpp"
#include "ym2/noise.hpp"
#include "ym2/partition.hpp"
#include "ym2/report.hpp"
#include "ym2/rng.hpp"
#include "ym2/roughpath.hpp"
#include "ym2/stats.hpp"
#include "ym2/transport.hpp"

using namespace ym2;
namespace fs = std::filesystem;

namespace {

bool g_ok = true;  // current criterion accumulator

void reset() { g_ok = true; }

void require(bool ok, const char* fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    std::printf("    %s ", ok ? "[ ok ]" : "[FAIL]");
    std::vprintf(fmt, ap);
    std::printf("\n");
    va_end(ap);
    if (!ok) g_ok = false;
}

bool verdict(int n, const char* title) {
    std::printf("[ACCEPT] criterion %d: %s   (%s)\n", n, g_ok ? "PASS" : "FAIL", title);
    std::fflush(stdout);
    return g_ok;
}

// ---------------------------------------------------------------------------
// 1. Algebra/group suite: basis orthonormality, exponential unitarity and
//    determinant (<= 1e-10), Chen relation and second-level symmetric-part
//    identity (<= 1e-10 relative) on 10^3 random instances.
// ---------------------------------------------------------------------------
bool criterion1() {
    reset();
    const double tol = 1e-10;
    for (int n : {2, 3}) {
        const auto& basis = su_basis(n);
        double worst = 0.0;
        for (std::size_t a = 0; a < basis.size(); ++a)
            for (std::size_t b = 0; b < basis.size(); ++b)
                worst = std::max(worst,
                                 std::abs(hs_inner(basis[a], basis[b]) - (a == b ? 1.0 : 0.0)));
        for (const Mat& B : basis) {
            worst = std::max(worst, std::abs(B.trace()));
            worst = std::max(worst, (B + B.adjoint()).norm());
        }
        require(worst <= tol, "su(%d) basis orthonormal/traceless/anti-Hermitian, defect %.2e", n,
                worst);

        Rng rng(101 + static_cast<std::uint64_t>(n));
        double wu = 0.0, wd = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const Mat U = exp_su(n, random_algebra(n, rng, 2.0));
            wu = std::max(wu, unitary_defect(U));
            wd = std::max(wd, std::abs(U.determinant() - std::complex<double>(1.0, 0.0)));
        }
        require(wu <= tol && wd <= tol,
                "exp_su(%d): 1000 instances, unitarity %.2e, |det-1| %.2e", n, wu, wd);
    }

    Rng rng(202);
    double chen = 0.0;
    int group_like = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<RVec> pts;
        for (int k = 0; k < 3; ++k) {
            RVec p(3);
            for (int d = 0; d < 3; ++d) p(d) = 2.0 * rng.next_uniform() - 1.0;
            pts.push_back(p);
        }
        const Level2Path sig = sig_polyline({0.0, 0.5, 1.0}, pts);
        const Level2Increment lhs = tensor_mul(sig.increment(0, 1), sig.increment(1, 2));
        const Level2Increment rhs = sig.increment(0, 2);
        const double scale = 1.0 + rhs.x.norm() + rhs.xx.norm();
        chen = std::max(chen, std::max((lhs.x - rhs.x).norm(), (lhs.xx - rhs.xx).norm()) / scale);
        if (is_group_like(rhs, 1e-10)) ++group_like;
    }
    require(chen <= tol, "Chen relation on 1000 random polylines, relative defect %.2e", chen);
    require(group_like == 1000, "symmetric part xx == x(x)x/2 on %d/1000 lifts", group_like);
    return verdict(1, "algebra and group suite");
}

// ---------------------------------------------------------------------------
// 2. Partition suite: the support and flatness constraints of the dyadic
//    multipliers hold pointwise on the lattice; partition-of-unity residual
//    <= 1e-12; at most two blocks cover any mode.
// ---------------------------------------------------------------------------
bool criterion2() {
    reset();
    const TorusGrid grid(8.0, 512);
    const int jm = grid.j_max();
    const double rmax = std::sqrt(2.0) * grid.nyquist();
    int b_hi = 0;
    while (std::ldexp(1.0, b_hi + 1) < (7.0 / 6.0) * rmax) ++b_hi;

    double supp_defect = 0.0, flat_defect = 0.0, pou = 0.0;
    int worst_cover = 0;
    for (int iy = 0; iy < grid.N; ++iy) {
        for (int ix = 0; ix < grid.N; ++ix) {
            const double r = std::hypot(grid.xi(ix), grid.xi(iy));
            int cover = chi0(r) > 1e-14 ? 1 : 0;
            double total = chi_block(0, r);  // = chi0(r), block -1
            for (int b = 0; b <= b_hi; ++b) {
                const double v = rho_block(b, r);
                const double lo = (6.0 / 7.0) * std::ldexp(1.0, b);
                const double hi = std::ldexp(1.0, b + 1);
                if (v > 1e-14) {
                    ++cover;
                    if (r < lo || r > hi)
                        supp_defect = std::max(supp_defect, std::max(lo - r, r - hi));
                }
                if (r >= std::ldexp(1.0, b) && r <= (12.0 / 7.0) * std::ldexp(1.0, b))
                    flat_defect = std::max(flat_defect, std::abs(v - 1.0));
                total += v;
            }
            pou = std::max(pou, std::abs(total - 1.0));
            worst_cover = std::max(worst_cover, cover);
        }
    }
    require(supp_defect <= 0.0, "block supports confined to [6/7 2^b, 2^{b+1}], escape %.2e",
            supp_defect);
    require(flat_defect <= 1e-12, "blocks flat (==1) on [2^b, 12/7 2^b], defect %.2e",
            flat_defect);
    require(pou <= 1e-12, "partition of unity over all %d modes, residual %.2e", grid.N * grid.N,
            pou);
    require(worst_cover <= 2, "at most 2 blocks per mode (max %d)", worst_cover);

    // Cumulative multipliers: flat inside, vanishing outside, and the
    // lattice tables agree with the pointwise evaluations.
    double cum = 0.0, table_gap = 0.0;
    for (int j = 0; j <= jm; ++j) {
        const std::vector<double> chi = make_chi_table(grid, j);
        const double R = std::ldexp(1.0, j);
        for (int iy = 0; iy < grid.N; ++iy)
            for (int ix = 0; ix < grid.N; ++ix) {
                const double r = std::hypot(grid.xi(ix), grid.xi(iy));
                const double v = chi[static_cast<std::size_t>(iy) * grid.N + ix];
                if (r <= (6.0 / 7.0) * R) cum = std::max(cum, std::abs(v - 1.0));
                if (r >= R) cum = std::max(cum, std::abs(v));
                table_gap = std::max(table_gap, std::abs(v - chi_block(j, r)));
            }
    }
    require(cum <= 1e-12, "chi_j == 1 below 6/7 2^j and == 0 above 2^j, defect %.2e", cum);
    require(table_gap <= 1e-12, "lattice tables match pointwise evaluation, gap %.2e", table_gap);
    return verdict(2, "dyadic partition suite");
}

// ---------------------------------------------------------------------------
// 3. Noise isometry: empirical Gram matrix of smoothed sweep pairings vs the
//    exact L^2 Gram, every entry within 4 s.e. at 10^4 seeds.  The diagonal
//    is the variance identity Var X_w = ||S_j E_c 1_w||^2.
// ---------------------------------------------------------------------------
bool criterion3() {
    reset();
    const TorusGrid grid(8.0, 64);
    const int j = 3;
    const Curve c = Curve::line(4.0, 2.0, 4.0, 6.0);
    const std::vector<double> chi = make_chi_table(grid, j);
    const std::vector<std::pair<double, double>> wins{{0.10, 0.40}, {0.20, 0.60}, {0.50, 0.90}};

    std::vector<std::vector<cplx>> spec;
    for (const auto& w : wins) spec.push_back(sweep_spectrum(grid, c, w.first, w.second));

    // Exact Gram from the filtered spectra (componentwise convention).
    const std::size_t nw = wins.size();
    std::vector<std::vector<double>> gram(nw, std::vector<double>(nw, 0.0));
    for (std::size_t a = 0; a < nw; ++a)
        for (std::size_t b = 0; b < nw; ++b) {
            double s = 0.0;
            for (std::size_t q = 0; q < spec[a].size(); ++q)
                s += chi[q] * chi[q] * (std::conj(spec[a][q]) * spec[b][q]).real();
            gram[a][b] = s;
        }

    const int seeds = 10000;
    std::vector<std::vector<double>> prod(nw * nw, std::vector<double>(seeds));
    for (int sgn = 0; sgn < seeds; ++sgn) {
        const NoiseSample W(grid, 1, sample_seed(900, static_cast<std::uint64_t>(sgn)));
        double x[3];
        for (std::size_t a = 0; a < nw; ++a) x[a] = W.pair_spectrum(spec[a], &chi)(0);
        for (std::size_t a = 0; a < nw; ++a)
            for (std::size_t b = 0; b < nw; ++b)
                prod[a * nw + b][static_cast<std::size_t>(sgn)] = x[a] * x[b];
    }
    for (std::size_t a = 0; a < nw; ++a)
        for (std::size_t b = a; b < nw; ++b) {
            const MomentSummary m = summarize(prod[a * nw + b]);
            const double z = std::abs(m.mean - gram[a][b]) / m.se;
            require(z <= 4.0,
                    "%s (%zu,%zu): empirical %.5f vs exact %.5f, z = %.2f (4 s.e. bound)",
                    a == b ? "variance identity" : "Gram entry", a, b, m.mean, gram[a][b], z);
        }
    return verdict(3, "noise isometry at 10^4 seeds");
}

// ---------------------------------------------------------------------------
// 4. Swept-region calculus: integer range, additivity and reversal
//    antisymmetry exact; adjoint identity within 1e-3 relative at N = 512.
// ---------------------------------------------------------------------------
bool criterion4() {
    reset();
    {
        const TorusGrid grid(8.0, 128);
        // Corners kept off the grid rows so no node needs half-weights.
        const Curve loop = Curve::rectangle_loop(2.11, 2.03, 2.53, 2.96);
        const GridField f = apply_Ec(grid, loop, SteppedTimeFn::constant(1.0));
        double int_defect = 0.0, mn = 1e300, mx = -1e300;
        for (double v : f.data()) {
            int_defect = std::max(int_defect, std::abs(v - std::round(v)));
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        require(int_defect <= 1e-12 && mn == 0.0 && mx == 1.0,
                "closed anticlockwise loop sweeps an exact {0,1} field (defect %.2e)",
                int_defect);

        const Curve zig = Curve({{0.0, 2.8, 2.2}, {0.4, 3.6, 3.9}, {1.0, 3.1, 5.7}});
        const GridField ab = apply_Ec(grid, zig, SteppedTimeFn::indicator(0.15, 0.85));
        const GridField a1 = apply_Ec(grid, zig, SteppedTimeFn::indicator(0.15, 0.55));
        const GridField a2 = apply_Ec(grid, zig, SteppedTimeFn::indicator(0.55, 0.85));
        double add = 0.0;
        for (std::size_t q = 0; q < ab.data().size(); ++q)
            add = std::max(add, std::abs(ab.data()[q] - a1.data()[q] - a2.data()[q]));
        require(add <= 1e-12, "window additivity on a skew polyline, defect %.2e", add);

        const GridField fwd = apply_Ec(grid, zig, SteppedTimeFn::constant(1.0));
        const GridField rev = apply_Ec(grid, zig.reversed(), SteppedTimeFn::constant(1.0));
        double asym = 0.0;
        for (std::size_t q = 0; q < fwd.data().size(); ++q)
            asym = std::max(asym, std::abs(fwd.data()[q] + rev.data()[q]));
        require(asym <= 1e-12, "reversal antisymmetry, defect %.2e", asym);
    }
    {
        const TorusGrid grid(8.0, 512);
        const NoiseSample W(grid, 1, 321);
        const std::vector<double> chi = make_chi_table(grid, 2);
        const GridField smooth = W.realize(&chi);
        const Curve zig = Curve({{0.0, 3.0, 2.0}, {0.35, 4.6, 3.1}, {0.7, 3.4, 4.4}, {1.0, 3.9, 6.0}});
        const SteppedTimeFn h = SteppedTimeFn::indicator(0.2, 0.8);
        const GridField E = apply_Ec(grid, zig, h);
        const double lhs = GridField::inner_l2(smooth, 0, E, 0);
        const double rhs = ehat(zig, smooth, 0, h);
        const double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-12);
        require(rel <= 1e-3, "adjoint identity <H, E_c h> vs ehat at N=512: %.6f vs %.6f (rel %.2e)",
                lhs, rhs, rel);
    }
    return verdict(4, "swept-region calculus");
}

// ---------------------------------------------------------------------------
// 5. Besov exponents: dyadic-block L^2 slope of a unit-square indicator is
//    -1/2 +- 0.1 over the mid band; the B^{0.4}_{2,inf} norm of a swept
//    window grows like (t-s)^{0.1} with slope >= 0.08 and R^2 >= 0.9.
// ---------------------------------------------------------------------------
bool criterion5() {
    reset();
    const TorusGrid grid(8.0, 512);
    {
        GridField sq(grid, 1);
        for (int iy = 0; iy < grid.N; ++iy)
            for (int ix = 0; ix < grid.N; ++ix)
                sq.at(0, ix, iy) = (grid.node(ix) > 3.005 && grid.node(ix) < 4.005 &&
                                    grid.node(iy) > 3.005 && grid.node(iy) < 4.005)
                                       ? 1.0
                                       : 0.0;
        const BesovProfile prof = besov_norm(sq, 0, 0.0, 2.0, 2, grid.j_max());
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < prof.j.size(); ++i) {
            xs.push_back(prof.j[i]);
            ys.push_back(std::log2(prof.block_lp[i]));
        }
        const OlsFit f = ols_fit(xs, ys);
        require(f.slope >= -0.6 && f.slope <= -0.4 && f.r2 >= 0.9,
                "unit-square block slope %.3f in [-0.6,-0.4], R^2 %.3f (j = %d..%d)", f.slope,
                f.r2, prof.j.front(), prof.j.back());
    }
    {
        const Curve c = Curve::line(4.0, 2.0, 4.0, 6.0);
        std::vector<double> xs, ys;
        for (int k = 0; k <= 5; ++k) {
            const double dt = std::ldexp(1.0 / 64.0, k);
            const auto spec = sweep_spectrum(grid, c, 0.5, 0.5 + dt);
            const BesovProfile p = besov_norm_spectrum(grid, spec, 0.4);
            xs.push_back(std::log2(dt));
            ys.push_back(std::log2(p.value));
        }
        const OlsFit f = ols_fit(xs, ys);
        require(f.slope >= 0.08 && f.r2 >= 0.9,
                "swept-window B^{0.4} slope %.3f >= 0.08, R^2 %.3f", f.slope, f.r2);
    }
    return verdict(5, "Besov exponents");
}

// ---------------------------------------------------------------------------
// 6/7/9/10. Statistical experiments at their shipped defaults (seed 1, the
// same configuration as configs/default.json): the criterion passes exactly
// when every metric of the experiment report passes.
// ---------------------------------------------------------------------------
bool criterion_experiment(int num, const char* name, const char* title) {
    reset();
    ExperimentConfig cfg = default_experiment(name);
    cfg.seed_base = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport rep = run_experiment(cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int passed = 0;
    for (const auto& m : rep.metrics) {
        if (m.pass) {
            ++passed;
        } else {
            require(false, "metric %s: estimate %.6g outside [%.6g, %.6g]", m.name.c_str(),
                    m.estimate, m.lo, m.hi);
        }
    }
    require(passed == static_cast<int>(rep.metrics.size()), "%s: %d/%zu metrics pass (%.0fs)",
            name, passed, rep.metrics.size(), secs);
    return verdict(num, title);
}

// ---------------------------------------------------------------------------
// 8. Transport suite: unitarity drift <= 1e-10; solver order >= 1.8; abelian
//    closed form <= 1e-8; lasso factorization and split identity <= 1e-6
//    same-sample; small-area rate converges at first order to the field.
// ---------------------------------------------------------------------------
bool criterion8() {
    reset();
    const TorusGrid grid(8.0, 64);
    const NoiseSample W(grid, 3, 555);
    const SmoothedPrefixField F(W, 3);

    {
        TransportOptions opt;
        opt.adapt = false;
        opt.steps = 1 << 12;
        double worst = 0.0;
        for (const Mat& U : parallel_transport(2, Curve::rectangle_loop(2.0, 2.4, 1.8, 1.3), F,
                                               opt)
                                .U)
            worst = std::max(worst, unitary_defect(U));
        TransportOptions skew = opt;
        skew.steps = 512;
        for (const Mat& U :
             parallel_transport(2, Curve::polygon_loop({{2.0, 2.0}, {4.5, 2.4}, {3.1, 4.0}}), F,
                                skew)
                 .U)
            worst = std::max(worst, unitary_defect(U));
        require(worst <= 1e-10, "unitarity drift %.2e over rectilinear and skew transports",
                worst);
    }
    {
        const Curve rect = Curve::rectangle_loop(2.0, 2.4, 1.8, 1.3);
        TransportOptions opt;
        opt.adapt = false;
        opt.steps = 1 << 14;
        const Mat ref = holonomy(2, rect, F, opt);
        std::vector<double> xs, ys;
        for (int steps : {256, 512, 1024, 2048}) {
            opt.steps = steps;
            xs.push_back(std::log2(steps));
            ys.push_back(std::log2(dist_hs(holonomy(2, rect, F, opt), ref)));
        }
        const OlsFit f = ols_fit(xs, ys);
        require(f.slope <= -1.8 && f.r2 >= 0.9, "solver order %.2f (>= 1.8), R^2 %.3f", -f.slope,
                f.r2);
    }
    {
        const NoiseSample W1(grid, 1, 31337);
        const SmoothedPrefixField F1(W1, 2);
        const Curve rect = Curve::rectangle_loop(2.4, 2.2, 1.7, 1.5);
        TransportOptions opt;  // adaptive midpoint
        opt.basis_map = {2};   // commuting diagonal direction
        RVec coords = RVec::Zero(3);
        coords(2) = line_integral_A(rect, F1)(0);
        const double gap = dist_hs(holonomy(2, rect, F1, opt), exp_su(2, coords));
        require(gap <= 1e-8, "abelian closed form gap %.2e", gap);
    }
    {
        const Lasso lasso = Lasso::rectangle({2.5, 2.0}, {2.5, 3.2}, 1.1, 0.8);
        TransportOptions opt;
        opt.adapt = false;
        opt.steps = 1 << 14;
        const Mat uc = holonomy(2, lasso.composite(), F, opt);
        const Mat us = holonomy(2, lasso.stem, F, opt);
        const Mat ul = holonomy(2, lasso.loop, F, opt);
        const double gap = dist_hs(uc, us.adjoint() * ul * us);
        require(gap <= 1e-6, "lasso factorization through stem conjugation, gap %.2e", gap);

        const double x0 = 2.1, y0 = 2.3, w = 1.5, h1 = 0.7, h2 = 0.5;
        const Mat uw = holonomy(2, Curve::rectangle_loop(x0, y0, w, h1 + h2), F, opt);
        const Mat ub = holonomy(2, Curve::rectangle_loop(x0, y0, w, h1), F, opt);
        const Mat ut = holonomy(2, Curve::rectangle_loop(x0, y0 + h1, w, h2), F, opt);
        const Mat usp = holonomy(2, Curve::line(x0, y0, x0, y0 + h1), F, opt);
        const double sgap = dist_hs(uw, usp.adjoint() * ut * usp * ub);
        require(sgap <= 1e-6, "split identity across a horizontal cut, gap %.2e", sgap);
    }
    {
        const TorusGrid g32(8.0, 32);
        const NoiseSample Ws(g32, 3, 777);
        const int j = 1;
        const SmoothedPrefixField Fs(Ws, j);
        const std::vector<double> chi = make_chi_table(g32, j);
        const double x0 = 3.1, y0 = 4.2;
        RVec fval(3);
        for (int ch = 0; ch < 3; ++ch) {
            cplx acc{0.0, 0.0};
            for (int ky = 0; ky < g32.N; ++ky)
                for (int kx = 0; kx < g32.N; ++kx) {
                    const double m = chi[static_cast<std::size_t>(ky) * g32.N + kx];
                    if (m == 0.0) continue;
                    const double arg = g32.xi(kx) * x0 + g32.xi(ky) * y0;
                    acc += Ws.coeff(ch, kx, ky) * m * cplx{std::cos(arg), std::sin(arg)};
                }
            fval(ch) = acc.real() / g32.L;
        }
        const Mat target = algebra_matrix(2, fval);
        TransportOptions opt;
        opt.adapt = false;
        opt.steps = 1 << 11;
        std::vector<double> xs, ys;
        for (double eps : {0.4, 0.2, 0.1, 0.05}) {
            const Mat U = holonomy(2, Curve::rectangle_loop(x0, y0, eps, eps), Fs, opt);
            const Mat rate = (U - Mat::Identity(2, 2)) / (eps * eps);
            xs.push_back(std::log2(eps));
            ys.push_back(std::log2((rate - target).norm()));
        }
        const OlsFit f = ols_fit(xs, ys);
        require(f.slope >= 0.9 && f.r2 >= 0.9,
                "small-area rate converges to the field, order %.2f, R^2 %.3f", f.slope, f.r2);
    }
    return verdict(8, "transport suite");
}

// ---------------------------------------------------------------------------
// 11. Reproducibility: identical config + seed give byte-identical reports
//     (any worker count); the command-line tool honours the 0/1/2 exit-code
//     contract.
// ---------------------------------------------------------------------------
bool criterion11() {
    reset();
    ExperimentConfig c = default_experiment("wilson_density");
    c.grid = TorusGrid(4.0, 64);
    c.samples = 4;
    c.j_lo = 0;
    c.j_hi = 4;
    c.j_fixed = 4;
    c.transport_steps = 1024;
    c.oracle_steps = 64;
    c.seed_base = 5;
    c.lassos = {Lasso::rectangle({1.5, 1.5}, {1.5, 1.6}, 0.4, 0.0)};
    const std::string a = run_experiment(c, 1).to_string();
    const std::string b = run_experiment(c, 1).to_string();
    const std::string d = run_experiment(c, 3).to_string();
    require(a == b, "rerun with identical config+seed is byte-identical (%zu bytes)", a.size());
    require(a == d, "worker count does not change report bytes");

    const char* bin = std::getenv("YM2LAB_BIN");
    if (!bin) {
        require(false, "YM2LAB_BIN not set; cannot exercise the exit-code contract");
        return verdict(11, "reproducibility and exit codes");
    }
    const fs::path tmp = fs::temp_directory_path() / "ym2_accept_cli";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    auto write = [&](const char* leaf, const std::string& text) {
        std::ofstream f(tmp / leaf);
        f << text;
        return (tmp / leaf).string();
    };
    auto run = [&](const std::string& args) {
        const std::string cmd =
            std::string(bin) + " " + args + " > " + (tmp / "log").string() + " 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    RunConfig pass_rc;
    pass_rc.seed = 5;
    pass_rc.experiments = {c};
    const std::string pass_cfg = write("pass.json", pass_rc.to_json().dump());
    ExperimentConfig h = default_experiment("holder_first");
    h.grid = TorusGrid(4.0, 64);
    h.samples = 5;
    h.j_lo = 0;
    h.j_hi = 4;
    h.j_fixed = 3;
    h.tol = {{"exponent_min", 5.0}};
    RunConfig fail_rc;
    fail_rc.experiments = {h};
    const std::string fail_cfg = write("fail.json", fail_rc.to_json().dump());
    const std::string broken = write("broken.json", "{ \"seed\": ");

    const int e0 = run("run " + pass_cfg + " --out " + (tmp / "out0").string());
    const int e1 = run("run " + fail_cfg + " --out " + (tmp / "out1").string());
    const int e2 = run("run " + broken);
    require(e0 == 0, "passing config exits 0 (got %d)", e0);
    require(e1 == 1, "failing metric exits 1 (got %d)", e1);
    require(e2 == 2, "malformed config exits 2 (got %d)", e2);

    const int e0b = run("run " + pass_cfg + " --out " + (tmp / "out0b").string());
    auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    require(e0b == 0 && slurp(tmp / "out0" / "report_wilson_density.json") ==
                            slurp(tmp / "out0b" / "report_wilson_density.json"),
            "tool-level reports byte-identical across runs");
    fs::remove_all(tmp);
    return verdict(11, "reproducibility and exit codes");
}

}  // namespace

int main() {
    std::printf("acceptance gate: 11 criteria\n");
    int pass = 0;
    pass += criterion1();
    pass += criterion2();
    pass += criterion3();
    pass += criterion4();
    pass += criterion5();
    pass += criterion_experiment(6, "first_level_decay",
                                 "band truncation decay and window exponent");
    pass += criterion_experiment(7, "second_level", "second-level exponent and Cauchy decay");
    pass += criterion8();
    pass += criterion_experiment(9, "wilson_density", "holonomy law vs group oracle");
    pass += criterion_experiment(10, "independence", "disjoint-interior independence");
    pass += criterion11();
    std::printf("acceptance: %d/11 criteria pass\n", pass);
    return pass == 11 ? 0 : 1;
}
