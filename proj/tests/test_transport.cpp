#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ym2/curves.hpp"
#include "ym2/liealg.hpp"
#include "ym2/noise.hpp"
#include "ym2/partition.hpp"
#include "ym2/roughpath.hpp"
#include "ym2/transport.hpp"

using namespace ym2;

namespace {

// Direct mode-sum evaluation of the smoothed field at a point (independent
// of the collapse machinery).
double field_at(const NoiseSample& W, const std::vector<double>& mult, int ch, double x,
                double y) {
    const TorusGrid& g = W.grid();
    cplx acc{0.0, 0.0};
    for (int ky = 0; ky < g.N; ++ky)
        for (int kx = 0; kx < g.N; ++kx) {
            double m = mult[static_cast<size_t>(ky) * g.N + kx];
            if (m == 0.0) continue;
            double arg = g.xi(kx) * x + g.xi(ky) * y;
            acc += W.coeff(ch, kx, ky) * m * cplx{std::cos(arg), std::sin(arg)};
        }
    return acc.real() / g.L;
}

struct Fit {
    double slope, r2;
};

Fit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
    const int n = static_cast<int>(xs.size());
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) mx += xs[i], my += ys[i];
    mx /= n, my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    return {sxy / sxx, syy > 0 ? sxy * sxy / (sxx * syy) : 1.0};
}

}  // namespace

TEST_CASE("flat directions leave the transport at the identity") {
    TorusGrid grid(8.0, 32);
    NoiseSample W(grid, 3, 11);
    SmoothedPrefixField F(W, 2);
    TransportPath p = parallel_transport(2, Curve::line(1.0, 2.5, 4.0, 2.5), F);
    for (const Mat& U : p.U) CHECK((U - Mat::Identity(2, 2)).norm() == 0.0);
    CHECK(p.nodes() >= (1 << 12) + 1);
    CHECK(line_integral_A(Curve::line(1.0, 2.5, 4.0, 2.5), F).norm() == 0.0);
}

TEST_CASE("transports are unitary and reverse to inverses") {
    TorusGrid grid(8.0, 64);
    NoiseSample W(grid, 3, 2024);
    SmoothedPrefixField F(W, 2);
    TransportOptions opt;
    opt.steps = 1 << 12;
    opt.adapt = false;  // mirrored grids cancel exactly only at equal counts
    Curve rect = Curve::rectangle_loop(2.3, 3.1, 1.4, 0.9);
    Curve tri = Curve::polygon_loop({{2.0, 2.0}, {4.5, 2.4}, {3.1, 4.0}});
    for (const Curve& c : {rect, tri}) {
        TransportOptions o = opt;
        if (!c.rectilinear()) o.steps = 512;  // skew fallback is mode-sum priced
        TransportPath p = parallel_transport(2, c, F, o);
        double worst = 0.0;
        for (const Mat& U : p.U) worst = std::max(worst, unitary_defect(U));
        CHECK(worst <= 1e-10);
        Mat ur = holonomy(2, c.reversed(), F, o);
        CHECK(dist_hs(ur * p.U.back(), Mat::Identity(2, 2)) <= 1e-8);
    }
    CHECK_THROWS_AS(parallel_transport(2, Curve::rectangle_loop(7.4, 1.0, 1.0, 1.0), F, opt),
                    std::invalid_argument);
    TransportOptions bad;
    bad.basis_map = {0, 1, 1};
    CHECK_THROWS_AS(parallel_transport(2, rect, F, bad), std::invalid_argument);
}

TEST_CASE("midpoint solver converges at second order") {
    TorusGrid grid(8.0, 64);
    NoiseSample W(grid, 3, 555);
    SmoothedPrefixField F(W, 3);
    Curve rect = Curve::rectangle_loop(2.0, 2.4, 1.8, 1.3);
    TransportOptions opt;
    opt.adapt = false;
    opt.steps = 1 << 14;
    Mat ref = holonomy(2, rect, F, opt);
    std::vector<double> logm, loge;
    for (int steps : {256, 512, 1024, 2048}) {
        opt.steps = steps;
        double err = dist_hs(holonomy(2, rect, F, opt), ref);
        CHECK(err > 0.0);
        logm.push_back(std::log2(steps));
        loge.push_back(std::log2(err));
    }
    Fit fit = ols(logm, loge);
    CHECK(fit.slope <= -1.8);
    CHECK(fit.r2 >= 0.9);
}

TEST_CASE("adaptive stepping meets the halving criterion") {
    TorusGrid grid(8.0, 64);
    NoiseSample W(grid, 3, 555);
    SmoothedPrefixField F(W, 1);
    Curve rect = Curve::rectangle_loop(2.5, 3.0, 1.2, 0.8);
    TransportOptions opt;  // adaptive midpoint by default
    opt.steps = 1 << 10;
    TransportPath p = parallel_transport(2, rect, F, opt);
    const int used = p.nodes() - 1;
    CHECK(used % 2 == 0);
    TransportOptions fixed;
    fixed.adapt = false;
    fixed.steps = used;
    Mat fine = holonomy(2, rect, F, fixed);
    CHECK(dist_hs(fine, p.U.back()) == 0.0);
    fixed.steps = used / 2;
    CHECK(dist_hs(holonomy(2, rect, F, fixed), fine) <= 1e-8);

    TransportOptions tiny;
    tiny.max_steps = 1 << 8;
    CHECK_THROWS_AS(parallel_transport(2, rect, F, tiny), std::runtime_error);
}

TEST_CASE("exact-generator rule is second order and shares the midpoint limit") {
    TorusGrid grid(8.0, 64);
    NoiseSample W(grid, 3, 555);
    SmoothedPrefixField F(W, 3);
    Curve rect = Curve::rectangle_loop(2.0, 2.4, 1.8, 1.3);
    TransportOptions mid;
    mid.adapt = false;
    mid.rule = StepRule::midpoint;
    TransportOptions ex = mid;
    ex.rule = StepRule::exact_vertical;

    mid.steps = 1 << 16;
    Mat ref = holonomy(2, rect, F, mid);
    std::vector<double> logm, loge;
    for (int steps : {512, 1024, 2048, 4096}) {
        ex.steps = steps;
        double err = dist_hs(holonomy(2, rect, F, ex), ref);
        CHECK(err > 0.0);
        logm.push_back(std::log2(steps));
        loge.push_back(std::log2(err));
    }
    // Second order against the midpoint-rule limit: both rules solve the
    // same flow, differing only in their O(dt^2) commutator constants.
    Fit fit = ols(logm, loge);
    CHECK(fit.slope <= -1.8);
    CHECK(fit.r2 >= 0.9);
}

TEST_CASE("line integrals match the rough first level on both solver routes") {
    TorusGrid grid(8.0, 32);
    NoiseSample W(grid, 3, 90210);
    SmoothedPrefixField F(W, 2);
    Curve rect = Curve::rectangle_loop(2.3, 2.9, 2.1, 1.1);
    Curve tri = Curve::polygon_loop({{2.2, 2.0}, {4.4, 2.6}, {3.0, 4.3}});
    for (const Curve& c : {rect, tri}) {
        RVec via_transport = line_integral_A(c, F);
        RVec via_lift = lift_smoothed(c, W, 2, refine_knots(c, 129)).node.back().x;
        CHECK((via_transport - via_lift).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
    // Window additivity.
    RVec whole = line_integral_A(rect, F);
    RVec split = line_integral_A(rect, F, 0.0, 0.37) + line_integral_A(rect, F, 0.37, 1.0);
    CHECK((whole - split).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("single-channel fields transport along the abelian closed form") {
    TorusGrid grid(8.0, 64);
    NoiseSample W1(grid, 1, 31337);
    SmoothedPrefixField F(W1, 2);
    Curve rect = Curve::rectangle_loop(2.4, 2.2, 1.7, 1.5);
    TransportOptions opt;  // adaptive midpoint
    opt.basis_map = {2};   // i*diag(1,-1)/sqrt(2): a commuting direction
    RVec coords = RVec::Zero(3);
    coords(2) = line_integral_A(rect, F)(0);
    Mat closed_form = exp_su(2, coords);
    CHECK(dist_hs(holonomy(2, rect, F, opt), closed_form) <= 1e-8);
    // With exact per-interval generators every step commutes, so the
    // product telescopes to the closed form at any fixed resolution.
    opt.adapt = false;
    opt.steps = 1 << 12;
    opt.rule = StepRule::exact_vertical;
    CHECK(dist_hs(holonomy(2, rect, F, opt), closed_form) <= 1e-10);
}

TEST_CASE("lasso transports factor through the stem conjugation") {
    TorusGrid grid(8.0, 64);
    NoiseSample W(grid, 3, 808);
    SmoothedPrefixField F(W, 2);
    Lasso lasso = Lasso::rectangle({2.5, 2.0}, {2.5, 3.2}, 1.1, 0.8);
    for (StepRule rule : {StepRule::midpoint, StepRule::exact_vertical}) {
        TransportOptions opt;
        opt.adapt = false;
        opt.steps = 1 << 14;
        opt.rule = rule;
        Mat uc = holonomy(2, lasso.composite(), F, opt);
        Mat us = holonomy(2, lasso.stem, F, opt);
        Mat ul = holonomy(2, lasso.loop, F, opt);
        CHECK(dist_hs(uc, us.adjoint() * ul * us) <= 1e-6);
    }
    // Degenerate lasso: a zero-area loop leaves only the stem conjugation,
    // which cancels to the identity.
    Lasso flat = Lasso::rectangle({2.5, 2.0}, {2.5, 3.2}, 0.9, 0.0);
    CHECK(flat.loop.signed_area() == 0.0);
    TransportOptions opt;
    opt.adapt = false;
    opt.steps = 1 << 13;
    CHECK(dist_hs(holonomy(2, flat.composite(), F, opt), Mat::Identity(2, 2)) <= 1e-6);
}

TEST_CASE("splitting a loop across a horizontal cut composes transports") {
    TorusGrid grid(8.0, 64);
    NoiseSample W(grid, 3, 4321);
    SmoothedPrefixField F(W, 2);
    const double x0 = 2.1, y0 = 2.3, w = 1.5, h1 = 0.7, h2 = 0.5;
    Curve whole = Curve::rectangle_loop(x0, y0, w, h1 + h2);
    Curve bottom = Curve::rectangle_loop(x0, y0, w, h1);
    Curve top = Curve::rectangle_loop(x0, y0 + h1, w, h2);
    Curve stem = Curve::line(x0, y0, x0, y0 + h1);
    TransportOptions opt;
    opt.adapt = false;
    opt.steps = 1 << 14;
    Mat uw = holonomy(2, whole, F, opt);
    Mat ub = holonomy(2, bottom, F, opt);
    Mat ut = holonomy(2, top, F, opt);
    Mat us = holonomy(2, stem, F, opt);
    CHECK(dist_hs(uw, us.adjoint() * ut * us * ub) <= 1e-6);
}

TEST_CASE("small loops recover the smoothed field at the corner") {
    TorusGrid grid(8.0, 32);
    NoiseSample W(grid, 3, 777);
    const int j = 1;
    SmoothedPrefixField F(W, j);
    std::vector<double> chi = make_chi_table(grid, j);
    const double x0 = 3.1, y0 = 4.2;
    RVec fval(3);
    for (int ch = 0; ch < 3; ++ch) fval(ch) = field_at(W, chi, ch, x0, y0);
    Mat target = algebra_matrix(2, fval);
    TransportOptions opt;
    opt.adapt = false;
    opt.steps = 1 << 11;
    std::vector<double> logs, loge;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        Mat U = holonomy(2, Curve::rectangle_loop(x0, y0, eps, eps), F, opt);
        Mat rate = (U - Mat::Identity(2, 2)) / (eps * eps);
        logs.push_back(std::log2(eps));
        loge.push_back(std::log2((rate - target).norm()));
    }
    Fit fit = ols(logs, loge);
    CHECK(fit.slope >= 0.9);
    CHECK(fit.r2 >= 0.9);
}

TEST_CASE("transport gaps shrink as the band index grows") {
    TorusGrid grid(8.0, 64);
    NoiseSample W(grid, 3, 60221023);
    Curve rect = Curve::rectangle_loop(2.2, 2.5, 1.6, 1.2);
    TransportOptions opt;
    opt.adapt = false;
    opt.steps = 1 << 11;
    SmoothedPrefixField f1(W, 1), f2(W, 2), f3(W, 3);
    TransportGap g12 = transport_gap(2, rect, f1, f2, opt);
    CHECK(g12.sup_hs > 0.0);
    CHECK(g12.holder > 0.0);
    TransportGap self = transport_gap(2, rect, f3, f3, opt);
    CHECK(self.sup_hs == 0.0);
    CHECK(self.holder <= 1e-7);
}

TEST_CASE("su(2) Brownian oracle: determinism, unitarity and heat-kernel moments") {
    std::vector<double> t(257), area(257);
    for (int k = 0; k < 257; ++k) {
        t[k] = k / 256.0;
        area[k] = t[k];  // unit total area
    }
    TransportPath a = lie_bm_oracle(2, 99, t, area);
    TransportPath b = lie_bm_oracle(2, 99, t, area);
    TransportPath c = lie_bm_oracle(2, 100, t, area);
    double worst = 0.0;
    for (int k = 0; k < a.nodes(); ++k) {
        worst = std::max(worst, unitary_defect(a.U[k]));
        CHECK(dist_hs(a.U[k], b.U[k]) == 0.0);
    }
    CHECK(worst <= 1e-12);
    CHECK(dist_hs(a.U.back(), c.U.back()) > 1e-3);

    std::vector<double> bad_area = area;
    bad_area[0] = 0.1;
    CHECK_THROWS_AS(lie_bm_oracle(2, 1, t, bad_area), std::invalid_argument);
    bad_area = area;
    bad_area[100] = bad_area[99] - 0.01;
    CHECK_THROWS_AS(lie_bm_oracle(2, 1, t, bad_area), std::invalid_argument);

    // Heat-kernel character decay at unit area: E tr U = 2 exp(-3/4) in the
    // defining representation and E (|tr U|^2 - 1) = 3 exp(-2) in the
    // adjoint one (Laplace eigenvalues 3/4 and 2 on SU(2)).
    const int nsamp = 3000;
    std::vector<double> tg(1025), ag(1025);
    for (int k = 0; k < 1025; ++k) tg[k] = ag[k] = k / 1024.0;
    double m1 = 0, m2 = 0, s1 = 0, s2 = 0;
    for (int s = 0; s < nsamp; ++s) {
        Mat U = lie_bm_oracle(2, 1000 + s, tg, ag).U.back();
        double f = re_trace(U), ad = adjoint_character(U);
        m1 += f, m2 += ad, s1 += f * f, s2 += ad * ad;
    }
    m1 /= nsamp, m2 /= nsamp;
    double se1 = std::sqrt((s1 / nsamp - m1 * m1) / nsamp);
    double se2 = std::sqrt((s2 / nsamp - m2 * m2) / nsamp);
    CHECK(std::abs(m1 - 2.0 * std::exp(-0.75)) <= 4.0 * se1);
    CHECK(std::abs(m2 - 3.0 * std::exp(-2.0)) <= 4.0 * se2);

    // Per-step log-increment variance matches the area increments.
    double sum2 = 0.0;
    int cnt = 0;
    for (int s = 0; s < 50; ++s) {
        TransportPath p = lie_bm_oracle(2, 5000 + s, t, area);
        for (int k = 0; k + 1 < p.nodes(); ++k) {
            Mat V = p.U[k].adjoint() * p.U[k + 1];
            RVec coords = algebra_coeffs(2, 0.5 * (V - V.adjoint()));
            sum2 += coords.squaredNorm();
            cnt += 3;
        }
    }
    const double da = 1.0 / 256.0;
    double varhat = sum2 / cnt;
    double se_var = da * std::sqrt(2.0 / cnt);
    CHECK(std::abs(varhat - da) <= 4.0 * se_var + 0.02 * da);
}
