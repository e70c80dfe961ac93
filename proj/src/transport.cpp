#include "ym2/transport.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

#include "ym2/partition.hpp"

namespace ym2 {

SmoothedPrefixField::SmoothedPrefixField(const NoiseSample& W, int j)
    : grid_(W.grid()), dim_(W.dim()), j_(j), band_(&cumulative_band(W.grid(), j)) {
    z_.resize(dim_);
    for (int ch = 0; ch < dim_; ++ch) W.coeffs_at(ch, band_->modes, z_[ch]);
}

double SmoothedPrefixField::prefix(int ch, double a, double y) const {
    if (ch < 0 || ch >= dim_) throw std::out_of_range("SmoothedPrefixField::prefix: channel");
    std::vector<cplx> tau = prefix_tau(grid_, a);
    const int N = grid_.N;
    // Phase table along ky, then one pass over the active modes.
    std::vector<cplx> phase(N);
    for (int ky = 0; ky < N; ++ky) {
        double arg = grid_.xi(ky) * y;
        phase[ky] = cplx{std::cos(arg), std::sin(arg)};
    }
    const std::vector<cplx>& z = z_[ch];
    double acc = 0.0;
    for (size_t m = 0; m < band_->modes.size(); ++m) {
        const std::uint32_t idx = band_->modes[m];
        const int kx = static_cast<int>(idx % N), ky = static_cast<int>(idx / N);
        acc += (z[m] * band_->mult[idx] * tau[kx] * phase[ky]).real();
    }
    return acc / grid_.L;
}

const std::vector<RowPrefixFn>& SmoothedPrefixField::row(double a) const {
    auto [it, fresh] = cache_.try_emplace(std::bit_cast<std::uint64_t>(a));
    if (fresh) {
        std::vector<cplx> tau = prefix_tau(grid_, a);
        it->second.resize(dim_);
        std::vector<cplx> rowspec;
        for (int ch = 0; ch < dim_; ++ch) {
            rowspec.assign(grid_.N, cplx{0.0, 0.0});
            accumulate_collapse(grid_, band_->modes, z_[ch], band_->mult, tau, rowspec);
            it->second[ch] = RowPrefixFn::from_row_spectrum(grid_, rowspec);
        }
    }
    return it->second;
}

namespace {

std::vector<int> resolve_basis_map(int n, int dim, const std::vector<int>& user) {
    const int d = su_dim(n);
    std::vector<int> map = user;
    if (map.empty()) {
        if (dim != d)
            throw std::invalid_argument("transport: field dimension does not match su(n)");
        map.resize(dim);
        for (int i = 0; i < dim; ++i) map[i] = i;
        return map;
    }
    if (static_cast<int>(map.size()) != dim)
        throw std::invalid_argument("transport: basis map size must equal field dimension");
    std::vector<bool> seen(d, false);
    for (int b : map) {
        if (b < 0 || b >= d || seen[b])
            throw std::invalid_argument("transport: basis map entries must be distinct su(n) indices");
        seen[b] = true;
    }
    return map;
}

void check_domain(const Curve& c, const TorusGrid& grid) {
    auto bb = c.bbox();
    if (!grid.in_domain(bb[0], bb[2]) || !grid.in_domain(bb[1], bb[3]))
        throw std::invalid_argument("transport: curve leaves the grid domain");
}

// Fixed-grid solver loop: visit(t, U) after every accepted node.
template <typename Visit>
void stepped_run(int n, const Curve& c, const SmoothedPrefixField& F,
                 const std::vector<int>& bmap, int steps, StepRule rule, Visit&& visit) {
    std::vector<double> tg = refine_knots(c, steps + 1);
    Mat U = Mat::Identity(n, n);
    visit(tg.front(), U);
    RVec coords = RVec::Zero(su_dim(n));
    int seg = 0;
    for (size_t k = 0; k + 1 < tg.size(); ++k) {
        const double t0 = tg[k], t1 = tg[k + 1], tm = 0.5 * (t0 + t1);
        while (c.segment(seg).t1 < tm) ++seg;
        Segment s = c.segment(seg);
        if (s.dy() != 0.0) {
            const double rate = s.dy() / s.dt();
            coords.setZero();
            if (s.vertical()) {
                const std::vector<RowPrefixFn>& fns = F.row(s.ax);
                if (rule == StepRule::exact_vertical) {
                    auto height = [&](double t) { return s.ay + s.dy() * (t - s.t0) / s.dt(); };
                    const double y0 = height(t0), y1 = height(t1);
                    for (int ch = 0; ch < F.dim(); ++ch)
                        coords(bmap[ch]) = fns[ch].antideriv(y1) - fns[ch].antideriv(y0);
                } else {
                    const double y = s.ay + s.dy() * (tm - s.t0) / s.dt();
                    for (int ch = 0; ch < F.dim(); ++ch)
                        coords(bmap[ch]) = rate * fns[ch].value(y) * (t1 - t0);
                }
            } else {
                auto p = s.at(tm);
                for (int ch = 0; ch < F.dim(); ++ch)
                    coords(bmap[ch]) = rate * F.prefix(ch, p[0], p[1]) * (t1 - t0);
            }
            U = exp_su(n, coords) * U;
        }
        visit(t1, U);
    }
}

Mat endpoint_run(int n, const Curve& c, const SmoothedPrefixField& F,
                 const std::vector<int>& bmap, int steps, StepRule rule) {
    Mat last;
    stepped_run(n, c, F, bmap, steps, rule, [&](double, const Mat& U) { last = U; });
    return last;
}

// Doubles the interval count until halving it moves U(1) by at most
// step_tol; returns the accepted (finer) count and its endpoint.
std::pair<int, Mat> choose_steps(int n, const Curve& c, const SmoothedPrefixField& F,
                                 const std::vector<int>& bmap, const TransportOptions& opt) {
    int S = opt.steps;
    Mat u = endpoint_run(n, c, F, bmap, S, opt.rule);
    while (true) {
        if (2 * S > opt.max_steps)
            throw std::runtime_error("transport: step adaptation exceeded max_steps");
        Mat u2 = endpoint_run(n, c, F, bmap, 2 * S, opt.rule);
        if (dist_hs(u, u2) <= opt.step_tol) return {2 * S, std::move(u2)};
        S *= 2;
        u = std::move(u2);
    }
}

double adaptive_scalar(const std::function<double(double)>& f, double a, double b, double fa,
                       double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_scalar(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_scalar(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_scalar(f, a, b, fa, fm, fb, whole, tol, 28);
}

}  // namespace

TransportPath parallel_transport(int n, const Curve& c, const SmoothedPrefixField& F,
                                 const TransportOptions& opt) {
    check_domain(c, F.grid());
    std::vector<int> bmap = resolve_basis_map(n, F.dim(), opt.basis_map);
    if (opt.steps < 1) throw std::invalid_argument("transport: need at least one step");
    const int steps = opt.adapt ? choose_steps(n, c, F, bmap, opt).first : opt.steps;
    TransportPath out;
    stepped_run(n, c, F, bmap, steps, opt.rule, [&](double t, const Mat& U) {
        out.t.push_back(t);
        out.U.push_back(U);
    });
    return out;
}

Mat holonomy(int n, const Curve& c, const SmoothedPrefixField& F, const TransportOptions& opt) {
    check_domain(c, F.grid());
    std::vector<int> bmap = resolve_basis_map(n, F.dim(), opt.basis_map);
    if (opt.steps < 1) throw std::invalid_argument("transport: need at least one step");
    if (opt.adapt) return choose_steps(n, c, F, bmap, opt).second;
    return endpoint_run(n, c, F, bmap, opt.steps, opt.rule);
}

RVec line_integral_A(const Curve& c, const SmoothedPrefixField& F, double t0, double t1,
                     double tol) {
    check_domain(c, F.grid());
    if (!(t0 <= t1)) throw std::invalid_argument("line_integral_A: need t0 <= t1");
    RVec acc = RVec::Zero(F.dim());
    for (int i = 0; i < c.segments(); ++i) {
        Segment s = c.segment(i);
        const double a = std::max(t0, s.t0), b = std::min(t1, s.t1);
        if (!(a < b) || s.dy() == 0.0) continue;
        auto height = [&](double t) { return s.ay + s.dy() * (t - s.t0) / s.dt(); };
        if (s.vertical()) {
            const std::vector<RowPrefixFn>& fns = F.row(s.ax);
            for (int ch = 0; ch < F.dim(); ++ch)
                acc(ch) += fns[ch].antideriv(height(b)) - fns[ch].antideriv(height(a));
        } else {
            const double rate = s.dy() / s.dt();
            for (int ch = 0; ch < F.dim(); ++ch) {
                std::function<double(double)> f = [&](double t) {
                    auto p = s.at(t);
                    return rate * F.prefix(ch, p[0], p[1]);
                };
                acc(ch) += adaptive_simpson(f, a, b, tol);
            }
        }
    }
    return acc;
}

void TransportPath::to_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("TransportPath::to_csv: cannot open " + path);
    const int n = U.empty() ? 0 : static_cast<int>(U.front().rows());
    std::fprintf(f, "t");
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) std::fprintf(f, ",u_re_%d_%d,u_im_%d_%d", r + 1, c + 1, r + 1, c + 1);
    std::fprintf(f, "\n");
    for (int k = 0; k < nodes(); ++k) {
        std::fprintf(f, "%.17g", t[k]);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                std::fprintf(f, ",%.17g,%.17g", U[k](r, c).real(), U[k](r, c).imag());
        std::fprintf(f, "\n");
    }
    std::fclose(f);
}

TransportPath transport_path_from_csv(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "r");
    if (!f) throw std::runtime_error("transport_path_from_csv: cannot open " + path);
    TransportPath out;
    char* line = nullptr;
    size_t cap = 0;
    auto fail = [&](const char* msg) {
        std::free(line);
        std::fclose(f);
        throw std::runtime_error(std::string("transport_path_from_csv: ") + msg);
    };
    auto count_cols = [](const char* s) {
        int n = 1;
        for (; *s && *s != '\n'; ++s)
            if (*s == ',') ++n;
        return n;
    };
    if (getline(&line, &cap, f) <= 0) fail("empty file");
    const int cols = count_cols(line);
    int n = 0;
    while (1 + 2 * n * n < cols) ++n;
    if (n == 0 || 1 + 2 * n * n != cols || std::strncmp(line, "t,u_re_1_1,", 11) != 0)
        fail("malformed header");
    while (getline(&line, &cap, f) > 0) {
        if (line[0] == '\n' || line[0] == '\0') continue;
        Mat u(n, n);
        const char* p = line;
        char* end = nullptr;
        bool bad = false;
        auto next = [&]() {
            double v = std::strtod(p, &end);
            if (end == p) bad = true;
            p = (*end == ',') ? end + 1 : end;
            return v;
        };
        out.t.push_back(next());
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const double re = next();
                const double im = next();
                u(r, c) = cplx(re, im);
            }
        if (bad) fail("bad number");
        out.U.push_back(std::move(u));
    }
    if (out.t.empty()) fail("no data rows");
    std::free(line);
    std::fclose(f);
    return out;
}

TransportGap transport_gap(int n, const Curve& c, const SmoothedPrefixField& A,
                           const SmoothedPrefixField& B, const TransportOptions& opt,
                           double alpha, int holder_nodes) {
    TransportPath pa = parallel_transport(n, c, A, opt);
    TransportPath pb = parallel_transport(n, c, B, opt);
    TransportGap gap{0.0, 0.0};
    for (int k = 0; k < pa.nodes(); ++k)
        gap.sup_hs = std::max(gap.sup_hs, dist_hs(pa.U[k], pb.U[k]));

    // Subsample to keep the O(nodes^2) Hoelder sup affordable.
    const int M = std::min(holder_nodes, pa.nodes());
    std::vector<double> ts(M);
    std::vector<RVec> xa(M), xb(M);
    auto flatten = [&](const Mat& U) {
        RVec v(2 * n * n);
        int q = 0;
        for (int r = 0; r < n; ++r)
            for (int cc = 0; cc < n; ++cc) {
                v(q++) = U(r, cc).real();
                v(q++) = U(r, cc).imag();
            }
        return v;
    };
    for (int m = 0; m < M; ++m) {
        int k = static_cast<int>(std::llround(static_cast<double>(m) * (pa.nodes() - 1) / (M - 1)));
        ts[m] = pa.t[k];
        xa[m] = flatten(pa.U[k]);
        xb[m] = flatten(pb.U[k]);
    }
    gap.holder = holder_dist(alpha, sig_polyline(ts, xa), sig_polyline(ts, xb));
    return gap;
}

TransportPath lie_bm_oracle(int n, std::uint64_t seed, const std::vector<double>& t,
                            const std::vector<double>& area) {
    if (t.size() != area.size() || t.size() < 1)
        throw std::invalid_argument("lie_bm_oracle: need matching nonempty grids");
    if (area.front() != 0.0) throw std::invalid_argument("lie_bm_oracle: area must start at 0");
    for (size_t k = 1; k < t.size(); ++k) {
        if (!(t[k] > t[k - 1])) throw std::invalid_argument("lie_bm_oracle: t not increasing");
        if (area[k] < area[k - 1])
            throw std::invalid_argument("lie_bm_oracle: area must be nondecreasing");
    }
    const int d = su_dim(n);
    Rng rng(seed);
    TransportPath out;
    out.t = t;
    out.U.reserve(t.size());
    out.U.push_back(Mat::Identity(n, n));
    RVec coords(d);
    for (size_t k = 1; k < t.size(); ++k) {
        const double sd = std::sqrt(area[k] - area[k - 1]);
        for (int i = 0; i < d; ++i) coords(i) = -sd * rng.next_gauss();
        out.U.push_back(out.U.back() * exp_su(n, coords));
    }
    return out;
}

double re_trace(const Mat& U) { return U.trace().real(); }

double adjoint_character(const Mat& U) { return std::norm(U.trace()) - 1.0; }

}  // namespace ym2
