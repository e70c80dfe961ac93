#include "ym2/roughpath.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <stdexcept>

#include "ym2/fourier.hpp"
#include "ym2/partition.hpp"

namespace ym2 {

Level2Increment Level2Increment::identity(int dim) {
    Level2Increment g;
    g.x = RVec::Zero(dim);
    g.xx = RMat::Zero(dim, dim);
    return g;
}

Level2Increment tensor_mul(const Level2Increment& a, const Level2Increment& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("tensor_mul: dimension mismatch");
    Level2Increment out;
    out.x = a.x + b.x;
    out.xx = a.xx + b.xx + a.x * b.x.transpose();
    return out;
}

Level2Increment tensor_inv(const Level2Increment& g) {
    Level2Increment out;
    out.x = -g.x;
    out.xx = -g.xx + g.x * g.x.transpose();
    return out;
}

Level2Increment seg_lift(const RVec& delta) {
    Level2Increment out;
    out.x = delta;
    out.xx = 0.5 * delta * delta.transpose();
    return out;
}

double cc_norm(const Level2Increment& g) {
    return g.x.norm() + std::sqrt(g.xx.norm());
}

double cc_dist(const Level2Increment& a, const Level2Increment& b) {
    return std::max(cc_norm(tensor_mul(tensor_inv(a), b)),
                    cc_norm(tensor_mul(tensor_inv(b), a)));
}

bool is_group_like(const Level2Increment& g, double tol) {
    RMat sym = 0.5 * (g.xx + g.xx.transpose());
    RMat target = 0.5 * g.x * g.x.transpose();
    return (sym - target).norm() <= tol * (1.0 + g.x.squaredNorm());
}

Level2Increment Level2Path::increment(int k, int l) const {
    if (k < 0 || l < 0 || k >= nodes() || l >= nodes())
        throw std::out_of_range("Level2Path::increment: node index");
    if (k == l) {
        // The increment from a node to itself is exactly the group identity;
        // short-circuit so callers see true zeros instead of roundoff residue.
        Level2Increment id;
        id.x = RVec::Zero(dim());
        id.xx = RMat::Zero(dim(), dim());
        return id;
    }
    return tensor_mul(tensor_inv(node[k]), node[l]);
}

void Level2Path::to_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("Level2Path::to_csv: cannot open " + path);
    const int d = dim();
    std::fprintf(f, "t");
    for (int i = 0; i < d; ++i) std::fprintf(f, ",x_%d", i + 1);
    for (int i = 0; i < d; ++i)
        for (int jj = 0; jj < d; ++jj) std::fprintf(f, ",xx_%d_%d", i + 1, jj + 1);
    std::fprintf(f, "\n");
    for (int k = 0; k < nodes(); ++k) {
        std::fprintf(f, "%.17g", t[k]);
        for (int i = 0; i < d; ++i) std::fprintf(f, ",%.17g", node[k].x(i));
        for (int i = 0; i < d; ++i)
            for (int jj = 0; jj < d; ++jj) std::fprintf(f, ",%.17g", node[k].xx(i, jj));
        std::fprintf(f, "\n");
    }
    std::fclose(f);
}

Level2Path Level2Path::from_csv(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "r");
    if (!f) throw std::runtime_error("Level2Path::from_csv: cannot open " + path);
    Level2Path out;
    char* line = nullptr;
    size_t cap = 0;
    auto count_cols = [](const char* s) {
        int n = 1;
        for (; *s && *s != '\n'; ++s)
            if (*s == ',') ++n;
        return n;
    };
    if (getline(&line, &cap, f) <= 0) {
        std::free(line);
        std::fclose(f);
        throw std::runtime_error("Level2Path::from_csv: empty file");
    }
    const int cols = count_cols(line);
    int d = 0;
    while (1 + d + d * d < cols) ++d;
    if (1 + d + d * d != cols || std::strncmp(line, "t,", 2) != 0) {
        std::free(line);
        std::fclose(f);
        throw std::runtime_error("Level2Path::from_csv: malformed header");
    }
    while (getline(&line, &cap, f) > 0) {
        if (line[0] == '\n' || line[0] == '\0') continue;
        Level2Increment g = Level2Increment::identity(d);
        const char* p = line;
        char* end = nullptr;
        auto next = [&]() {
            double v = std::strtod(p, &end);
            if (end == p) throw std::runtime_error("Level2Path::from_csv: bad number");
            p = (*end == ',') ? end + 1 : end;
            return v;
        };
        try {
            out.t.push_back(next());
            for (int i = 0; i < d; ++i) g.x(i) = next();
            for (int i = 0; i < d; ++i)
                for (int jj = 0; jj < d; ++jj) g.xx(i, jj) = next();
        } catch (...) {
            std::free(line);
            std::fclose(f);
            throw;
        }
        out.node.push_back(std::move(g));
    }
    std::free(line);
    std::fclose(f);
    if (out.t.empty()) throw std::runtime_error("Level2Path::from_csv: no rows");
    return out;
}

Level2Path sig_polyline(const std::vector<double>& t, const std::vector<RVec>& pts) {
    if (t.size() != pts.size() || t.empty())
        throw std::invalid_argument("sig_polyline: need matching nonempty t and pts");
    for (size_t k = 1; k < t.size(); ++k)
        if (!(t[k] > t[k - 1])) throw std::invalid_argument("sig_polyline: t not increasing");
    const int d = static_cast<int>(pts.front().size());
    Level2Path out;
    out.t = t;
    out.node.reserve(t.size());
    out.node.push_back(Level2Increment::identity(d));
    for (size_t k = 1; k < pts.size(); ++k) {
        if (static_cast<int>(pts[k].size()) != d)
            throw std::invalid_argument("sig_polyline: point dimension mismatch");
        out.node.push_back(tensor_mul(out.node.back(), seg_lift(pts[k] - pts[k - 1])));
    }
    return out;
}

double holder_norm(double alpha, const Level2Path& X) {
    double best = 0.0;
    for (int k = 0; k + 1 < X.nodes(); ++k) {
        Level2Increment inv_k = tensor_inv(X.node[k]);
        for (int l = k + 1; l < X.nodes(); ++l) {
            double dt = X.t[l] - X.t[k];
            best = std::max(best, cc_norm(tensor_mul(inv_k, X.node[l])) / std::pow(dt, alpha));
        }
    }
    return best;
}

double holder_dist(double alpha, const Level2Path& X, const Level2Path& Y) {
    if (X.nodes() != Y.nodes())
        throw std::invalid_argument("holder_dist: paths need the same time grid");
    for (int k = 0; k < X.nodes(); ++k)
        if (std::abs(X.t[k] - Y.t[k]) > 1e-12)
            throw std::invalid_argument("holder_dist: paths need the same time grid");
    double best = 0.0;
    for (int k = 0; k + 1 < X.nodes(); ++k) {
        Level2Increment xinv = tensor_inv(X.node[k]);
        Level2Increment yinv = tensor_inv(Y.node[k]);
        for (int l = k + 1; l < X.nodes(); ++l) {
            double dt = X.t[l] - X.t[k];
            double d = cc_dist(tensor_mul(xinv, X.node[l]), tensor_mul(yinv, Y.node[l]));
            // cc_dist re-derives both increments' inverses; cheaper to reuse
            // the cached inverse, but the pair count dominates either way.
            best = std::max(best, d / std::pow(dt, alpha));
        }
    }
    return best;
}

std::vector<double> refine_knots(const Curve& c, int min_nodes) {
    if (min_nodes < 2) throw std::invalid_argument("refine_knots: need min_nodes >= 2");
    const double target = 1.0 / (min_nodes - 1);
    std::vector<double> out;
    for (int i = 0; i < c.segments(); ++i) {
        Segment s = c.segment(i);
        int parts = std::max(1, static_cast<int>(std::ceil(s.dt() / target - 1e-12)));
        for (int p = 0; p < parts; ++p) out.push_back(s.t0 + s.dt() * p / parts);
    }
    out.push_back(1.0);
    return out;
}

namespace {

// Check the time grid covers [0,1], increases strictly, and contains every
// knot time; returns per-knot node indices.
std::vector<int> locate_knots(const Curve& c, const std::vector<double>& tgrid) {
    if (tgrid.size() < 2 || std::abs(tgrid.front()) > 1e-12 || std::abs(tgrid.back() - 1.0) > 1e-12)
        throw std::invalid_argument("lift_smoothed: tgrid must run over [0,1]");
    for (size_t k = 1; k < tgrid.size(); ++k)
        if (!(tgrid[k] > tgrid[k - 1]))
            throw std::invalid_argument("lift_smoothed: tgrid not increasing");
    std::vector<int> idx;
    for (const CurvePoint& p : c.knots()) {
        auto it = std::lower_bound(tgrid.begin(), tgrid.end(), p.t - 1e-12);
        if (it == tgrid.end() || std::abs(*it - p.t) > 1e-12)
            throw std::invalid_argument("lift_smoothed: tgrid must contain every knot time");
        idx.push_back(static_cast<int>(it - tgrid.begin()));
    }
    return idx;
}

}  // namespace

Level2Path lift_smoothed(const Curve& c, const NoiseSample& W, int j,
                         const std::vector<double>& tgrid) {
    const TorusGrid& grid = W.grid();
    if (j != kFullBand && (j < 0 || j > grid.j_max()))
        throw std::invalid_argument("lift_smoothed: band index out of range");
    auto bb = c.bbox();
    if (!grid.in_domain(bb[0], bb[2]) || !grid.in_domain(bb[1], bb[3]))
        throw std::invalid_argument("lift_smoothed: curve leaves the grid domain");
    std::vector<int> kidx = locate_knots(c, tgrid);

    const BandTable& band = cumulative_band(grid, j);
    const std::vector<double>* mult = (j == kFullBand) ? nullptr : &band.mult;
    const int d = W.dim();
    const int M = static_cast<int>(tgrid.size());
    std::vector<RVec> pts(M, RVec::Zero(d));

    if (c.rectilinear()) {
        // Exact row collapse: along a vertical segment at abscissa a,
        //   dX/dt = c2'(t) * int_0^a (S W)(x, c2(t)) dx,
        // so node increments are antiderivative differences in c2.
        std::vector<std::vector<cplx>> zs(d);
        for (int ch = 0; ch < d; ++ch) W.coeffs_at(ch, band.modes, zs[ch]);
        std::map<std::uint64_t, std::vector<RowPrefixFn>> cache;
        auto prefix_fns = [&](double a) -> const std::vector<RowPrefixFn>& {
            auto [it, fresh] = cache.try_emplace(std::bit_cast<std::uint64_t>(a));
            if (fresh) {
                std::vector<cplx> tau = prefix_tau(grid, a);
                it->second.resize(d);
                std::vector<cplx> row;
                for (int ch = 0; ch < d; ++ch) {
                    row.assign(grid.N, cplx{0.0, 0.0});
                    accumulate_collapse(grid, band.modes, zs[ch], band.mult, tau, row);
                    it->second[ch] = RowPrefixFn::from_row_spectrum(grid, row);
                }
            }
            return it->second;
        };
        for (int i = 0; i < c.segments(); ++i) {
            Segment s = c.segment(i);
            const int k0 = kidx[i], k1 = kidx[i + 1];
            if (!s.vertical()) {
                for (int k = k0 + 1; k <= k1; ++k) pts[k] = pts[k0];
                continue;
            }
            const std::vector<RowPrefixFn>& fns = prefix_fns(s.ax);
            std::vector<double> acur(d);
            for (int ch = 0; ch < d; ++ch) acur[ch] = fns[ch].antideriv(s.ay);
            for (int k = k0 + 1; k <= k1; ++k) {
                double y = s.ay + s.dy() * (tgrid[k] - s.t0) / s.dt();
                pts[k] = pts[k - 1];
                for (int ch = 0; ch < d; ++ch) {
                    double anext = fns[ch].antideriv(y);
                    pts[k](ch) += anext - acur[ch];
                    acur[ch] = anext;
                }
            }
        }
    } else {
        for (int k = 1; k < M; ++k) {
            std::vector<cplx> win = sweep_spectrum(grid, c, tgrid[k - 1], tgrid[k]);
            pts[k] = pts[k - 1] + W.pair_spectrum(win, mult);
        }
    }
    return sig_polyline(tgrid, pts);
}

}  // namespace ym2
