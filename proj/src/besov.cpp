#include "ym2/besov.hpp"

#include <cmath>
#include <stdexcept>

#include "ym2/partition.hpp"

namespace ym2 {

double lp_norm(const TorusGrid& grid, const double* vals, double p) {
    const std::size_t n = grid.cells();
    if (p == kPInf) {
        double mx = 0.0;
        for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, std::abs(vals[i]));
        return mx;
    }
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
    double acc = 0.0;
    if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) acc += vals[i] * vals[i];
    } else if (p == 1.0) {
        for (std::size_t i = 0; i < n; ++i) acc += std::abs(vals[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) acc += std::pow(std::abs(vals[i]), p);
    }
    const double cell = grid.h() * grid.h();
    return std::pow(cell * acc, 1.0 / p);
}

namespace {

int resolve_jhi(const TorusGrid& grid, int jhi) { return jhi == -2 ? grid.j_max() : jhi; }

}  // namespace

BesovProfile besov_norm(const GridField& f, int ch, double s, double p, int jlo, int jhi) {
    const TorusGrid& grid = f.grid();
    jhi = resolve_jhi(grid, jhi);
    const std::vector<cplx> fhat = field_spectrum(grid, f.channel(ch));
    BesovProfile out;
    std::vector<cplx> buf;
    for (int j = jlo; j <= jhi; ++j) {
        const std::vector<double> rho = make_rho_table(grid, j);
        double block;
        if (p == 2.0) {
            block = spectrum_l2(fhat, &rho);
        } else {
            buf = fhat;
            for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= rho[i];
            std::vector<double> vals = spectrum_samples(grid, std::move(buf));
            block = lp_norm(grid, vals.data(), p);
        }
        out.j.push_back(j);
        out.block_lp.push_back(block);
        out.value = std::max(out.value, std::pow(2.0, j * s) * block);
    }
    return out;
}

BesovProfile besov_norm_spectrum(const TorusGrid& grid, const std::vector<cplx>& fhat, double s,
                                 int jlo, int jhi) {
    jhi = resolve_jhi(grid, jhi);
    BesovProfile out;
    for (int j = jlo; j <= jhi; ++j) {
        const std::vector<double> rho = make_rho_table(grid, j);
        const double block = spectrum_l2(fhat, &rho);
        out.j.push_back(j);
        out.block_lp.push_back(block);
        out.value = std::max(out.value, std::pow(2.0, j * s) * block);
    }
    return out;
}

DiffSeminorm besov_diff_seminorm(const GridField& f, int ch, double s, double p) {
    const TorusGrid& grid = f.grid();
    const int N = grid.N;
    const double* v = f.channel(ch);
    DiffSeminorm out;
    out.lp = lp_norm(grid, v, p);

    std::vector<double> diff(grid.cells());
    const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    for (int m = 0; (1 << m) * grid.h() <= 0.25 * grid.L + 1e-12; ++m) {
        const int cshift = 1 << m;
        for (const auto& d : dirs) {
            const int sx = d[0] * cshift;
            const int sy = d[1] * cshift;
            const double hmag = std::hypot(sx * grid.h(), sy * grid.h());
            for (int iy = 0; iy < N; ++iy) {
                const int jy = ((iy + sy) % N + N) % N;
                const double* row = v + static_cast<std::size_t>(iy) * N;
                const double* rows = v + static_cast<std::size_t>(jy) * N;
                double* drow = diff.data() + static_cast<std::size_t>(iy) * N;
                for (int ix = 0; ix < N; ++ix) {
                    const int jx = (ix + sx) % N;
                    drow[ix] = row[ix] - rows[jx];
                }
            }
            const double ratio = lp_norm(grid, diff.data(), p) / std::pow(hmag, s);
            out.seminorm = std::max(out.seminorm, ratio);
        }
    }
    out.primed = out.lp + out.seminorm;
    return out;
}

}  // namespace ym2
