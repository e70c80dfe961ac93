#include "ym2/partition.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace ym2 {

namespace {
double theta(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

// Rising edge mapped onto [6/7, 1].
double rise(double r) {
    return smoothstep((r - 6.0 / 7.0) * 7.0);
}
}  // namespace

double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = theta(u);
    const double b = theta(1.0 - u);
    return a / (a + b);
}

double rho0(double r) {
    if (r <= 6.0 / 7.0 || r >= 2.0) return 0.0;
    if (r < 1.0) return rise(r);
    if (r <= 12.0 / 7.0) return 1.0;
    return 1.0 - rise(r / 2.0);   // exact complement of the next block's rise
}

double chi0(double r) {
    if (r < 6.0 / 7.0) return 1.0;   // includes r = 0
    double acc = 1.0;
    // Subtract every block rho0(2^{-j} r), j >= 0, that can be nonzero.
    for (int j = 0; std::ldexp(r, -j) > 6.0 / 7.0; ++j)
        acc -= rho0(std::ldexp(r, -j));
    // Past the support the blocks sum to 1 exactly up to roundoff; snap the
    // leftover dust to a true zero so sparse consumers see the real band.
    if (std::abs(acc) < 1e-14) return 0.0;
    return acc;
}

double rho_block(int j, double r) {
    if (j < -1) throw std::invalid_argument("rho_block: j >= -1 required");
    if (j == -1) return chi0(r);
    return rho0(std::ldexp(r, -j));
}

double chi_block(int j, double r) {
    if (j < 0) return 0.0;
    return chi0(std::ldexp(r, -j));
}

std::vector<double> make_rho_table(const TorusGrid& grid, int j) {
    std::vector<double> tab(grid.cells());
    for (int ky = 0; ky < grid.N; ++ky)
        for (int kx = 0; kx < grid.N; ++kx)
            tab[static_cast<std::size_t>(ky) * grid.N + kx] = rho_block(j, grid.xi_abs(kx, ky));
    return tab;
}

std::vector<double> make_chi_table(const TorusGrid& grid, int j) {
    std::vector<double> tab(grid.cells());
    for (int ky = 0; ky < grid.N; ++ky)
        for (int kx = 0; kx < grid.N; ++kx)
            tab[static_cast<std::size_t>(ky) * grid.N + kx] = chi_block(j, grid.xi_abs(kx, ky));
    return tab;
}

const BandTable& cumulative_band(const TorusGrid& grid, int j) {
    struct Key {
        double L;
        int N, j;
        bool operator<(const Key& o) const {
            if (L != o.L) return L < o.L;
            if (N != o.N) return N < o.N;
            return j < o.j;
        }
    };
    static std::mutex mu;
    static std::map<Key, std::unique_ptr<BandTable>> cache;
    if (j != kFullBand && (j < 0 || j > grid.j_max()))
        throw std::invalid_argument("cumulative_band: band index out of range");
    std::lock_guard<std::mutex> lock(mu);
    auto [it, fresh] = cache.try_emplace(Key{grid.L, grid.N, j});
    if (fresh) {
        auto tab = std::make_unique<BandTable>();
        if (j == kFullBand)
            tab->mult.assign(grid.cells(), 1.0);
        else
            tab->mult = make_chi_table(grid, j);
        for (std::uint32_t m = 0; m < grid.cells(); ++m)
            if (tab->mult[m] != 0.0) tab->modes.push_back(m);
        it->second = std::move(tab);
    }
    return *it->second;
}

}  // namespace ym2
