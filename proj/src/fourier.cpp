#include "ym2/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ym2 {

namespace {

std::mutex& plan_mutex() {
    static std::mutex mu;
    return mu;
}

fftw_plan get_plan(int rank, int n, int sign) {
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    const auto key = std::make_tuple(rank, n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<cplx> dummy(rank == 2 ? std::size_t(n) * n : std::size_t(n));
    auto* buf = reinterpret_cast<fftw_complex*>(dummy.data());
    fftw_plan p = rank == 2
                      ? fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
                      : fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw planning failed");
    cache.emplace(key, p);
    return p;
}

}  // namespace

void fft2(int N, cplx* data, int sign) {
    fftw_plan p = get_plan(2, N, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, buf, buf);
}

void fft1(int M, cplx* data, int sign) {
    fftw_plan p = get_plan(1, M, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, buf, buf);
}

std::vector<cplx> field_spectrum(const TorusGrid& grid, const double* samples) {
    std::vector<cplx> c(grid.cells());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = samples[i];
    fft2(grid.N, c.data(), -1);
    const double scale = grid.L / (double(grid.N) * double(grid.N));
    for (auto& z : c) z *= scale;
    return c;
}

std::vector<double> spectrum_samples(const TorusGrid& grid, std::vector<cplx> coeffs) {
    fft2(grid.N, coeffs.data(), +1);
    std::vector<double> out(coeffs.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = coeffs[i].real() / grid.L;
    return out;
}

cplx eint0(double phi) {
    if (std::abs(phi) < 1e-2) {
        const double p2 = phi * phi;
        return {1.0 - p2 / 6.0 + p2 * p2 / 120.0,
                -phi / 2.0 + phi * p2 / 24.0 - phi * p2 * p2 / 720.0};
    }
    const cplx e = std::polar(1.0, -phi);
    return (1.0 - e) / cplx(0.0, phi);
}

cplx eint1(double phi) {
    if (std::abs(phi) < 1e-2) {
        const double p2 = phi * phi;
        return {0.5 - p2 / 8.0 + p2 * p2 / 144.0,
                -phi / 3.0 + phi * p2 / 30.0 - phi * p2 * p2 / 840.0};
    }
    const cplx e = std::polar(1.0, -phi);
    return (eint0(phi) - e) / cplx(0.0, phi);
}

std::vector<cplx> sweep_spectrum(const TorusGrid& grid, const Curve& c, double s, double t) {
    if (!(s <= t)) throw std::invalid_argument("sweep_spectrum: need s <= t");
    const int N = grid.N;
    std::vector<cplx> acc(grid.cells(), cplx(0.0, 0.0));
    for (int i = 0; i < c.segments(); ++i) {
        const Segment sg = c.segment(i);
        if (sg.dy() == 0.0) continue;
        const double w0 = std::max(s, sg.t0);
        const double w1 = std::min(t, sg.t1);
        if (!(w1 > w0)) continue;
        const auto pa = sg.at(w0);
        const auto pb = sg.at(w1);
        const double xa = pa[0], ya = pa[1];
        const double dx = pb[0] - pa[0], dy = pb[1] - pa[1];
        if (!(grid.in_domain(pa[0], pa[1]) && grid.in_domain(pb[0], pb[1])))
            throw std::invalid_argument("sweep_spectrum: curve leaves the grid domain");
        // Per-axis phase tables exp(-i xi x_a), exp(-i xi y_a).
        std::vector<cplx> phx(static_cast<std::size_t>(N)), phy(static_cast<std::size_t>(N));
        for (int k = 0; k < N; ++k) {
            phx[static_cast<std::size_t>(k)] = std::polar(1.0, -grid.xi(k) * xa);
            phy[static_cast<std::size_t>(k)] = std::polar(1.0, -grid.xi(k) * ya);
        }
        for (int ky = 0; ky < N; ++ky) {
            const double xi2 = grid.xi(ky);
            const cplx base = dy * phy[static_cast<std::size_t>(ky)];
            const cplx e_y = eint0(xi2 * dy);
            cplx* row = acc.data() + static_cast<std::size_t>(ky) * N;
            for (int kx = 0; kx < N; ++kx) {
                const double xi1 = grid.xi(kx);
                cplx F;
                if (kx == 0) {
                    F = base * (xa * e_y + dx * eint1(xi2 * dy));
                } else {
                    const cplx mixed = eint0(xi2 * dy + xi1 * dx);
                    F = base * (e_y - phx[static_cast<std::size_t>(kx)] * mixed) / cplx(0.0, xi1);
                }
                row[kx] += F;
            }
        }
    }
    for (auto& z : acc) z /= grid.L;
    return acc;
}

double spectrum_l2(const std::vector<cplx>& coeffs, const std::vector<double>* mult) {
    double acc = 0.0;
    if (mult) {
        for (std::size_t i = 0; i < coeffs.size(); ++i) acc += std::norm(coeffs[i]) * (*mult)[i] * (*mult)[i];
    } else {
        for (const auto& z : coeffs) acc += std::norm(z);
    }
    return std::sqrt(acc);
}

Sampled1D Sampled1D::from_spectrum(double period, const std::vector<cplx>& c, int oversample,
                                   double scale) {
    const int M = static_cast<int>(c.size());
    const int U = M * oversample;
    std::vector<cplx> buf(static_cast<std::size_t>(U), cplx(0.0, 0.0));
    for (int m = 0; m < M; ++m) {
        const int sgn = m < M / 2 ? m : m - M;
        const int idx = sgn >= 0 ? sgn : U + sgn;
        buf[static_cast<std::size_t>(idx)] = c[static_cast<std::size_t>(m)];
    }
    fft1(U, buf.data(), +1);
    Sampled1D out;
    out.period_ = period;
    out.v_.resize(static_cast<std::size_t>(U));
    for (int i = 0; i < U; ++i) out.v_[static_cast<std::size_t>(i)] = scale * buf[static_cast<std::size_t>(i)].real();
    return out;
}

double Sampled1D::eval(double y) const {
    const int U = static_cast<int>(v_.size());
    double u = y / period_ * U;
    u -= std::floor(u / U) * U;  // wrap into [0,U)
    const int i0 = static_cast<int>(std::floor(u));
    const double x = u - i0;
    // 6-point Lagrange on nodes {-2,...,3} relative to i0.
    double acc = 0.0;
    static const double denom[6] = {-120.0, 24.0, -12.0, 12.0, -24.0, 120.0};
    for (int m = -2; m <= 3; ++m) {
        double num = 1.0;
        for (int k = -2; k <= 3; ++k)
            if (k != m) num *= (x - k);
        const int idx = ((i0 + m) % U + U) % U;
        acc += num / denom[m + 2] * v_[static_cast<std::size_t>(idx)];
    }
    return acc;
}

}  // namespace ym2
