#include "ym2/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "ym2/rng.hpp"

namespace ym2 {

NoiseSample::NoiseSample(const TorusGrid& grid, int dim, std::uint64_t seed)
    : grid_(grid), dim_(dim), seed_(seed) {
    if (dim < 1) throw std::invalid_argument("NoiseSample: dim must be >= 1");
}

cplx NoiseSample::coeff(int ch, int kx, int ky) const {
    const int N = grid_.N;
    const int rx = (N - kx) % N;
    const int ry = (N - ky) % N;
    const auto counter = [&](int x, int y) {
        return (static_cast<std::uint64_t>(ch) * N + static_cast<std::uint64_t>(y)) * N +
               static_cast<std::uint64_t>(x);
    };
    if (rx == kx && ry == ky) {
        return {gauss_at(seed_, counter(kx, ky)).a, 0.0};  // self-conjugate mode
    }
    const bool canonical = (ky < ry) || (ky == ry && kx < rx);
    const GaussPair g = canonical ? gauss_at(seed_, counter(kx, ky)) : gauss_at(seed_, counter(rx, ry));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return canonical ? cplx(g.a * inv_sqrt2, g.b * inv_sqrt2)
                     : cplx(g.a * inv_sqrt2, -g.b * inv_sqrt2);
}

void NoiseSample::coeffs_at(int ch, const std::vector<std::uint32_t>& modes,
                            std::vector<cplx>& out) const {
    const int N = grid_.N;
    out.resize(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const int kx = static_cast<int>(modes[i]) % N;
        const int ky = static_cast<int>(modes[i]) / N;
        out[i] = coeff(ch, kx, ky);
    }
}

void NoiseSample::fill_filtered(int ch, const std::vector<double>* mult,
                                std::vector<cplx>& out) const {
    const int N = grid_.N;
    out.assign(grid_.cells(), cplx(0.0, 0.0));
    for (int ky = 0; ky < N; ++ky) {
        for (int kx = 0; kx < N; ++kx) {
            const std::size_t idx = static_cast<std::size_t>(ky) * N + kx;
            const double m = mult ? (*mult)[idx] : 1.0;
            if (m == 0.0) continue;
            out[idx] = m * coeff(ch, kx, ky);
        }
    }
}

GridField NoiseSample::realize(const std::vector<double>* mult) const {
    GridField f(grid_, dim_);
    std::vector<cplx> buf;
    for (int ch = 0; ch < dim_; ++ch) {
        fill_filtered(ch, mult, buf);
        fft2(grid_.N, buf.data(), +1);
        double* dst = f.channel(ch);
        for (std::size_t i = 0; i < grid_.cells(); ++i) dst[i] = buf[i].real() / grid_.L;
    }
    return f;
}

RVec NoiseSample::pair_spectrum(const std::vector<cplx>& fhat,
                                const std::vector<double>* mult) const {
    if (fhat.size() != grid_.cells())
        throw std::invalid_argument("pair_spectrum: coefficient size mismatch");
    const int N = grid_.N;
    RVec out(dim_);
    for (int ch = 0; ch < dim_; ++ch) {
        cplx acc(0.0, 0.0);
        for (int ky = 0; ky < N; ++ky) {
            for (int kx = 0; kx < N; ++kx) {
                const std::size_t idx = static_cast<std::size_t>(ky) * N + kx;
                const double m = mult ? (*mult)[idx] : 1.0;
                if (m == 0.0) continue;
                acc += std::conj(coeff(ch, kx, ky)) * m * fhat[idx];
            }
        }
        out[ch] = acc.real();
    }
    return out;
}

RVec NoiseSample::pair_field(const GridField& f, int fch, const std::vector<double>* mult) const {
    if (!(f.grid() == grid_)) throw std::invalid_argument("pair_field: grid mismatch");
    return pair_spectrum(field_spectrum(grid_, f.channel(fch)), mult);
}

std::vector<std::uint32_t> nonzero_modes(const std::vector<double>& mult) {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < mult.size(); ++i)
        if (mult[i] != 0.0) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

std::vector<cplx> prefix_tau(const TorusGrid& grid, double a) {
    std::vector<cplx> tau(static_cast<std::size_t>(grid.N));
    tau[0] = cplx(a, 0.0);
    for (int k = 1; k < grid.N; ++k) {
        const double xi = grid.xi(k);
        // int_0^a exp(i xi x) dx = (exp(i xi a) - 1)/(i xi) = a * conj(eint0(xi a))
        tau[static_cast<std::size_t>(k)] = a * std::conj(eint0(xi * a));
    }
    return tau;
}

void accumulate_collapse(const TorusGrid& grid, const std::vector<std::uint32_t>& modes,
                         const std::vector<cplx>& z, const std::vector<double>& mult,
                         const std::vector<cplx>& tau, std::vector<cplx>& c) {
    const int N = grid.N;
    if (c.size() != static_cast<std::size_t>(N)) c.assign(static_cast<std::size_t>(N), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const std::uint32_t idx = modes[i];
        const int kx = static_cast<int>(idx) % N;
        const int ky = static_cast<int>(idx) / N;
        c[static_cast<std::size_t>(ky)] += z[i] * mult[idx] * tau[static_cast<std::size_t>(kx)];
    }
}

RowPrefixFn::RowPrefixFn(const NoiseSample& W, int ch, const std::vector<double>* mult, double a,
                         int oversample) {
    const TorusGrid& g = W.grid();
    const int N = g.N;
    std::vector<cplx> tau = prefix_tau(g, a);
    std::vector<cplx> c(static_cast<std::size_t>(N), cplx(0.0, 0.0));
    for (int ky = 0; ky < N; ++ky) {
        cplx acc(0.0, 0.0);
        for (int kx = 0; kx < N; ++kx) {
            const std::size_t idx = static_cast<std::size_t>(ky) * N + kx;
            const double m = mult ? (*mult)[idx] : 1.0;
            if (m == 0.0) continue;
            acc += m * W.coeff(ch, kx, ky) * tau[static_cast<std::size_t>(kx)];
        }
        c[static_cast<std::size_t>(ky)] = acc;
    }
    *this = from_row_spectrum(g, c, oversample);
}

RowPrefixFn RowPrefixFn::from_row_spectrum(const TorusGrid& grid, const std::vector<cplx>& c,
                                           int oversample) {
    RowPrefixFn out;
    out.val_ = Sampled1D::from_spectrum(grid.L, c, oversample, 1.0 / grid.L);
    std::vector<cplx> d(c.size(), cplx(0.0, 0.0));
    for (int ky = 1; ky < grid.N; ++ky)
        d[static_cast<std::size_t>(ky)] = c[static_cast<std::size_t>(ky)] / cplx(0.0, grid.xi(ky));
    out.anti_ = Sampled1D::from_spectrum(grid.L, d, oversample, 1.0 / grid.L);
    out.lin_ = c[0].real() / grid.L;
    out.anti0_ = out.anti_.eval(0.0);
    return out;
}

double RowPrefixFn::antideriv(double y) const {
    return anti_.eval(y) - anti0_ + lin_ * y;
}

}  // namespace ym2
