#pragma once
// Algebra-valued white noise on the torus grid.
//
// A NoiseSample is a pure function of (grid, dim, seed): the complex
// coefficient of channel ch at Fourier index (kx,ky) is derived from a
// counter-based gaussian stream, with Hermitian symmetry enforced by
// generating on canonical index pairs.  Coefficients are normalized so the
// component of every L^2-orthonormal Fourier mode is standard normal, which
// gives the componentwise covariance
//     E[ W(f)_k W(g)_l ] = delta_{kl} <f,g>_{L^2}.
//
// pair(..) computes W(S f) = <W, S f> with S a spectral multiplier (chi_j /
// rho_j tables from partition.hpp, or none); smoothed fields realize S_j W
// on the grid.  collapse helpers produce, for a fixed abscissa a, the exact
// 1-D y-spectrum of  y -> int_0^a (S W)(x,y) dx,  the workhorse for curve
// integrals along vertical segments.

#include <cstdint>
#include <vector>

#include "ym2/fourier.hpp"
#include "ym2/grid.hpp"
#include "ym2/liealg.hpp"

namespace ym2 {

class NoiseSample {
public:
    NoiseSample(const TorusGrid& grid, int dim, std::uint64_t seed);

    const TorusGrid& grid() const { return grid_; }
    int dim() const { return dim_; }
    std::uint64_t seed() const { return seed_; }

    // Coefficient of channel ch at Fourier index (kx,ky), indices in [0,N).
    cplx coeff(int ch, int kx, int ky) const;

    // Coefficients along an explicit linear-index mode list.
    void coeffs_at(int ch, const std::vector<std::uint32_t>& modes, std::vector<cplx>& out) const;

    // out[ky*N+kx] = coeff * mult (mult == nullptr keeps all resolved modes).
    void fill_filtered(int ch, const std::vector<double>* mult, std::vector<cplx>& out) const;

    // Real smoothed field (all channels) for the given multiplier.
    GridField realize(const std::vector<double>* mult) const;

    // Componentwise pairing <W, S f> for f given by torus coefficients or
    // grid samples.  Returns one value per algebra channel.
    RVec pair_spectrum(const std::vector<cplx>& fhat, const std::vector<double>* mult) const;
    RVec pair_field(const GridField& f, int fch, const std::vector<double>* mult) const;

private:
    TorusGrid grid_;
    int dim_;
    std::uint64_t seed_;
};

// Linear indices of the nonzero multiplier entries (iteration order fixed).
std::vector<std::uint32_t> nonzero_modes(const std::vector<double>& mult);

// tau[kx] = int_0^a exp(+i xi_kx x) dx, the x1 prefix-integral weights.
std::vector<cplx> prefix_tau(const TorusGrid& grid, double a);

// Accumulate the row collapse c[ky] += z_m * mult_m * tau[kx(m)] over the
// listed modes; z must align with `modes`.
void accumulate_collapse(const TorusGrid& grid, const std::vector<std::uint32_t>& modes,
                         const std::vector<cplx>& z, const std::vector<double>& mult,
                         const std::vector<cplx>& tau, std::vector<cplx>& c);

// Band-limited prefix function of one channel:
//   value(y)     = int_0^a (S W)(x,y) dx
//   antideriv(y) = int_0^y value(eta) d eta
class RowPrefixFn {
public:
    RowPrefixFn() = default;
    RowPrefixFn(const NoiseSample& W, int ch, const std::vector<double>* mult, double a,
                int oversample = 16);
    // Build from an externally assembled row spectrum c[ky].
    static RowPrefixFn from_row_spectrum(const TorusGrid& grid, const std::vector<cplx>& c,
                                         int oversample = 16);

    double value(double y) const { return val_.eval(y); }
    double antideriv(double y) const;

private:
    Sampled1D val_;
    Sampled1D anti_;
    double lin_ = 0.0;
    double anti0_ = 0.0;
};

}  // namespace ym2
