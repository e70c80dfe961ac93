#pragma once
// FFT plumbing and exact Fourier data for swept regions.
//
// Normalization: the torus Fourier coefficient of f is
//     fhat(k) = (1/L) int f(x) exp(-i xi_k . x) dx,
// the coefficient of f in the orthonormal basis e_k = exp(i xi_k . x)/L of
// L^2([0,L)^2).  For grid samples, fhat = (L/N^2) * forward DFT and
// Parseval  h^2 sum |f|^2 = sum |fhat|^2  holds exactly.

#include <complex>
#include <vector>

#include "ym2/curves.hpp"
#include "ym2/grid.hpp"

namespace ym2 {

using cplx = std::complex<double>;

// In-place unnormalized complex DFTs (forward sign = -1, backward +1),
// FFTW backend, thread-safe.
void fft2(int N, cplx* data, int sign);
void fft1(int M, cplx* data, int sign);

// Torus coefficients of one sampled channel / samples from coefficients.
std::vector<cplx> field_spectrum(const TorusGrid& grid, const double* samples);
std::vector<double> spectrum_samples(const TorusGrid& grid, std::vector<cplx> coeffs);

// Stable oscillatory kernels  int_0^1 e^{-i phi u} du  and  int_0^1 u e^{-i phi u} du.
cplx eint0(double phi);
cplx eint1(double phi);

// Exact torus Fourier coefficients (grid index layout, band-truncated) of the
// signed swept region E_c 1_{[s,t]}: for every curve segment portion inside
// [s,t], the region between the x2 axis slab and the segment, signed by the
// direction of travel in x2.  Closed-form per segment; the curve must stay
// inside [0,L)^2.
std::vector<cplx> sweep_spectrum(const TorusGrid& grid, const Curve& c, double s, double t);

// l2 norm of a coefficient array under an optional multiplier table:
// sqrt(sum |mult*c|^2)  ==  L2 norm of the filtered function.
double spectrum_l2(const std::vector<cplx>& coeffs, const std::vector<double>* mult);

// Periodic 1-D function given by uniform samples; 6-point Lagrange evaluation.
class Sampled1D {
public:
    Sampled1D() = default;

    // g(y) = scale * sum_m c_m exp(+i xi_m y), materialized on an
    // oversample*M grid; the imaginary part is discarded (callers pass
    // Hermitian-symmetric spectra).
    static Sampled1D from_spectrum(double period, const std::vector<cplx>& c, int oversample,
                                   double scale);

    double eval(double y) const;
    double period() const { return period_; }

private:
    double period_ = 1.0;
    std::vector<double> v_;
};

}  // namespace ym2
