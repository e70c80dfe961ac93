#pragma once
// Periodic torus grid [0,L)^2 sampled on N x N lattice nodes and
// multi-channel real fields living on it.
//
// Layout conventions used across the library:
//   * node (ix, iy) sits at (ix*h, iy*h), h = L/N, and represents the
//     cell [ix*h,(ix+1)*h) x [iy*h,(iy+1)*h) in quadrature sums;
//   * arrays are row-major with the y index outer: data[iy*N + ix];
//   * Fourier index k in [0,N) per axis denotes the signed integer
//     frequency k (k < N/2) or k-N (k >= N/2), xi_k = 2*pi*k_signed/L.

#include <cstdint>
#include <string>
#include <vector>

namespace ym2 {

struct TorusGrid {
    double L = 8.0;
    int N = 512;

    TorusGrid() = default;
    TorusGrid(double L_, int N_);

    double h() const { return L / N; }
    std::size_t cells() const { return std::size_t(N) * std::size_t(N); }
    double node(int m) const { return m * h(); }

    int signed_index(int k) const { return k < N / 2 ? k : k - N; }
    double xi(int k) const;                 // per-axis frequency
    double xi_abs(int kx, int ky) const;    // |xi|
    double nyquist() const;                 // pi*N/L

    // Largest dyadic block fully resolved by the grid: 2^{j_max+1} <= pi*N/L.
    int j_max() const;

    // Experiments keep their geometry inside [margin, L-margin]^2.
    double margin() const { return 0.25 * L; }
    bool in_domain(double x1, double x2) const;
    bool in_window(double x1, double x2) const;

    bool operator==(const TorusGrid& o) const { return L == o.L && N == o.N; }
};

class GridField {
public:
    GridField() = default;
    GridField(const TorusGrid& grid, int channels);

    const TorusGrid& grid() const { return grid_; }
    int channels() const { return channels_; }

    double& at(int ch, int ix, int iy);
    double at(int ch, int ix, int iy) const;

    double* channel(int ch);
    const double* channel(int ch) const;

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    // Nearest-node sample lookup for an arbitrary point of the torus.
    double sample(int ch, double x1, double x2) const;

    // Grid quadrature of f*g over the torus (single channels).
    static double inner_l2(const GridField& f, int chf, const GridField& g, int chg);

    // Self-describing export: one JSON header line {"L","N","channels"},
    // then channel-major row-major little-endian doubles.
    void save(const std::string& path) const;
    static GridField load(const std::string& path);

private:
    TorusGrid grid_;
    int channels_ = 0;
    std::vector<double> data_;
};

}  // namespace ym2
