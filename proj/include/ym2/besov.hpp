#pragma once
// Besov norms B^s_{p,infinity} on the torus grid.
//
// Dyadic route:   sup_j 2^{js} || Delta_j f ||_{L^p},  Delta_j the block
// multiplier from partition.hpp, j = -1 .. j_max(grid).
// Difference route: || f ||_{L^p} + sup_h || f - tau_h f ||_{L^p} / |h|^s
// over lattice translations h of dyadic magnitude <= L/4 (axis and diagonal
// directions); translations on the grid are exact rolls.

#include <vector>

#include "ym2/fourier.hpp"
#include "ym2/grid.hpp"

namespace ym2 {

constexpr double kPInf = -1.0;  // marker for p = infinity

double lp_norm(const TorusGrid& grid, const double* vals, double p);

struct BesovProfile {
    std::vector<int> j;
    std::vector<double> block_lp;  // || Delta_j f ||_p
    double value = 0.0;            // sup_j 2^{js} block_lp
};

BesovProfile besov_norm(const GridField& f, int ch, double s, double p, int jlo = -1,
                        int jhi = -2 /* -2: grid j_max */);

// Exact-coefficient route (L^2 only, Parseval per block).
BesovProfile besov_norm_spectrum(const TorusGrid& grid, const std::vector<cplx>& fhat, double s,
                                 int jlo = -1, int jhi = -2);

struct DiffSeminorm {
    double seminorm = 0.0;  // sup_h ||f - tau_h f||_p / |h|^s
    double lp = 0.0;        // ||f||_p
    double primed = 0.0;    // lp + seminorm
};

DiffSeminorm besov_diff_seminorm(const GridField& f, int ch, double s, double p);

}  // namespace ym2
