#pragma once
// Dyadic (Littlewood-Paley) partition of unity on frequency space.
//
// rho0 is a radial C^infinity bump built from the exp(-1/x) mollifier with
//   rho0 >= 0,  supp rho0 = {6/7 <= r <= 2},  rho0 = 1 on [1, 12/7],
//   rho0(r) + rho0(r/2) = 1 for 1 <= r <= 24/7.
// The falling edge is defined as 1 - rise(r/2), which makes the telescoping
// identities below hold to roundoff by construction.
//
// Block multipliers:  rho_{-1} = chi0,  rho_j(xi) = rho0(2^{-j}|xi|) (j >= 0),
// cumulative multipliers chi_j(xi) = chi0(2^{-j}|xi|) = sum_{i<=j-1} rho_i(xi),
// with chi0(0) = 1 and chi_0 supported in the unit ball.

#include <cstdint>
#include <vector>

#include "ym2/grid.hpp"

namespace ym2 {

// Band selector accepted by smoothing consumers: cumulative multiplier
// chi_j for 0 <= j <= grid.j_max(), or the full resolved band.
constexpr int kFullBand = 1 << 30;

double smoothstep(double u);     // C^inf, 0 for u<=0, 1 for u>=1
double rho0(double r);
double chi0(double r);
double rho_block(int j, double r);   // j >= -1
double chi_block(int j, double r);   // j >= 0; chi_block(-1,.) == 0

// N*N tables of the multipliers evaluated at the grid frequencies.
std::vector<double> make_rho_table(const TorusGrid& grid, int j);
std::vector<double> make_chi_table(const TorusGrid& grid, int j);

// mult == nullptr is accepted by spectral consumers and means "no filter"
// (all resolved modes), the j = none reference.

// Memoized cumulative multiplier with its sparse support, shared across
// noise samples (tables are grid x band constants).  Returned references
// stay valid for the process lifetime; safe for concurrent readers.
struct BandTable {
    std::vector<double> mult;
    std::vector<std::uint32_t> modes;  // linear indices of nonzero entries
};
const BandTable& cumulative_band(const TorusGrid& grid, int j);  // j or kFullBand

}  // namespace ym2
