#pragma once
// Parallel transport of the axial-gauge connection driven by a smoothed
// noise sample.
//
// In axial gauge the connection has only a dx2 component,
//   A_2(x1, x2) = int_0^{x1} (S_j W)(x, x2) dx        (per algebra channel),
// so along a curve c the transport solves  U'(t) = c2'(t) A_2(c(t)) U(t),
// U(0) = I.  The solver takes one group-exponential step per interval with
// the generator frozen at the interval midpoint (Magnus midpoint rule,
// second order).  Along vertical segments the generator comes from exact
// band-limited row collapses; skew segments fall back to direct mode sums.
//
// lie_bm_oracle is an independent reference process: the geometric Euler
// scheme U_{k+1} = U_k exp(-dB_k) for Brownian motion on SU(n) run in an
// area schedule, whose endpoint law is the heat kernel at the total area.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ym2/curves.hpp"
#include "ym2/liealg.hpp"
#include "ym2/noise.hpp"
#include "ym2/partition.hpp"
#include "ym2/roughpath.hpp"

namespace ym2 {

// Per-channel prefix integrals of a smoothed sample, with cached
// per-abscissa row collapses.  Not safe for concurrent use.
class SmoothedPrefixField {
public:
    SmoothedPrefixField(const NoiseSample& W, int j);

    const TorusGrid& grid() const { return grid_; }
    int dim() const { return dim_; }
    int band() const { return j_; }

    // P_ch(a, y) = int_0^a (S_j W_ch)(x, y) dx by direct mode summation.
    double prefix(int ch, double a, double y) const;

    // Cached row collapse at abscissa a (one RowPrefixFn per channel).
    const std::vector<RowPrefixFn>& row(double a) const;

private:
    TorusGrid grid_;
    int dim_;
    int j_;
    const BandTable* band_;  // shared process-lifetime table
    std::vector<std::vector<cplx>> z_;
    mutable std::map<std::uint64_t, std::vector<RowPrefixFn>> cache_;
};

enum class StepRule {
    midpoint,        // exp(A(t_mid) dt) per interval, second order
    exact_vertical,  // exp(int A dt) with the integral exact on vertical
                     // segments (commutator-only error); skew segments
                     // still use the midpoint generator
};

struct TransportOptions {
    int steps = 1 << 12;     // starting interval count
    bool adapt = true;       // double the interval count until halving it
                             // moves U(1) by at most step_tol
    double step_tol = 1e-8;
    int max_steps = 1 << 22;
    StepRule rule = StepRule::midpoint;
    std::vector<int> basis_map;  // noise channel -> su(n) basis index; empty
                                 // means identity (requires dim == n^2 - 1)
};

struct TransportPath {
    std::vector<double> t;
    std::vector<Mat> U;  // U[0] = identity

    int nodes() const { return static_cast<int>(t.size()); }
    void to_csv(const std::string& path) const;
};

// Inverse of TransportPath::to_csv; throws std::runtime_error on malformed
// input.
TransportPath transport_path_from_csv(const std::string& path);

TransportPath parallel_transport(int n, const Curve& c, const SmoothedPrefixField& F,
                                 const TransportOptions& opt = {});

// Endpoint U(1) only (no path storage).
Mat holonomy(int n, const Curve& c, const SmoothedPrefixField& F,
             const TransportOptions& opt = {});

// Per-channel line integral int_{t0}^{t1} c2'(t) P_ch(c(t)) dt: exact
// antiderivative differences on vertical segments, adaptive quadrature on
// skew ones.
RVec line_integral_A(const Curve& c, const SmoothedPrefixField& F, double t0 = 0.0,
                     double t1 = 1.0, double tol = 1e-10);

// Gap between two transports of the same curve on a shared grid: the
// uniform Hilbert-Schmidt distance and a Hoelder rough-path distance of the
// matrix-valued paths (flattened to real coordinates and lifted through
// their polyline signatures on a subsampled grid).
struct TransportGap {
    double sup_hs;
    double holder;
};

TransportGap transport_gap(int n, const Curve& c, const SmoothedPrefixField& A,
                           const SmoothedPrefixField& B, const TransportOptions& opt = {},
                           double alpha = 0.4, int holder_nodes = 129);

// Geometric Euler scheme for SU(n) Brownian motion along a nondecreasing
// area schedule with area[0] = 0; all randomness derives from `seed`.
TransportPath lie_bm_oracle(int n, std::uint64_t seed, const std::vector<double>& t,
                            const std::vector<double>& area);

// Wilson observables.
double re_trace(const Mat& U);
double adjoint_character(const Mat& U);  // |tr U|^2 - 1

}  // namespace ym2
