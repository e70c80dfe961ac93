#pragma once
// Transfer calculus for swept regions: the operator carrying piecewise
// constant time functions h on [0,1] to signed plane fields
//     (E_c h)(x) = sum over crossings t* of level x2 with x1 <= c1(t*) of
//                  sgn(c2'(t*)) h(t*),
// its rasterization on the torus grid, and the bilinear form
//     ehat(c, H, h) = int h(t) c2'(t) int_0^{c1(t)} H(x1, c2(t)) dx1 dt,
// the formal adjoint of apply_Ec against the grid inner product.
//
// Conventions that make the adjoint identity sharp at finite resolution:
//   * apply_Ec includes a node when node(ix) <= xlim (closed inequality);
//   * grid rows exactly at a segment-endpoint height take the half-sum of
//     the one-sided limits (weight 1/2);
//   * ehat's inner integral is the matching rasterized prefix sum, and its
//     outer integral is a trapezoid rule over >= nodes_min points honoring
//     every curve knot and step cut.

#include <vector>

#include "ym2/curves.hpp"
#include "ym2/grid.hpp"

namespace ym2 {

// Piecewise constant function on [0,1]: value vals[i] on the i-th interval
// delimited by the strictly increasing interior cuts; evaluation at a cut
// returns the half-sum of the one-sided limits.
class SteppedTimeFn {
public:
    SteppedTimeFn() : vals_{0.0} {}
    SteppedTimeFn(std::vector<double> cuts, std::vector<double> vals);

    static SteppedTimeFn constant(double v);
    static SteppedTimeFn indicator(double s, double t);
    // sgn(c2') per curve segment, cut at the knot times.
    static SteppedTimeFn sign_steps(const Curve& c);

    const std::vector<double>& cuts() const { return cuts_; }
    const std::vector<double>& vals() const { return vals_; }

    double at(double t) const;
    double bound() const;  // max |value|

private:
    std::vector<double> cuts_;
    std::vector<double> vals_;
};

// Rasterized E_c h on the grid nodes (single channel).  The curve must stay
// inside [0,L)^2.
GridField apply_Ec(const TorusGrid& grid, const Curve& c, const SteppedTimeFn& h);

// Bilinear form; H is one channel of a grid field.
double ehat(const Curve& c, const GridField& H, int ch, const SteppedTimeFn& h,
            int nodes_min = 20000);

}  // namespace ym2
