#pragma once
// Step-2 truncated tensor algebra over R^d and rough-path lifts.
//
// A Level2Increment is a group-like element (1, x, xx) of the step-2
// truncated tensor algebra: x in R^d, xx in R^{d x d} storing the ordered
// iterated integral int int_{u1<u2} dx_{u1} (x) dx_{u2} in a fixed basis.
// Products follow (1,x,xx) (x) (1,x',xx') = (1, x+x', xx+xx'+x (x) x').
//
// A Level2Path stores the lift at each time node relative to node 0;
// increments between nodes come from group division, so Chen's relation
// holds by construction.  Paths produced here are geometric: the symmetric
// part of every increment's second level equals  x (x) x / 2.

#include <cstdint>
#include <string>
#include <vector>

#include "ym2/curves.hpp"
#include "ym2/liealg.hpp"
#include "ym2/noise.hpp"
#include "ym2/partition.hpp"

namespace ym2 {

struct Level2Increment {
    RVec x;
    RMat xx;

    int dim() const { return static_cast<int>(x.size()); }
    static Level2Increment identity(int dim);
};

Level2Increment tensor_mul(const Level2Increment& a, const Level2Increment& b);
Level2Increment tensor_inv(const Level2Increment& g);

// Exact lift of one straight segment with displacement delta.
Level2Increment seg_lift(const RVec& delta);

// Homogeneous norm |x| + |xx|^{1/2} and the symmetrized distance
// max(norm(a^{-1} b), norm(b^{-1} a)).
double cc_norm(const Level2Increment& g);
double cc_dist(const Level2Increment& a, const Level2Increment& b);

// Geometric (group-like) test: Sym(xx) == x (x) x / 2 within tol (relative
// to 1 + |x|^2).
bool is_group_like(const Level2Increment& g, double tol = 1e-10);

struct Level2Path {
    std::vector<double> t;
    std::vector<Level2Increment> node;  // node[k] = lift over [t_0, t_k]

    int dim() const { return node.empty() ? 0 : node.front().dim(); }
    int nodes() const { return static_cast<int>(t.size()); }
    Level2Increment increment(int k, int l) const;  // lift over [t_k, t_l]

    void to_csv(const std::string& path) const;
    static Level2Path from_csv(const std::string& path);
};

// Exact signature lift of the polyline through pts (one point per node).
Level2Path sig_polyline(const std::vector<double>& t, const std::vector<RVec>& pts);

// Hoelder-type functionals over all node pairs s < t.
double holder_norm(double alpha, const Level2Path& X);
double holder_dist(double alpha, const Level2Path& X, const Level2Path& Y);

// First level X(t) = <W_smoothed, swept region over [0,t]> per algebra
// channel, evaluated exactly in the resolved band; second level is the
// exact signature of the piecewise-linear interpolant on tgrid.  tgrid must
// run over [0,1], contain every curve knot time, and be strictly increasing.
// Rectilinear curves use 1-D row collapses (fast); general polylines fall
// back to per-window swept-region spectra (O(nodes * N^2), test scale).
Level2Path lift_smoothed(const Curve& c, const NoiseSample& W, int j,
                         const std::vector<double>& tgrid);

// Uniform refinement of the curve's knot grid with at least min_nodes nodes.
std::vector<double> refine_knots(const Curve& c, int min_nodes);

}  // namespace ym2
