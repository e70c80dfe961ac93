#pragma once
// Piecewise-linear parametrized curves c : [0,1] -> R^2 and lassos.
//
// Knots carry strictly increasing times t_0 = 0 < ... < t_m = 1; the first
// coordinate stays strictly positive (standing assumption used by the axial
// gauge).  Zero-length segments (pauses) are legal and useful for aligning
// the time parametrizations of two curves.
//
// Orientation conventions: a closed loop is "anticlockwise" when its
// shoelace area is positive.  Concatenation runs its first argument on
// [0,1/2] and the second on [1/2,1] (both at doubled speed); a lasso
// traverses stem, loop, reversed stem.

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

namespace ym2 {

struct CurvePoint {
    double t;
    double x1;
    double x2;
};

struct Segment {
    double t0, t1;     // parameter interval
    double ax, ay;     // start point
    double bx, by;     // end point
    double dt() const { return t1 - t0; }
    double dx() const { return bx - ax; }
    double dy() const { return by - ay; }
    bool pause() const { return dx() == 0.0 && dy() == 0.0; }
    bool vertical() const { return dx() == 0.0 && dy() != 0.0; }
    bool horizontal() const { return dy() == 0.0 && dx() != 0.0; }
    std::array<double, 2> at(double t) const;  // t in [t0,t1]
};

class Curve {
public:
    Curve() = default;
    explicit Curve(std::vector<CurvePoint> knots);

    const std::vector<CurvePoint>& knots() const { return knots_; }
    int segments() const { return static_cast<int>(knots_.size()) - 1; }
    Segment segment(int i) const;

    std::array<double, 2> eval(double t) const;
    std::array<double, 2> velocity(double t) const;  // right-continuous

    bool closed(double tol = 1e-12) const;
    bool rectilinear() const;  // every segment axis-parallel or a pause
    double length() const;
    std::array<double, 4> bbox() const;  // x1min, x1max, x2min, x2max

    Curve reversed() const;
    static Curve concat(const Curve& first, const Curve& second, double tol = 1e-9);

    // Shoelace area of the closing polygon (closed curves; positive =
    // anticlockwise).
    double signed_area() const;
    bool simple(double tol = 1e-12) const;  // closed curve without self-crossings

    nlohmann::json to_json() const;
    static Curve from_json(const nlohmann::json& j);

    // Anticlockwise axis-aligned rectangle loop with corner (x0,y0), uniform
    // parameter speed, starting and ending at the corner.
    static Curve rectangle_loop(double x0, double y0, double w, double h);
    // Straight two-knot path.
    static Curve line(double x0, double y0, double x1, double y1);
    // Closed polygon through the given corners (uniform knot times).
    static Curve polygon_loop(const std::vector<std::array<double, 2>>& corners);

private:
    std::vector<CurvePoint> knots_;
};

struct Lasso {
    Curve stem;  // from the base point to the loop's base point
    Curve loop;  // closed simple anticlockwise loop at the stem's endpoint

    Curve composite() const;  // stem, loop, reversed stem
    double enclosed_area() const { return loop.signed_area(); }

    nlohmann::json to_json() const;
    static Lasso from_json(const nlohmann::json& j);

    // Axial rectangle lasso: stem straight from `base` to `corner`, loop the
    // anticlockwise rectangle [corner.x, +eps1] x [corner.y, +eps2].
    static Lasso rectangle(std::array<double, 2> base, std::array<double, 2> corner,
                           double eps1, double eps2);
};

// Exact combinatorial sup over windows [s,t] and points x of
// |E_c 1_{[s,t]}(x)|, i.e. the largest absolute signed crossing count.
int rotation_count(const Curve& c);

// Polygon helpers (positively oriented point lists).
double polygon_area(const std::vector<std::array<double, 2>>& pts);
std::vector<std::array<double, 2>> clip_below(const std::vector<std::array<double, 2>>& pts,
                                              double ylevel);

// Vertices of the polygon traced by a closed curve (pauses dropped).
std::vector<std::array<double, 2>> polygon_of(const Curve& loop);

}  // namespace ym2
