#include "ym2/ecal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ym2 {

SteppedTimeFn::SteppedTimeFn(std::vector<double> cuts, std::vector<double> vals)
    : cuts_(std::move(cuts)), vals_(std::move(vals)) {
    if (vals_.size() != cuts_.size() + 1)
        throw std::invalid_argument("SteppedTimeFn: need one more value than cuts");
    for (std::size_t i = 0; i < cuts_.size(); ++i) {
        if (!(cuts_[i] > 0.0 && cuts_[i] < 1.0))
            throw std::invalid_argument("SteppedTimeFn: cuts must lie inside (0,1)");
        if (i > 0 && !(cuts_[i] > cuts_[i - 1]))
            throw std::invalid_argument("SteppedTimeFn: cuts must increase strictly");
    }
    for (double v : vals_)
        if (!std::isfinite(v)) throw std::invalid_argument("SteppedTimeFn: values must be finite");
}

SteppedTimeFn SteppedTimeFn::constant(double v) { return SteppedTimeFn({}, {v}); }

SteppedTimeFn SteppedTimeFn::indicator(double s, double t) {
    if (!(s <= t)) throw std::invalid_argument("SteppedTimeFn::indicator: need s <= t");
    std::vector<double> cuts, vals;
    const bool cut_s = s > 0.0 && s < 1.0;
    const bool cut_t = t > 0.0 && t < 1.0;
    if (cut_s) cuts.push_back(s);
    if (cut_t && (!cut_s || t > s)) cuts.push_back(t);
    if (cuts.empty()) return constant(s <= 0.0 && t >= 1.0 ? 1.0 : 0.0);
    vals.assign(cuts.size() + 1, 0.0);
    // The interval [max(s,0), min(t,1)] carries the value 1.
    vals[cut_s ? 1 : 0] = 1.0;
    if (cut_s && cut_t && !(t > s)) vals.assign(cuts.size() + 1, 0.0);
    return SteppedTimeFn(std::move(cuts), std::move(vals));
}

SteppedTimeFn SteppedTimeFn::sign_steps(const Curve& c) {
    std::vector<double> cuts, vals;
    for (int i = 0; i < c.segments(); ++i) {
        const Segment s = c.segment(i);
        if (i > 0) cuts.push_back(s.t0);
        vals.push_back(s.dy() > 0.0 ? 1.0 : (s.dy() < 0.0 ? -1.0 : 0.0));
    }
    return SteppedTimeFn(std::move(cuts), std::move(vals));
}

double SteppedTimeFn::at(double t) const {
    std::size_t i = 0;
    while (i < cuts_.size() && t > cuts_[i]) ++i;
    if (i < cuts_.size() && t == cuts_[i]) return 0.5 * (vals_[i] + vals_[i + 1]);
    return vals_[i];
}

double SteppedTimeFn::bound() const {
    double b = 0.0;
    for (double v : vals_) b = std::max(b, std::abs(v));
    return b;
}

GridField apply_Ec(const TorusGrid& grid, const Curve& c, const SteppedTimeFn& h) {
    const auto bb = c.bbox();
    if (!(grid.in_domain(bb[0], bb[2]) && grid.in_domain(bb[1], bb[3])))
        throw std::invalid_argument("apply_Ec: curve leaves the grid domain");

    GridField out(grid, 1);
    const int N = grid.N;
    const double dx = grid.h();
    std::vector<double> diff(static_cast<std::size_t>(N) + 1);

    for (int iy = 0; iy < N; ++iy) {
        const double y = grid.node(iy);
        std::fill(diff.begin(), diff.end(), 0.0);
        bool any = false;
        for (int i = 0; i < c.segments(); ++i) {
            const Segment s = c.segment(i);
            if (s.dy() == 0.0) continue;
            const double lo = std::min(s.ay, s.by);
            const double hi = std::max(s.ay, s.by);
            if (y < lo || y > hi) continue;
            const double frac = (y > lo && y < hi) ? 1.0 : 0.5;
            const double u = (y - s.ay) / s.dy();
            const double tstar = s.t0 + u * s.dt();
            const double xlim = s.ax + u * s.dx();
            const double w = (s.dy() > 0.0 ? 1.0 : -1.0) * h.at(tstar) * frac;
            if (w == 0.0) continue;
            const int ixmax = std::min(static_cast<int>(std::floor(xlim / dx)), N - 1);
            diff[0] += w;
            diff[static_cast<std::size_t>(ixmax) + 1] -= w;
            any = true;
        }
        if (!any) continue;
        double acc = 0.0;
        double* row = out.channel(0) + static_cast<std::size_t>(iy) * N;
        for (int ix = 0; ix < N; ++ix) {
            acc += diff[static_cast<std::size_t>(ix)];
            row[ix] = acc;
        }
    }
    return out;
}

double ehat(const Curve& c, const GridField& H, int ch, const SteppedTimeFn& h, int nodes_min) {
    const TorusGrid& grid = H.grid();
    const int N = grid.N;
    const double dx = grid.h();

    // Rasterized prefix sums: pre[iy*(N+1)+k] = sum of the first k row entries.
    std::vector<double> pre(static_cast<std::size_t>(N) * (N + 1));
    for (int iy = 0; iy < N; ++iy) {
        const double* row = H.channel(ch) + static_cast<std::size_t>(iy) * N;
        double* p = pre.data() + static_cast<std::size_t>(iy) * (N + 1);
        p[0] = 0.0;
        for (int k = 0; k < N; ++k) p[k + 1] = p[k] + row[k];
    }
    const auto inner = [&](double a, double y) {
        const int iy = (static_cast<int>(std::lround(y / dx)) % N + N) % N;
        const int ixmax = std::min(static_cast<int>(std::floor(a / dx)), N - 1);
        return dx * pre[static_cast<std::size_t>(iy) * (N + 1) + ixmax + 1];
    };

    // Breakpoints: curve knots plus step cuts.
    std::vector<double> breaks;
    for (const auto& k : c.knots()) breaks.push_back(k.t);
    for (double t : h.cuts()) breaks.push_back(t);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    double acc = 0.0;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        const double t0 = breaks[b];
        const double t1 = breaks[b + 1];
        if (!(t1 > t0)) continue;
        const auto v = c.velocity(0.5 * (t0 + t1));
        if (v[1] == 0.0) continue;
        const double hval = h.at(0.5 * (t0 + t1));
        if (hval == 0.0) continue;
        const int steps = std::max(2, static_cast<int>(std::ceil(nodes_min * (t1 - t0))));
        const double dt = (t1 - t0) / steps;
        double piece = 0.0;
        double prev = 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double t = t0 + i * dt;
            const auto p = c.eval(t);
            const double f = inner(p[0], p[1]);
            if (i > 0) piece += 0.5 * (prev + f);
            prev = f;
        }
        acc += hval * v[1] * piece * dt;
    }
    return acc;
}

}  // namespace ym2
