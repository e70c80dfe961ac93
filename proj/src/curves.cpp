#include "ym2/curves.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ym2 {

std::array<double, 2> Segment::at(double t) const {
    if (dt() <= 0.0) return {ax, ay};
    const double u = (t - t0) / dt();
    return {ax + u * dx(), ay + u * dy()};
}

Curve::Curve(std::vector<CurvePoint> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 2) throw std::invalid_argument("Curve: need at least two knots");
    if (std::abs(knots_.front().t) > 1e-12 || std::abs(knots_.back().t - 1.0) > 1e-12)
        throw std::invalid_argument("Curve: parameter must run over [0,1]");
    knots_.front().t = 0.0;
    knots_.back().t = 1.0;
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i].t > knots_[i - 1].t))
            throw std::invalid_argument("Curve: knot times must increase strictly");
    for (const auto& k : knots_)
        if (!(k.x1 > 0.0)) throw std::invalid_argument("Curve: x1 must stay positive");
}

Segment Curve::segment(int i) const {
    const CurvePoint& a = knots_[static_cast<std::size_t>(i)];
    const CurvePoint& b = knots_[static_cast<std::size_t>(i) + 1];
    return {a.t, b.t, a.x1, a.x2, b.x1, b.x2};
}

std::array<double, 2> Curve::eval(double t) const {
    if (t <= 0.0) return {knots_.front().x1, knots_.front().x2};
    if (t >= 1.0) return {knots_.back().x1, knots_.back().x2};
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                               [](double v, const CurvePoint& k) { return v < k.t; });
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
    return segment(static_cast<int>(i)).at(t);
}

std::array<double, 2> Curve::velocity(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    std::size_t i = 0;
    for (std::size_t k = 0; k + 1 < knots_.size(); ++k)
        if (knots_[k].t <= t) i = k;
    const Segment s = segment(static_cast<int>(i));
    return {s.dx() / s.dt(), s.dy() / s.dt()};
}

bool Curve::closed(double tol) const {
    return std::abs(knots_.front().x1 - knots_.back().x1) <= tol &&
           std::abs(knots_.front().x2 - knots_.back().x2) <= tol;
}

bool Curve::rectilinear() const {
    for (int i = 0; i < segments(); ++i) {
        const Segment s = segment(i);
        if (s.dx() != 0.0 && s.dy() != 0.0) return false;
    }
    return true;
}

double Curve::length() const {
    double acc = 0.0;
    for (int i = 0; i < segments(); ++i) {
        const Segment s = segment(i);
        acc += std::hypot(s.dx(), s.dy());
    }
    return acc;
}

std::array<double, 4> Curve::bbox() const {
    std::array<double, 4> b{knots_[0].x1, knots_[0].x1, knots_[0].x2, knots_[0].x2};
    for (const auto& k : knots_) {
        b[0] = std::min(b[0], k.x1);
        b[1] = std::max(b[1], k.x1);
        b[2] = std::min(b[2], k.x2);
        b[3] = std::max(b[3], k.x2);
    }
    return b;
}

Curve Curve::reversed() const {
    std::vector<CurvePoint> rk;
    rk.reserve(knots_.size());
    for (auto it = knots_.rbegin(); it != knots_.rend(); ++it)
        rk.push_back({1.0 - it->t, it->x1, it->x2});
    return Curve(std::move(rk));
}

Curve Curve::concat(const Curve& first, const Curve& second, double tol) {
    const auto& fe = first.knots_.back();
    const auto& ss = second.knots_.front();
    if (std::hypot(fe.x1 - ss.x1, fe.x2 - ss.x2) > tol)
        throw std::invalid_argument("Curve::concat: endpoints do not meet");
    std::vector<CurvePoint> k;
    k.reserve(first.knots_.size() + second.knots_.size() - 1);
    for (const auto& p : first.knots_) k.push_back({0.5 * p.t, p.x1, p.x2});
    for (std::size_t i = 1; i < second.knots_.size(); ++i) {
        const auto& p = second.knots_[i];
        k.push_back({0.5 + 0.5 * p.t, p.x1, p.x2});
    }
    return Curve(std::move(k));
}

double Curve::signed_area() const {
    double acc = 0.0;
    const std::size_t m = knots_.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = knots_[i];
        const auto& b = knots_[(i + 1) % m];
        acc += a.x1 * b.x2 - b.x1 * a.x2;
    }
    return 0.5 * acc;
}

namespace {

int orient(double ax, double ay, double bx, double by, double cx, double cy) {
    const double v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    if (v > 1e-15) return 1;
    if (v < -1e-15) return -1;
    return 0;
}

bool on_seg(double ax, double ay, double bx, double by, double px, double py) {
    return std::min(ax, bx) - 1e-15 <= px && px <= std::max(ax, bx) + 1e-15 &&
           std::min(ay, by) - 1e-15 <= py && py <= std::max(ay, by) + 1e-15;
}

bool segments_cross(const Segment& s, const Segment& u) {
    const int o1 = orient(s.ax, s.ay, s.bx, s.by, u.ax, u.ay);
    const int o2 = orient(s.ax, s.ay, s.bx, s.by, u.bx, u.by);
    const int o3 = orient(u.ax, u.ay, u.bx, u.by, s.ax, s.ay);
    const int o4 = orient(u.ax, u.ay, u.bx, u.by, s.bx, s.by);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_seg(s.ax, s.ay, s.bx, s.by, u.ax, u.ay)) return true;
    if (o2 == 0 && on_seg(s.ax, s.ay, s.bx, s.by, u.bx, u.by)) return true;
    if (o3 == 0 && on_seg(u.ax, u.ay, u.bx, u.by, s.ax, s.ay)) return true;
    if (o4 == 0 && on_seg(u.ax, u.ay, u.bx, u.by, s.bx, s.by)) return true;
    return false;
}

bool same_point(double ax, double ay, double bx, double by, double tol) {
    return std::abs(ax - bx) <= tol && std::abs(ay - by) <= tol;
}

}  // namespace

bool Curve::simple(double tol) const {
    if (!closed(tol)) return false;
    std::vector<Segment> segs;
    for (int i = 0; i < segments(); ++i) {
        const Segment s = segment(i);
        if (!s.pause()) segs.push_back(s);
    }
    const std::size_t m = segs.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const Segment& a = segs[i];
            const Segment& b = segs[j];
            const bool adj_fwd = same_point(a.bx, a.by, b.ax, b.ay, tol);
            const bool adj_back = (i == 0 && j == m - 1) && same_point(b.bx, b.by, a.ax, a.ay, tol);
            if (adj_fwd || adj_back) {
                // Neighbours may touch only at the shared knot.
                const Segment& lead = adj_fwd ? a : b;
                const Segment& tail = adj_fwd ? b : a;
                if (orient(lead.ax, lead.ay, lead.bx, lead.by, tail.bx, tail.by) == 0 &&
                    on_seg(lead.ax, lead.ay, lead.bx, lead.by, tail.bx, tail.by) &&
                    !same_point(lead.ax, lead.ay, tail.bx, tail.by, tol))
                    return false;
                continue;
            }
            if (segments_cross(a, b)) return false;
        }
    }
    return true;
}

nlohmann::json Curve::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& k : knots_) j.push_back({k.t, k.x1, k.x2});
    return j;
}

Curve Curve::from_json(const nlohmann::json& j) {
    std::vector<CurvePoint> k;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != 3)
            throw std::invalid_argument("Curve::from_json: rows must be [t,x1,x2]");
        k.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
    }
    return Curve(std::move(k));
}

Curve Curve::rectangle_loop(double x0, double y0, double w, double h) {
    return Curve({{0.00, x0, y0},
                  {0.25, x0 + w, y0},
                  {0.50, x0 + w, y0 + h},
                  {0.75, x0, y0 + h},
                  {1.00, x0, y0}});
}

Curve Curve::line(double x0, double y0, double x1, double y1) {
    return Curve({{0.0, x0, y0}, {1.0, x1, y1}});
}

Curve Curve::polygon_loop(const std::vector<std::array<double, 2>>& corners) {
    const std::size_t m = corners.size();
    if (m < 3) throw std::invalid_argument("polygon_loop: need >= 3 corners");
    std::vector<CurvePoint> k;
    for (std::size_t i = 0; i <= m; ++i) {
        const auto& p = corners[i % m];
        k.push_back({static_cast<double>(i) / m, p[0], p[1]});
    }
    k.back().t = 1.0;
    return Curve(std::move(k));
}

Curve Lasso::composite() const {
    return Curve::concat(Curve::concat(stem, loop), stem.reversed());
}

nlohmann::json Lasso::to_json() const {
    return nlohmann::json{{"stem", stem.to_json()}, {"loop", loop.to_json()}};
}

Lasso Lasso::from_json(const nlohmann::json& j) {
    Lasso l;
    l.stem = Curve::from_json(j.at("stem"));
    l.loop = Curve::from_json(j.at("loop"));
    const auto se = l.stem.knots().back();
    const auto ls = l.loop.knots().front();
    if (std::hypot(se.x1 - ls.x1, se.x2 - ls.x2) > 1e-9)
        throw std::invalid_argument("Lasso: stem must end at the loop base");
    if (!l.loop.closed(1e-9)) throw std::invalid_argument("Lasso: loop must be closed");
    return l;
}

Lasso Lasso::rectangle(std::array<double, 2> base, std::array<double, 2> corner,
                       double eps1, double eps2) {
    Lasso l;
    l.stem = Curve::line(base[0], base[1], corner[0], corner[1]);
    l.loop = Curve::rectangle_loop(corner[0], corner[1], eps1, eps2);
    return l;
}

namespace {

struct Crossing {
    double tstar;
    double xlim;
    int sign;
};

// All strictly interior level crossings of the curve at height y.
std::vector<Crossing> crossings_at(const Curve& c, double y) {
    std::vector<Crossing> ev;
    for (int i = 0; i < c.segments(); ++i) {
        const Segment s = c.segment(i);
        if (s.dy() == 0.0) continue;
        const double lo = std::min(s.ay, s.by);
        const double hi = std::max(s.ay, s.by);
        if (!(y > lo && y < hi)) continue;
        const double u = (y - s.ay) / s.dy();
        ev.push_back({s.t0 + u * s.dt(), s.ax + u * s.dx(), s.dy() > 0.0 ? 1 : -1});
    }
    std::sort(ev.begin(), ev.end(), [](const Crossing& a, const Crossing& b) { return a.tstar < b.tstar; });
    return ev;
}

// Largest |contiguous partial sum| of the sign sequence restricted to
// crossings with xlim > threshold.
int best_window(const std::vector<Crossing>& ev, double threshold) {
    int prefix = 0, lo = 0, hi = 0;
    for (const Crossing& e : ev) {
        if (e.xlim <= threshold) continue;
        prefix += e.sign;
        lo = std::min(lo, prefix);
        hi = std::max(hi, prefix);
    }
    return hi - lo;
}

}  // namespace

int rotation_count(const Curve& c) {
    // Candidate levels: midpoints of the y-bands delimited by knot heights and
    // by heights where two crossing abscissas exchange order.
    std::set<double> cuts;
    for (const auto& k : c.knots()) cuts.insert(k.x2);
    const int m = c.segments();
    for (int i = 0; i < m; ++i) {
        const Segment a = c.segment(i);
        if (a.dy() == 0.0) continue;
        for (int j = i + 1; j < m; ++j) {
            const Segment b = c.segment(j);
            if (b.dy() == 0.0) continue;
            // xlim_a(y) = a.ax + (y - a.ay) * a.dx()/a.dy(); equate with b.
            const double sa = a.dx() / a.dy();
            const double sb = b.dx() / b.dy();
            if (sa == sb) continue;
            const double y = ((b.ax - b.ay * sb) - (a.ax - a.ay * sa)) / (sa - sb);
            cuts.insert(y);
        }
    }
    std::vector<double> levels(cuts.begin(), cuts.end());
    int best = 0;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        const double y = 0.5 * (levels[i] + levels[i + 1]);
        const auto ev = crossings_at(c, y);
        if (ev.empty()) continue;
        std::vector<double> xs;
        xs.reserve(ev.size() + 1);
        for (const auto& e : ev) xs.push_back(e.xlim);
        std::sort(xs.begin(), xs.end());
        std::vector<double> thresholds;
        thresholds.push_back(0.5 * xs.front());  // below every abscissa (x1 > 0)
        for (std::size_t r = 0; r + 1 < xs.size(); ++r)
            thresholds.push_back(0.5 * (xs[r] + xs[r + 1]));
        for (double th : thresholds) best = std::max(best, best_window(ev, th));
    }
    return best;
}

double polygon_area(const std::vector<std::array<double, 2>>& pts) {
    double acc = 0.0;
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % m];
        acc += a[0] * b[1] - b[0] * a[1];
    }
    return 0.5 * acc;
}

std::vector<std::array<double, 2>> clip_below(const std::vector<std::array<double, 2>>& pts,
                                              double ylevel) {
    std::vector<std::array<double, 2>> out;
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % m];
        const bool ain = a[1] <= ylevel;
        const bool bin = b[1] <= ylevel;
        if (ain) out.push_back(a);
        if (ain != bin) {
            const double u = (ylevel - a[1]) / (b[1] - a[1]);
            out.push_back({a[0] + u * (b[0] - a[0]), ylevel});
        }
    }
    return out;
}

std::vector<std::array<double, 2>> polygon_of(const Curve& loop) {
    std::vector<std::array<double, 2>> pts;
    const auto& k = loop.knots();
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {  // final knot repeats the first
        if (!pts.empty() && std::abs(pts.back()[0] - k[i].x1) <= 1e-14 &&
            std::abs(pts.back()[1] - k[i].x2) <= 1e-14)
            continue;
        pts.push_back({k[i].x1, k[i].x2});
    }
    return pts;
}

}  // namespace ym2
