#include "ym2/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ym2 {

MomentSummary summarize(const std::vector<double>& xs) {
    MomentSummary s;
    s.n = static_cast<long long>(xs.size());
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n < 2) return s;
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - s.mean;
        ss += d * d;
    }
    s.var = ss / static_cast<double>(s.n - 1);
    s.se = std::sqrt(s.var / static_cast<double>(s.n));
    return s;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("pearson: length mismatch");
    const std::size_t n = a.size();
    if (n < 2) throw std::invalid_argument("pearson: need >= 2 points");
    const MomentSummary sa = summarize(a);
    const MomentSummary sb = summarize(b);
    double cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) cov += (a[i] - sa.mean) * (b[i] - sb.mean);
    cov /= static_cast<double>(n - 1);
    const double denom = std::sqrt(sa.var * sb.var);
    if (denom == 0.0) return a == b ? 1.0 : 0.0;
    return cov / denom;
}

double t_quantile_975(int df) {
    // Two-sided 95% Student t table; converges to the normal quantile.
    static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                   2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                   2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                   2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
    if (df < 1) return std::numeric_limits<double>::infinity();
    if (df <= 30) return table[df - 1];
    if (df <= 60) return 2.000;
    return 1.960;
}

OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("ols_fit: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("ols_fit: need >= 2 points");
    const MomentSummary sx = summarize(x);
    const MomentSummary sy = summarize(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - sx.mean) * (y[i] - sy.mean);
        sxx += (x[i] - sx.mean) * (x[i] - sx.mean);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols_fit: degenerate abscissae");
    OlsFit f;
    f.slope = sxy / sxx;
    f.intercept = sy.mean - f.slope * sx.mean;
    f.residuals.resize(n);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        f.residuals[i] = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += f.residuals[i] * f.residuals[i];
        ss_tot += (y[i] - sy.mean) * (y[i] - sy.mean);
    }
    f.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    if (n > 2) {
        const double sigma2 = ss_res / static_cast<double>(n - 2);
        f.se_slope = std::sqrt(sigma2 / sxx);
        const double hw = t_quantile_975(static_cast<int>(n) - 2) * f.se_slope;
        f.ci95 = {f.slope - hw, f.slope + hw};
    } else {
        f.se_slope = 0.0;
        f.ci95 = {f.slope, f.slope};
    }
    return f;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double x = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] <= x) ++ia;
        while (ib < b.size() && b[ib] <= x) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    return d;
}

double ks_critical(std::size_t n, std::size_t m, double alpha) {
    if (n == 0 || m == 0) throw std::invalid_argument("ks_critical: empty sample");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ks_critical: alpha in (0,1)");
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

}  // namespace ym2
