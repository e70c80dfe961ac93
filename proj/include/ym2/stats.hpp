#pragma once
// Small statistics toolkit for the Monte-Carlo harness: moment summaries,
// ordinary least squares on (already transformed) data, Pearson correlation
// and the two-sample Kolmogorov-Smirnov statistic.
//
// Every routine is a pure function of its input vectors and reduces in
// index order, so estimates do not depend on how samples were produced or
// scheduled across workers.

#include <array>
#include <cstddef>
#include <vector>

namespace ym2 {

struct MomentSummary {
    long long n = 0;
    double mean = 0.0;
    double var = 0.0;  // unbiased sample variance (n - 1 normalizer)
    double se = 0.0;   // sqrt(var / n)
};

MomentSummary summarize(const std::vector<double>& xs);

// Pearson correlation coefficient; 0 for degenerate (constant) inputs
// unless the arrays are identical, which reports 1.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
    double se_slope = 0.0;
    std::array<double, 2> ci95{0.0, 0.0};  // slope +- t_{0.975,df} * se
    std::vector<double> residuals;
};

// Least squares line through (x_i, y_i); needs >= 3 points for a finite
// confidence interval.  Callers pass log-transformed data for power-law
// fits.
OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

// Two-sided 97.5% Student t quantile (95% interval half-width factor).
double t_quantile_975(int df);

// sup_x |F_a(x) - F_b(x)| over the pooled sample (inputs copied, sorted).
double ks_statistic(std::vector<double> a, std::vector<double> b);

// Large-sample two-sample critical value c(alpha)*sqrt((n+m)/(n*m)),
// c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical(std::size_t n, std::size_t m, double alpha);

}  // namespace ym2
