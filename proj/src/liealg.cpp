#include "ym2/liealg.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ym2 {

namespace {

std::vector<Mat> build_basis(int n) {
    if (n < 2) throw std::invalid_argument("su_basis: need n >= 2");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<Mat> basis;
    basis.reserve(static_cast<std::size_t>(su_dim(n)));
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            Mat A = Mat::Zero(n, n);
            A(a, b) = cplx(inv_sqrt2, 0.0);
            A(b, a) = cplx(-inv_sqrt2, 0.0);
            basis.push_back(A);
            Mat S = Mat::Zero(n, n);
            S(a, b) = cplx(0.0, inv_sqrt2);
            S(b, a) = cplx(0.0, inv_sqrt2);
            basis.push_back(S);
        }
    }
    for (int m = 1; m < n; ++m) {
        Mat D = Mat::Zero(n, n);
        const double norm = 1.0 / std::sqrt(double(m) * double(m + 1));
        for (int k = 0; k < m; ++k) D(k, k) = cplx(0.0, norm);
        D(m, m) = cplx(0.0, -double(m) * norm);
        basis.push_back(D);
    }
    return basis;
}

}  // namespace

const std::vector<Mat>& su_basis(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<Mat>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_basis(n)).first;
    return it->second;
}

double hs_inner(const Mat& X, const Mat& Y) {
    return (X.adjoint() * Y).trace().real();
}

double hs_norm(const Mat& X) { return std::sqrt(hs_inner(X, X)); }

Mat algebra_matrix(int n, const RVec& coeffs) {
    const auto& basis = su_basis(n);
    if (coeffs.size() != static_cast<Eigen::Index>(basis.size()))
        throw std::invalid_argument("algebra_matrix: coefficient size mismatch");
    Mat X = Mat::Zero(n, n);
    for (std::size_t k = 0; k < basis.size(); ++k) X += coeffs[k] * basis[k];
    return X;
}

RVec algebra_coeffs(int n, const Mat& X) {
    const auto& basis = su_basis(n);
    RVec c(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) c[k] = hs_inner(basis[k], X);
    return c;
}

namespace {

// Closed form on su(2): X^2 = -theta^2 I with theta = |c| / sqrt(2), so
// exp(X) = cos(theta) I + sinc(theta) X.
Mat exp_su2(const RVec& c) {
    const double theta2 = 0.5 * (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    const double theta = std::sqrt(theta2);
    double cs, snc;
    if (theta < 1e-6) {
        cs = 1.0 - 0.5 * theta2;
        snc = 1.0 - theta2 / 6.0;
    } else {
        cs = std::cos(theta);
        snc = std::sin(theta) / theta;
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const cplx x01(c[0] * inv_sqrt2, c[1] * inv_sqrt2);
    const cplx x00(0.0, c[2] * inv_sqrt2);
    Mat U(2, 2);
    U(0, 0) = cs + snc * x00;
    U(0, 1) = snc * x01;
    U(1, 0) = -snc * std::conj(x01);
    U(1, 1) = cs - snc * x00;
    return U;
}

}  // namespace

Mat exp_anti_hermitian(const Mat& X) {
    // X = iH with H Hermitian; exp(X) = V diag(exp(i lambda)) V^*.
    Mat H = cplx(0.0, -1.0) * X;
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    const auto& lam = es.eigenvalues();
    const Mat& V = es.eigenvectors();
    Mat phases = Mat::Zero(X.rows(), X.cols());
    for (Eigen::Index k = 0; k < lam.size(); ++k)
        phases(k, k) = std::exp(cplx(0.0, lam[k]));
    return V * phases * V.adjoint();
}

Mat exp_su(int n, const RVec& coeffs) {
    if (n == 2) return exp_su2(coeffs);
    return exp_anti_hermitian(algebra_matrix(n, coeffs));
}

double unitary_defect(const Mat& U) {
    Mat D = U.adjoint() * U;
    D -= Mat::Identity(U.rows(), U.cols());
    return D.norm();
}

double dist_hs(const Mat& A, const Mat& B) { return (A - B).norm(); }

std::vector<double> eig_angles(const Mat& U) {
    Eigen::ComplexEigenSolver<Mat> es(U);
    std::vector<double> angles(static_cast<std::size_t>(U.rows()));
    for (Eigen::Index k = 0; k < U.rows(); ++k)
        angles[static_cast<std::size_t>(k)] = std::arg(es.eigenvalues()[k]);
    std::sort(angles.begin(), angles.end());
    return angles;
}

RVec random_algebra(int n, Rng& rng, double scale) {
    RVec c(su_dim(n));
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = scale * rng.next_gauss();
    return c;
}

}  // namespace ym2
