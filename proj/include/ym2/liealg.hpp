#pragma once
// su(n) Lie algebra and SU(n) group primitives.
//
// Conventions:
//   * su(n) = traceless anti-Hermitian complex n x n matrices, treated as a
//     real vector space of dimension n^2 - 1.
//   * Inner product <X,Y> = Re tr(X^* Y)  (Hilbert-Schmidt), so the basis
//     below is orthonormal and coefficient vectors satisfy Parseval.
//   * Basis order (deterministic): for index pairs a < b in lexicographic
//     order the real-antisymmetric generator (E_ab - E_ba)/sqrt(2) followed
//     by the imaginary-symmetric generator i(E_ab + E_ba)/sqrt(2); then the
//     diagonal generators i*diag(1,...,1,-m,0,...,0)/sqrt(m(m+1)), m=1..n-1.

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "ym2/rng.hpp"

namespace ym2 {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline int su_dim(int n) { return n * n - 1; }

// Orthonormal su(n) basis; cached per n, safe for concurrent readers.
const std::vector<Mat>& su_basis(int n);

double hs_inner(const Mat& X, const Mat& Y);
double hs_norm(const Mat& X);

// Coefficients <-> matrix form.
Mat algebra_matrix(int n, const RVec& coeffs);
RVec algebra_coeffs(int n, const Mat& X);

// Group exponential of an algebra element.  Exact-to-roundoff unitary:
// closed form for n = 2, Hermitian eigendecomposition of -iX otherwise.
Mat exp_su(int n, const RVec& coeffs);
Mat exp_anti_hermitian(const Mat& X);

double unitary_defect(const Mat& U);  // || U^* U - I ||_HS
double dist_hs(const Mat& A, const Mat& B);

// Eigenvalue phases of U in SU(n), sorted ascending in (-pi, pi].
std::vector<double> eig_angles(const Mat& U);

RVec random_algebra(int n, Rng& rng, double scale = 1.0);

}  // namespace ym2
