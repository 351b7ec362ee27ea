#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace cpmod {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Error raised by mathematically invalid inputs (bad dimensions, failed
/// positivity preconditions, inconsistent linear systems, ...).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Default relative tolerance used for positivity and rank decisions.
inline constexpr double kDefaultTol = 1e-9;

Mat hermitize(const Mat& m);

/// Largest singular value; 0 for empty matrices.
double operator_norm(const Mat& m);

bool is_hermitian(const Mat& m, double tol);

/// Smallest eigenvalue of a Hermitian matrix (symmetrized first).
double min_eigenvalue(const Mat& m);

/// PSD test with relative threshold: min eig >= -tol * (1 + opnorm).
bool is_psd(const Mat& m, double tol);

/// Unique PSD square root via Hermitian eigendecomposition. Eigenvalues in
/// [-tol*scale, 0) are clamped to zero; below that the input is rejected.
Mat sqrt_psd(const Mat& m, double tol);

/// Rank-revealing factor R of a PSD Gram matrix G: R^* R = G with R of size
/// rank x n. Eigenvalues <= tol * lambda_max are discarded.
Mat gram_factor(const Mat& gram, double tol);

int numerical_rank(const Mat& m, double tol);

/// Moore-Penrose pseudo-inverse, singular values <= tol * sigma_max dropped.
Mat pseudo_inverse(const Mat& m, double tol);

/// Least-squares solve of M * sources = targets for M.
Mat solve_left(const Mat& sources, const Mat& targets, double tol);

/// Orthogonal projector onto the column space.
Mat range_projector(const Mat& m, double tol);

/// Orthonormal basis of the column space (columns), threshold tol*sigma_max.
Mat range_basis(const Mat& m, double tol);

/// Orthogonal projector onto ker(m) (m square), via SVD with relative
/// singular-value threshold.
Mat kernel_projector(const Mat& m, double tol);

/// Matrix of a linear map on complex matrices, columns indexed by matrix
/// units in row-major order (the shared vectorization convention below).
Mat linear_map_matrix(int in_rows, int in_cols,
                      const std::function<Mat(const Mat&)>& op);

/// Row-major vectorization; inverse of unvec_rm.
Vec vec_rm(const Mat& m);
Mat unvec_rm(const Vec& v, int rows, int cols);

/// Orthonormal basis of the null space of m (columns), threshold tol*sigma_max.
Mat null_space(const Mat& m, double tol);

}  // namespace cpmod
