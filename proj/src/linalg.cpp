#include "cpmod/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace cpmod {

Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

double operator_norm(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.rows() == 0) return true;
  double scale = 1.0 + operator_norm(m);
  return operator_norm(m - m.adjoint()) <= tol * scale;
}

double min_eigenvalue(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const Mat& m, double tol) {
  if (m.rows() == 0) return true;
  if (!is_hermitian(m, tol)) return false;
  double scale = 1.0 + operator_norm(m);
  return min_eigenvalue(m) >= -tol * scale;
}

Mat sqrt_psd(const Mat& m, double tol) {
  if (m.rows() == 0) return m;
  if (!is_hermitian(m, tol)) throw Error("sqrt_psd: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m));
  double scale = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < -tol * scale) throw Error("sqrt_psd: input is not positive");
    lam(i) = std::sqrt(std::max(lam(i), 0.0));
  }
  return es.eigenvectors() * lam.asDiagonal() *
         es.eigenvectors().adjoint();
}

Mat gram_factor(const Mat& gram, double tol) {
  const Eigen::Index n = gram.rows();
  if (n == 0) return Mat(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(gram));
  const Eigen::VectorXd& lam = es.eigenvalues();
  double lmax = lam.maxCoeff();
  if (lmax <= 0.0) return Mat(0, n);
  double thresh = tol * lmax;
  int rank = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (lam(i) > thresh) ++rank;
  Mat r(rank, n);
  int row = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lam(i) > thresh)
      r.row(row++) = std::sqrt(lam(i)) * es.eigenvectors().col(i).adjoint();
  }
  return r;
}

int numerical_rank(const Mat& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  double thresh = tol * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  return rank;
}

Mat pseudo_inverse(const Mat& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return Mat(m.cols(), m.rows());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  if (smax <= 0.0) return Mat::Zero(m.cols(), m.rows());
  Eigen::VectorXd inv(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    inv(i) = sv(i) > tol * smax ? 1.0 / sv(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Mat solve_left(const Mat& sources, const Mat& targets, double tol) {
  if (sources.cols() != targets.cols())
    throw Error("solve_left: column count mismatch");
  return targets * pseudo_inverse(sources, tol);
}

Mat range_projector(const Mat& m, double tol) {
  if (m.rows() == 0) return Mat(0, 0);
  if (m.cols() == 0) return Mat::Zero(m.rows(), m.rows());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  if (smax <= 0.0) return Mat::Zero(m.rows(), m.rows());
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  Mat u = svd.matrixU().leftCols(rank);
  return u * u.adjoint();
}

Mat range_basis(const Mat& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  if (smax <= 0.0) return Mat(m.rows(), 0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  return svd.matrixU().leftCols(rank);
}

Mat kernel_projector(const Mat& m, double tol) {
  if (m.rows() != m.cols()) throw Error("kernel_projector: square input expected");
  if (m.rows() == 0) return Mat(0, 0);
  Mat ns = null_space(m, tol);
  return ns * ns.adjoint();
}

Mat linear_map_matrix(int in_rows, int in_cols,
                      const std::function<Mat(const Mat&)>& op) {
  Mat unit = Mat::Zero(in_rows, in_cols);
  Mat result;
  for (int p = 0; p < in_rows; ++p) {
    for (int q = 0; q < in_cols; ++q) {
      unit(p, q) = 1.0;
      Vec col = vec_rm(op(unit));
      unit(p, q) = 0.0;
      if (result.size() == 0) result.resize(col.size(), in_rows * in_cols);
      result.col(p * in_cols + q) = col;
    }
  }
  if (result.size() == 0) result.resize(0, in_rows * in_cols);
  return result;
}

Vec vec_rm(const Mat& m) {
  Vec v(m.rows() * m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v(r * m.cols() + c) = m(r, c);
  return v;
}

Mat unvec_rm(const Vec& v, int rows, int cols) {
  if (v.size() != Eigen::Index(rows) * cols)
    throw Error("unvec_rm: size mismatch");
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = v(r * cols + c);
  return m;
}

Mat null_space(const Mat& m, double tol) {
  const Eigen::Index n = m.cols();
  if (n == 0) return Mat(0, 0);
  if (m.rows() == 0) return Mat::Identity(n, n);
  // JacobiSVD throughout: the divide-and-conquer variant can return V columns
  // out of step with the singular values on complex inputs.
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  if (smax > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > tol * smax) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace cpmod
