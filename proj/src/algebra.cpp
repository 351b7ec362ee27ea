#include "cpmod/algebra.hpp"

#include <cmath>

namespace cpmod {

int BlockAlgebra::dim() const {
  int d = 0;
  for (int n : block_dims) d += n * n;
  return d;
}

void BlockAlgebra::validate() const {
  if (block_dims.empty()) throw Error("BlockAlgebra: at least one block required");
  for (int n : block_dims)
    if (n < 1) throw Error("BlockAlgebra: block dimensions must be >= 1");
}

AlgebraElement AlgebraElement::zero(const BlockAlgebra& alg) {
  AlgebraElement a{alg, {}};
  for (int n : alg.block_dims) a.blocks.push_back(Mat::Zero(n, n));
  return a;
}

AlgebraElement AlgebraElement::identity(const BlockAlgebra& alg) {
  AlgebraElement a{alg, {}};
  for (int n : alg.block_dims) a.blocks.push_back(Mat::Identity(n, n));
  return a;
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement a{algebra, {}};
  for (const Mat& b : blocks) a.blocks.push_back(b.adjoint());
  return a;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  if (algebra != o.algebra) throw Error("AlgebraElement: algebra mismatch");
  for (size_t j = 0; j < blocks.size(); ++j) blocks[j] += o.blocks[j];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  if (algebra != o.algebra) throw Error("AlgebraElement: algebra mismatch");
  for (size_t j = 0; j < blocks.size(); ++j) blocks[j] -= o.blocks[j];
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.algebra != b.algebra) throw Error("AlgebraElement: algebra mismatch");
  AlgebraElement c{a.algebra, {}};
  for (size_t j = 0; j < a.blocks.size(); ++j)
    c.blocks.push_back(a.blocks[j] * b.blocks[j]);
  return c;
}

AlgebraElement operator*(Complex s, AlgebraElement a) {
  for (Mat& b : a.blocks) b *= s;
  return a;
}

double AlgebraElement::max_seminorm() const {
  double m = 0.0;
  for (const Mat& b : blocks) m = std::max(m, operator_norm(b));
  return m;
}

void AlgebraElement::validate() const {
  algebra.validate();
  if (static_cast<int>(blocks.size()) != algebra.num_blocks())
    throw Error("AlgebraElement: block count mismatch");
  for (int j = 0; j < algebra.num_blocks(); ++j) {
    if (blocks[j].rows() != algebra.block_dim(j) ||
        blocks[j].cols() != algebra.block_dim(j))
      throw Error("AlgebraElement: block dimension mismatch");
    if (!blocks[j].allFinite())
      throw Error("AlgebraElement: non-finite entries");
  }
}

double seminorm(const AlgebraElement& a, int j) {
  if (j < 0 || j >= a.algebra.num_blocks())
    throw Error("seminorm: block index out of range");
  return operator_norm(a.blocks[j]);
}

bool is_positive(const AlgebraElement& a, double tol) {
  double scale = 1.0 + a.max_seminorm();
  for (const Mat& b : a.blocks)
    if (!is_hermitian(b, tol)) throw Error("is_positive: input is not Hermitian");
  for (const Mat& b : a.blocks)
    if (min_eigenvalue(b) < -tol * scale) return false;
  return true;
}

AlgebraElement sqrt_psd(const AlgebraElement& a, double tol) {
  if (!is_positive(a, tol)) throw Error("sqrt_psd: element is not positive");
  AlgebraElement s{a.algebra, {}};
  for (const Mat& b : a.blocks) s.blocks.push_back(sqrt_psd(b, tol));
  return s;
}

std::vector<AlgebraElement> algebra_basis(const BlockAlgebra& alg) {
  std::vector<AlgebraElement> basis;
  for (int j = 0; j < alg.num_blocks(); ++j) {
    int n = alg.block_dim(j);
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        AlgebraElement e = AlgebraElement::zero(alg);
        e.blocks[j](r, s) = 1.0;
        basis.push_back(std::move(e));
      }
    }
  }
  return basis;
}

int algebra_basis_index(const BlockAlgebra& alg, int j, int r, int s) {
  int offset = 0;
  for (int k = 0; k < j; ++k) offset += alg.block_dim(k) * alg.block_dim(k);
  return offset + r * alg.block_dim(j) + s;
}

Vec to_vector(const AlgebraElement& a) {
  Vec v(a.algebra.dim());
  int off = 0;
  for (const Mat& b : a.blocks) {
    v.segment(off, b.size()) = vec_rm(b);
    off += static_cast<int>(b.size());
  }
  return v;
}

AlgebraElement from_vector(const BlockAlgebra& alg, const Vec& v) {
  if (v.size() != alg.dim()) throw Error("from_vector: size mismatch");
  AlgebraElement a{alg, {}};
  int off = 0;
  for (int n : alg.block_dims) {
    a.blocks.push_back(unvec_rm(v.segment(off, n * n), n, n));
    off += n * n;
  }
  return a;
}

double distance(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.algebra != b.algebra) throw Error("distance: algebra mismatch");
  double d = 0.0;
  for (size_t j = 0; j < a.blocks.size(); ++j)
    d = std::max(d, operator_norm(a.blocks[j] - b.blocks[j]));
  return d;
}

ElementMatrix ElementMatrix::zero(int n, const BlockAlgebra& alg) {
  ElementMatrix p;
  p.size = n;
  p.algebra = alg;
  p.entries.assign(static_cast<size_t>(n) * n, AlgebraElement::zero(alg));
  return p;
}

const AlgebraElement& ElementMatrix::at(int i, int j) const {
  return entries.at(static_cast<size_t>(i) * size + j);
}

AlgebraElement& ElementMatrix::at(int i, int j) {
  return entries.at(static_cast<size_t>(i) * size + j);
}

Mat ElementMatrix::flatten(int j) const {
  int n = algebra.block_dim(j);
  Mat m = Mat::Zero(size * n, size * n);
  for (int i = 0; i < size; ++i)
    for (int k = 0; k < size; ++k)
      m.block(i * n, k * n, n, n) = at(i, k).blocks[j];
  return m;
}

void ElementMatrix::validate() const {
  if (size < 1) throw Error("ElementMatrix: empty");
  if (entries.size() != static_cast<size_t>(size) * size)
    throw Error("ElementMatrix: entry count mismatch");
  for (const AlgebraElement& e : entries) {
    if (e.algebra != algebra) throw Error("ElementMatrix: mixed algebras");
    e.validate();
  }
}

bool is_positive(const ElementMatrix& p, double tol) {
  for (int j = 0; j < p.algebra.num_blocks(); ++j)
    if (!is_psd(p.flatten(j), tol)) return false;
  return true;
}

std::vector<std::vector<AlgebraElement>> positive_decomposition(
    const ElementMatrix& p, double tol) {
  if (!is_positive(p, tol))
    throw Error("positive_decomposition: input is not positive");
  const int n = p.size;
  // Q = sqrt(P) blockwise, so P = Q^* Q; the k-th row of Q is the k-th tuple.
  std::vector<Mat> q;
  for (int j = 0; j < p.algebra.num_blocks(); ++j)
    q.push_back(sqrt_psd(hermitize(p.flatten(j)), tol));
  std::vector<std::vector<AlgebraElement>> tuples;
  for (int k = 0; k < n; ++k) {
    std::vector<AlgebraElement> tuple;
    double row_norm = 0.0;
    for (int i = 0; i < n; ++i) {
      AlgebraElement a = AlgebraElement::zero(p.algebra);
      for (int j = 0; j < p.algebra.num_blocks(); ++j) {
        int nj = p.algebra.block_dim(j);
        a.blocks[j] = q[j].block(k * nj, i * nj, nj, nj);
      }
      row_norm = std::max(row_norm, a.max_seminorm());
      tuple.push_back(std::move(a));
    }
    if (row_norm > tol) tuples.push_back(std::move(tuple));
  }
  return tuples;
}

ElementMatrix gram_sum(const BlockAlgebra& alg,
                       const std::vector<std::vector<AlgebraElement>>& tuples) {
  if (tuples.empty()) throw Error("gram_sum: no tuples");
  int n = static_cast<int>(tuples.front().size());
  ElementMatrix p = ElementMatrix::zero(n, alg);
  for (const auto& tuple : tuples) {
    if (static_cast<int>(tuple.size()) != n)
      throw Error("gram_sum: ragged tuples");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        p.at(i, j) += tuple[i].adjoint() * tuple[j];
  }
  return p;
}

}  // namespace cpmod
