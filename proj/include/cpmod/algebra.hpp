#pragma once

#include "cpmod/linalg.hpp"

#include <vector>

namespace cpmod {

/// A finite product of full matrix algebras. Block j carries the j-th
/// C*-seminorm (the operator norm of that factor).
struct BlockAlgebra {
  std::vector<int> block_dims;

  int num_blocks() const { return static_cast<int>(block_dims.size()); }
  int block_dim(int j) const { return block_dims.at(j); }
  /// Complex dimension, sum of n_j^2.
  int dim() const;
  void validate() const;

  bool operator==(const BlockAlgebra&) const = default;
};

struct AlgebraElement {
  BlockAlgebra algebra;
  std::vector<Mat> blocks;

  static AlgebraElement zero(const BlockAlgebra& alg);
  static AlgebraElement identity(const BlockAlgebra& alg);

  AlgebraElement adjoint() const;
  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
    return a += b;
  }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
    return a -= b;
  }
  friend AlgebraElement operator*(const AlgebraElement& a,
                                  const AlgebraElement& b);
  friend AlgebraElement operator*(Complex s, AlgebraElement a);

  /// Largest seminorm over all blocks.
  double max_seminorm() const;
  void validate() const;
};

/// Operator norm of block j; satisfies the C*-identity p_j(a*a) = p_j(a)^2.
double seminorm(const AlgebraElement& a, int j);

/// Positivity with relative threshold: every block's minimum eigenvalue is
/// >= -tol * (1 + max seminorm). Throws on non-Hermitian input.
bool is_positive(const AlgebraElement& a, double tol);

/// Blockwise PSD square root; throws if the input is not positive within tol.
AlgebraElement sqrt_psd(const AlgebraElement& a, double tol);

/// Matrix units of every block, enumerated block by block, row-major within
/// a block. Linear coordinates of an element in this basis are exactly its
/// entries, matching to_vector / from_vector.
std::vector<AlgebraElement> algebra_basis(const BlockAlgebra& alg);
int algebra_basis_index(const BlockAlgebra& alg, int j, int r, int s);

Vec to_vector(const AlgebraElement& a);
AlgebraElement from_vector(const BlockAlgebra& alg, const Vec& v);

double distance(const AlgebraElement& a, const AlgebraElement& b);

/// An n x n matrix with entries in a shared block algebra.
struct ElementMatrix {
  int size = 0;
  BlockAlgebra algebra;
  std::vector<AlgebraElement> entries;  // row-major, size*size

  static ElementMatrix zero(int n, const BlockAlgebra& alg);
  const AlgebraElement& at(int i, int j) const;
  AlgebraElement& at(int i, int j);

  /// Scalar realization for algebra block j: the (n*n_j) x (n*n_j) matrix
  /// with the (i,k) entry's block j at offset (i*n_j, k*n_j).
  Mat flatten(int j) const;
  void validate() const;
};

bool is_positive(const ElementMatrix& p, double tol);

/// Writes a positive P in M_n(A) as a sum of at most n Gram matrices
/// [(a_i)^* (a_j)]: factor P = Q^* Q and split Q into rows. The k-th returned
/// tuple is the k-th row of Q.
std::vector<std::vector<AlgebraElement>> positive_decomposition(
    const ElementMatrix& p, double tol);

/// Sum of the Gram matrices of the given tuples; inverse of the decomposition.
ElementMatrix gram_sum(const BlockAlgebra& alg,
                       const std::vector<std::vector<AlgebraElement>>& tuples);

}  // namespace cpmod
