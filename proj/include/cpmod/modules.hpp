#pragma once

#include "cpmod/algebra.hpp"

#include <optional>

namespace cpmod {

/// Left action of the coefficient algebra by ampliation b -> b (x) I_mult,
/// one multiplicity per block (heights must satisfy m_j = mult_j * n_j).
struct LeftActionSpec {
  std::vector<int> multiplicities;
  bool operator==(const LeftActionSpec&) const = default;
};

/// Shape of a Hilbert module over a block algebra: block j holds
/// m_j x n_j complex matrices with <x,y> = x^* y.
struct ModuleShape {
  BlockAlgebra algebra;
  std::vector<int> heights;
  std::optional<LeftActionSpec> left_action;

  int num_blocks() const { return static_cast<int>(heights.size()); }
  int height(int j) const { return heights.at(j); }
  int width(int j) const { return algebra.block_dim(j); }
  /// Complex dimension, sum of m_j * n_j.
  int dim() const;
  void validate() const;

  /// Shape equality for operator composition: algebra and heights agree
  /// (the left action is metadata, not part of the inner-product structure).
  bool same_space(const ModuleShape& o) const {
    return algebra == o.algebra && heights == o.heights;
  }
};

struct ModuleElement {
  ModuleShape shape;
  std::vector<Mat> blocks;  // m_j x n_j

  static ModuleElement zero(const ModuleShape& shape);
  ModuleElement& operator+=(const ModuleElement& o);
  ModuleElement& operator-=(const ModuleElement& o);
  friend ModuleElement operator+(ModuleElement a, const ModuleElement& b) {
    return a += b;
  }
  friend ModuleElement operator-(ModuleElement a, const ModuleElement& b) {
    return a -= b;
  }
  friend ModuleElement operator*(Complex s, ModuleElement x);
  /// Right module action x . b.
  ModuleElement right_mul(const AlgebraElement& b) const;
  void validate() const;
};

/// Algebra-valued inner product, blockwise x^* y.
AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y);

double distance(const ModuleElement& x, const ModuleElement& y);

/// Matrix-unit basis of the module, block by block, row-major per block;
/// coordinates in this basis match to_vector / from_vector.
std::vector<ModuleElement> module_basis(const ModuleShape& shape);

Vec to_vector(const ModuleElement& x);
ModuleElement from_vector(const ModuleShape& shape, const Vec& v);

/// An adjointable operator between modules over the same algebra, realized
/// as left multiplication by an m'_j x m_j matrix per block.
struct ModuleOperator {
  ModuleShape domain;
  ModuleShape codomain;
  std::vector<Mat> blocks;

  static ModuleOperator identity(const ModuleShape& shape);
  static ModuleOperator zero(const ModuleShape& dom, const ModuleShape& cod);

  ModuleElement operator()(const ModuleElement& x) const;
  ModuleOperator adjoint() const;
  friend ModuleOperator operator*(const ModuleOperator& a,
                                  const ModuleOperator& b);  // composition
  ModuleOperator& operator+=(const ModuleOperator& o);
  ModuleOperator& operator-=(const ModuleOperator& o);
  friend ModuleOperator operator+(ModuleOperator a, const ModuleOperator& b) {
    return a += b;
  }
  friend ModuleOperator operator-(ModuleOperator a, const ModuleOperator& b) {
    return a -= b;
  }
  friend ModuleOperator operator*(Complex s, ModuleOperator a);
  void validate() const;
};

/// Largest singular value of block j: the least bound for that seminorm.
double operator_norm(const ModuleOperator& t, int j);
double max_operator_norm(const ModuleOperator& t);

double distance(const ModuleOperator& a, const ModuleOperator& b);

/// True iff V V^* V = V within tol on every block.
bool is_partial_isometry(const ModuleOperator& v, double tol);

/// Orthogonal projection onto ker(T) (domain == codomain), blockwise SVD
/// null space with relative singular-value threshold.
ModuleOperator kernel_projection(const ModuleOperator& t, double tol);

/// The ampliation left action tau(b) on a module with a LeftActionSpec.
ModuleOperator left_action_operator(const ModuleShape& shape,
                                    const AlgebraElement& b);

/// PSD test and square root for operators on a single module.
bool is_positive(const ModuleOperator& t, double tol);
ModuleOperator sqrt_psd(const ModuleOperator& t, double tol);

}  // namespace cpmod
