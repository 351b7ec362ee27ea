#include "cpmod/modules.hpp"

#include <cmath>

namespace cpmod {

int ModuleShape::dim() const {
  int d = 0;
  for (int j = 0; j < num_blocks(); ++j) d += height(j) * width(j);
  return d;
}

void ModuleShape::validate() const {
  algebra.validate();
  if (static_cast<int>(heights.size()) != algebra.num_blocks())
    throw Error("ModuleShape: one height per algebra block required");
  for (int m : heights)
    if (m < 0) throw Error("ModuleShape: negative height");
  if (left_action) {
    if (static_cast<int>(left_action->multiplicities.size()) != num_blocks())
      throw Error("ModuleShape: left action multiplicity count mismatch");
    for (int j = 0; j < num_blocks(); ++j) {
      int mult = left_action->multiplicities[j];
      if (mult < 1 || mult * width(j) != height(j))
        throw Error("ModuleShape: left action needs m_j = mult_j * n_j");
    }
  }
}

ModuleElement ModuleElement::zero(const ModuleShape& shape) {
  ModuleElement x{shape, {}};
  for (int j = 0; j < shape.num_blocks(); ++j)
    x.blocks.push_back(Mat::Zero(shape.height(j), shape.width(j)));
  return x;
}

ModuleElement& ModuleElement::operator+=(const ModuleElement& o) {
  if (!shape.same_space(o.shape)) throw Error("ModuleElement: shape mismatch");
  for (size_t j = 0; j < blocks.size(); ++j) blocks[j] += o.blocks[j];
  return *this;
}

ModuleElement& ModuleElement::operator-=(const ModuleElement& o) {
  if (!shape.same_space(o.shape)) throw Error("ModuleElement: shape mismatch");
  for (size_t j = 0; j < blocks.size(); ++j) blocks[j] -= o.blocks[j];
  return *this;
}

ModuleElement operator*(Complex s, ModuleElement x) {
  for (Mat& b : x.blocks) b *= s;
  return x;
}

ModuleElement ModuleElement::right_mul(const AlgebraElement& b) const {
  if (b.algebra != shape.algebra) throw Error("right_mul: algebra mismatch");
  ModuleElement y{shape, {}};
  for (size_t j = 0; j < blocks.size(); ++j)
    y.blocks.push_back(blocks[j] * b.blocks[j]);
  return y;
}

void ModuleElement::validate() const {
  shape.validate();
  if (static_cast<int>(blocks.size()) != shape.num_blocks())
    throw Error("ModuleElement: block count mismatch");
  for (int j = 0; j < shape.num_blocks(); ++j) {
    if (blocks[j].rows() != shape.height(j) ||
        blocks[j].cols() != shape.width(j))
      throw Error("ModuleElement: block dimension mismatch");
    if (!blocks[j].allFinite()) throw Error("ModuleElement: non-finite entries");
  }
}

AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y) {
  if (!x.shape.same_space(y.shape)) throw Error("inner_product: shape mismatch");
  AlgebraElement a{x.shape.algebra, {}};
  for (size_t j = 0; j < x.blocks.size(); ++j)
    a.blocks.push_back(x.blocks[j].adjoint() * y.blocks[j]);
  return a;
}

double distance(const ModuleElement& x, const ModuleElement& y) {
  if (!x.shape.same_space(y.shape)) throw Error("distance: shape mismatch");
  double d = 0.0;
  for (size_t j = 0; j < x.blocks.size(); ++j)
    d = std::max(d, operator_norm(x.blocks[j] - y.blocks[j]));
  return d;
}

std::vector<ModuleElement> module_basis(const ModuleShape& shape) {
  std::vector<ModuleElement> basis;
  for (int j = 0; j < shape.num_blocks(); ++j) {
    for (int p = 0; p < shape.height(j); ++p) {
      for (int q = 0; q < shape.width(j); ++q) {
        ModuleElement e = ModuleElement::zero(shape);
        e.blocks[j](p, q) = 1.0;
        basis.push_back(std::move(e));
      }
    }
  }
  return basis;
}

Vec to_vector(const ModuleElement& x) {
  Vec v(x.shape.dim());
  int off = 0;
  for (const Mat& b : x.blocks) {
    v.segment(off, b.size()) = vec_rm(b);
    off += static_cast<int>(b.size());
  }
  return v;
}

ModuleElement from_vector(const ModuleShape& shape, const Vec& v) {
  if (v.size() != shape.dim()) throw Error("from_vector: size mismatch");
  ModuleElement x{shape, {}};
  int off = 0;
  for (int j = 0; j < shape.num_blocks(); ++j) {
    int m = shape.height(j), n = shape.width(j);
    x.blocks.push_back(unvec_rm(v.segment(off, m * n), m, n));
    off += m * n;
  }
  return x;
}

ModuleOperator ModuleOperator::identity(const ModuleShape& shape) {
  ModuleOperator t{shape, shape, {}};
  for (int m : shape.heights) t.blocks.push_back(Mat::Identity(m, m));
  return t;
}

ModuleOperator ModuleOperator::zero(const ModuleShape& dom,
                                    const ModuleShape& cod) {
  if (dom.algebra != cod.algebra)
    throw Error("ModuleOperator: modules over different algebras");
  ModuleOperator t{dom, cod, {}};
  for (int j = 0; j < dom.num_blocks(); ++j)
    t.blocks.push_back(Mat::Zero(cod.height(j), dom.height(j)));
  return t;
}

ModuleElement ModuleOperator::operator()(const ModuleElement& x) const {
  if (!x.shape.same_space(domain)) throw Error("ModuleOperator: domain mismatch");
  ModuleElement y{codomain, {}};
  for (size_t j = 0; j < blocks.size(); ++j)
    y.blocks.push_back(blocks[j] * x.blocks[j]);
  return y;
}

ModuleOperator ModuleOperator::adjoint() const {
  ModuleOperator t{codomain, domain, {}};
  for (const Mat& b : blocks) t.blocks.push_back(b.adjoint());
  return t;
}

ModuleOperator operator*(const ModuleOperator& a, const ModuleOperator& b) {
  if (!b.codomain.same_space(a.domain))
    throw Error("ModuleOperator: composition shape mismatch");
  ModuleOperator t{b.domain, a.codomain, {}};
  for (size_t j = 0; j < a.blocks.size(); ++j)
    t.blocks.push_back(a.blocks[j] * b.blocks[j]);
  return t;
}

ModuleOperator& ModuleOperator::operator+=(const ModuleOperator& o) {
  if (!domain.same_space(o.domain) || !codomain.same_space(o.codomain))
    throw Error("ModuleOperator: shape mismatch");
  for (size_t j = 0; j < blocks.size(); ++j) blocks[j] += o.blocks[j];
  return *this;
}

ModuleOperator& ModuleOperator::operator-=(const ModuleOperator& o) {
  if (!domain.same_space(o.domain) || !codomain.same_space(o.codomain))
    throw Error("ModuleOperator: shape mismatch");
  for (size_t j = 0; j < blocks.size(); ++j) blocks[j] -= o.blocks[j];
  return *this;
}

ModuleOperator operator*(Complex s, ModuleOperator a) {
  for (Mat& b : a.blocks) b *= s;
  return a;
}

void ModuleOperator::validate() const {
  domain.validate();
  codomain.validate();
  if (domain.algebra != codomain.algebra)
    throw Error("ModuleOperator: modules over different algebras");
  if (static_cast<int>(blocks.size()) != domain.num_blocks())
    throw Error("ModuleOperator: block count mismatch");
  for (int j = 0; j < domain.num_blocks(); ++j)
    if (blocks[j].rows() != codomain.height(j) ||
        blocks[j].cols() != domain.height(j))
      throw Error("ModuleOperator: block dimension mismatch");
}

double operator_norm(const ModuleOperator& t, int j) {
  if (j < 0 || j >= static_cast<int>(t.blocks.size()))
    throw Error("operator_norm: block index out of range");
  return operator_norm(t.blocks[j]);
}

double max_operator_norm(const ModuleOperator& t) {
  double m = 0.0;
  for (const Mat& b : t.blocks) m = std::max(m, operator_norm(b));
  return m;
}

double distance(const ModuleOperator& a, const ModuleOperator& b) {
  if (!a.domain.same_space(b.domain) || !a.codomain.same_space(b.codomain))
    throw Error("distance: shape mismatch");
  double d = 0.0;
  for (size_t j = 0; j < a.blocks.size(); ++j)
    d = std::max(d, operator_norm(a.blocks[j] - b.blocks[j]));
  return d;
}

bool is_partial_isometry(const ModuleOperator& v, double tol) {
  for (const Mat& b : v.blocks) {
    double scale = 1.0 + operator_norm(b);
    if (operator_norm(b * b.adjoint() * b - b) > tol * scale) return false;
  }
  return true;
}

ModuleOperator kernel_projection(const ModuleOperator& t, double tol) {
  if (!t.domain.same_space(t.codomain))
    throw Error("kernel_projection: endomorphism expected");
  ModuleOperator p{t.domain, t.domain, {}};
  for (const Mat& b : t.blocks) p.blocks.push_back(kernel_projector(b, tol));
  return p;
}

ModuleOperator left_action_operator(const ModuleShape& shape,
                                    const AlgebraElement& b) {
  if (!shape.left_action)
    throw Error("left_action_operator: module has no left action");
  if (b.algebra != shape.algebra)
    throw Error("left_action_operator: algebra mismatch");
  ModuleOperator t{shape, shape, {}};
  for (int j = 0; j < shape.num_blocks(); ++j) {
    int n = shape.width(j);
    int mult = shape.left_action->multiplicities[j];
    Mat amp = Mat::Zero(n * mult, n * mult);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        for (int k = 0; k < mult; ++k)
          amp(r * mult + k, c * mult + k) = b.blocks[j](r, c);
    t.blocks.push_back(std::move(amp));
  }
  return t;
}

bool is_positive(const ModuleOperator& t, double tol) {
  if (!t.domain.same_space(t.codomain)) return false;
  for (const Mat& b : t.blocks)
    if (!is_psd(b, tol)) return false;
  return true;
}

ModuleOperator sqrt_psd(const ModuleOperator& t, double tol) {
  if (!t.domain.same_space(t.codomain))
    throw Error("sqrt_psd: endomorphism expected");
  ModuleOperator s{t.domain, t.domain, {}};
  for (const Mat& b : t.blocks) s.blocks.push_back(sqrt_psd(hermitize(b), tol));
  return s;
}

}  // namespace cpmod
