#include "cpmod/cp_maps.hpp"

#include <cmath>

namespace cpmod {

CPMap CPMap::zero(const BlockAlgebra& dom, const BlockAlgebra& cod) {
  CPMap m{dom, cod, {}};
  for (int j = 0; j < dom.num_blocks(); ++j) {
    std::vector<Mat> row;
    for (int k = 0; k < cod.num_blocks(); ++k) {
      int d = dom.block_dim(j) * cod.block_dim(k);
      row.push_back(Mat::Zero(d, d));
    }
    m.choi.push_back(std::move(row));
  }
  return m;
}

CPMap CPMap::identity(const BlockAlgebra& alg) {
  return from_linear(alg, alg, [](const AlgebraElement& a) { return a; });
}

CPMap CPMap::from_values(
    const BlockAlgebra& dom, const BlockAlgebra& cod,
    const std::function<AlgebraElement(int, int, int)>& values) {
  CPMap m = zero(dom, cod);
  for (int j = 0; j < dom.num_blocks(); ++j) {
    int n = dom.block_dim(j);
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        AlgebraElement img = values(j, r, s);
        if (img.algebra != cod)
          throw Error("CPMap::from_values: image in wrong algebra");
        for (int k = 0; k < cod.num_blocks(); ++k) {
          int np = cod.block_dim(k);
          for (int u = 0; u < np; ++u)
            for (int v = 0; v < np; ++v)
              m.choi[j][k](r * np + u, s * np + v) = img.blocks[k](u, v);
        }
      }
    }
  }
  return m;
}

CPMap CPMap::from_linear(
    const BlockAlgebra& dom, const BlockAlgebra& cod,
    const std::function<AlgebraElement(const AlgebraElement&)>& map) {
  return from_values(dom, cod, [&](int j, int r, int s) {
    AlgebraElement unit = AlgebraElement::zero(dom);
    unit.blocks[j](r, s) = 1.0;
    return map(unit);
  });
}

AlgebraElement CPMap::operator()(const AlgebraElement& a) const {
  if (a.algebra != domain) throw Error("CPMap: algebra mismatch");
  AlgebraElement out = AlgebraElement::zero(codomain);
  for (int j = 0; j < domain.num_blocks(); ++j) {
    int n = domain.block_dim(j);
    for (int k = 0; k < codomain.num_blocks(); ++k) {
      int np = codomain.block_dim(k);
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          Complex coeff = a.blocks[j](r, s);
          if (coeff == Complex(0, 0)) continue;
          out.blocks[k] +=
              coeff * choi[j][k].block(r * np, s * np, np, np);
        }
    }
  }
  return out;
}

CPMap& CPMap::operator+=(const CPMap& o) {
  if (!same_signature(o)) throw Error("CPMap: signature mismatch");
  for (size_t j = 0; j < choi.size(); ++j)
    for (size_t k = 0; k < choi[j].size(); ++k) choi[j][k] += o.choi[j][k];
  return *this;
}

CPMap& CPMap::operator-=(const CPMap& o) {
  if (!same_signature(o)) throw Error("CPMap: signature mismatch");
  for (size_t j = 0; j < choi.size(); ++j)
    for (size_t k = 0; k < choi[j].size(); ++k) choi[j][k] -= o.choi[j][k];
  return *this;
}

CPMap operator*(double s, CPMap a) {
  for (auto& row : a.choi)
    for (Mat& c : row) c *= s;
  return a;
}

void CPMap::validate() const {
  domain.validate();
  codomain.validate();
  if (static_cast<int>(choi.size()) != domain.num_blocks())
    throw Error("CPMap: Choi grid row count mismatch");
  for (int j = 0; j < domain.num_blocks(); ++j) {
    if (static_cast<int>(choi[j].size()) != codomain.num_blocks())
      throw Error("CPMap: Choi grid column count mismatch");
    for (int k = 0; k < codomain.num_blocks(); ++k) {
      int d = domain.block_dim(j) * codomain.block_dim(k);
      if (choi[j][k].rows() != d || choi[j][k].cols() != d)
        throw Error("CPMap: Choi block dimension mismatch");
      if (!choi[j][k].allFinite()) throw Error("CPMap: non-finite Choi entries");
    }
  }
}

double choi_distance(const CPMap& a, const CPMap& b) {
  if (!a.same_signature(b)) throw Error("choi_distance: signature mismatch");
  double d = 0.0;
  for (size_t j = 0; j < a.choi.size(); ++j)
    for (size_t k = 0; k < a.choi[j].size(); ++k)
      d = std::max(d, operator_norm(a.choi[j][k] - b.choi[j][k]));
  return d;
}

bool is_completely_positive(const CPMap& phi, double tol) {
  for (const auto& row : phi.choi)
    for (const Mat& c : row)
      if (!is_psd(c, tol)) return false;
  return true;
}

bool cp_order_leq(const CPMap& psi, const CPMap& phi, double tol) {
  if (!psi.same_signature(phi)) throw Error("cp_order_leq: signature mismatch");
  return is_completely_positive(phi - psi, tol);
}

PhiMap PhiMap::from_images(const ModuleShape& e, const ModuleShape& f,
                           const std::vector<ModuleElement>& images,
                           const CPMap& underlying) {
  if (static_cast<int>(images.size()) != e.dim())
    throw Error("PhiMap: one image per basis element required");
  PhiMap p{e, f, Mat(f.dim(), e.dim()), underlying};
  for (int i = 0; i < e.dim(); ++i) p.matrix.col(i) = to_vector(images[i]);
  p.validate();
  return p;
}

ModuleElement PhiMap::operator()(const ModuleElement& x) const {
  if (!x.shape.same_space(domain)) throw Error("PhiMap: domain mismatch");
  return from_vector(codomain, matrix * to_vector(x));
}

PhiMap operator*(double s, PhiMap p) {
  p.matrix *= s;
  p.underlying = (s * s) * p.underlying;
  return p;
}

PhiMap operator*(const ModuleOperator& v, const PhiMap& p) {
  if (!v.domain.same_space(p.codomain))
    throw Error("PhiMap: operator domain mismatch");
  Mat vmat = Mat::Zero(v.codomain.dim(), v.domain.dim());
  // Assemble the matrix of x -> V x in basis coordinates.
  auto basis = module_basis(v.domain);
  for (size_t i = 0; i < basis.size(); ++i)
    vmat.col(i) = to_vector(v(basis[i]));
  PhiMap q{p.domain, v.codomain, vmat * p.matrix, p.underlying};
  return q;
}

void PhiMap::validate() const {
  domain.validate();
  codomain.validate();
  underlying.validate();
  if (underlying.domain != domain.algebra ||
      underlying.codomain != codomain.algebra)
    throw Error("PhiMap: underlying map signature mismatch");
  if (matrix.rows() != codomain.dim() || matrix.cols() != domain.dim())
    throw Error("PhiMap: matrix dimension mismatch");
  if (!matrix.allFinite()) throw Error("PhiMap: non-finite entries");
}

bool phi_map_check(const PhiMap& p, double tol) {
  auto basis = module_basis(p.domain);
  double scale = 1.0;
  for (const auto& x : basis) {
    ModuleElement px = p(x);
    scale = std::max(scale, inner_product(px, px).max_seminorm());
  }
  for (size_t i = 0; i < basis.size(); ++i) {
    ModuleElement pi = p(basis[i]);
    for (size_t j = 0; j < basis.size(); ++j) {
      AlgebraElement lhs = inner_product(pi, p(basis[j]));
      AlgebraElement rhs = p.underlying(inner_product(basis[i], basis[j]));
      if (distance(lhs, rhs) > tol * scale) return false;
    }
  }
  return true;
}

CPMap induced_phi(const Mat& matrix, const ModuleShape& e, const ModuleShape& f,
                  double tol) {
  auto basis = module_basis(e);
  const int ne = static_cast<int>(basis.size());
  const int da = e.algebra.dim();
  const int db = f.algebra.dim();
  if (matrix.rows() != f.dim() || matrix.cols() != ne)
    throw Error("induced_phi: matrix dimension mismatch");
  // Unknown: the matrix L of phi in basis coordinates (db x da), from
  // L * vec(<x_i, x_j>) = vec(<Phi x_i, Phi x_j>) over all basis pairs.
  Mat gram_in(da, ne * ne), gram_out(db, ne * ne);
  std::vector<ModuleElement> images;
  images.reserve(ne);
  for (const auto& x : basis) images.push_back(from_vector(f, matrix * to_vector(x)));
  for (int i = 0; i < ne; ++i) {
    for (int j = 0; j < ne; ++j) {
      gram_in.col(i * ne + j) = to_vector(inner_product(basis[i], basis[j]));
      gram_out.col(i * ne + j) = to_vector(inner_product(images[i], images[j]));
    }
  }
  Mat l = solve_left(gram_in, gram_out, tol);
  double scale = 1.0 + operator_norm(gram_out);
  if (operator_norm(l * gram_in - gram_out) > tol * scale)
    throw Error("induced_phi: not a phi-map (inconsistent inner products)");
  return CPMap::from_linear(e.algebra, f.algebra, [&](const AlgebraElement& a) {
    return from_vector(f.algebra, l * to_vector(a));
  });
}

bool equivalence_check(const PhiMap& a, const PhiMap& b, double tol) {
  if (!a.domain.same_space(b.domain) || !a.codomain.same_space(b.codomain))
    throw Error("equivalence_check: shape mismatch");
  CPMap pa = induced_phi(a.matrix, a.domain, a.codomain, tol);
  CPMap pb = induced_phi(b.matrix, b.domain, b.codomain, tol);
  double scale = 1.0;
  for (const auto& row : pa.choi)
    for (const Mat& c : row) scale = std::max(scale, operator_norm(c));
  return choi_distance(pa, pb) <= tol * scale;
}

}  // namespace cpmod
