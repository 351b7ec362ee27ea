#include "cpmod/dilation.hpp"

#include <cmath>

namespace cpmod {

ModuleOperator Representation::operator()(const AlgebraElement& a) const {
  if (a.algebra != algebra) throw Error("Representation: algebra mismatch");
  ModuleOperator t = ModuleOperator::zero(space, space);
  Vec coords = to_vector(a);
  for (int i = 0; i < coords.size(); ++i) {
    if (coords[i] == Complex(0, 0)) continue;
    for (size_t k = 0; k < t.blocks.size(); ++k)
      t.blocks[k] += coords[i] * on_basis[i].blocks[k];
  }
  return t;
}

GNSData paschke_gns(const CPMap& phi, double tol) {
  phi.validate();
  if (!is_completely_positive(phi, tol))
    throw Error("paschke_gns: map is not completely positive");
  const BlockAlgebra& a = phi.domain;
  const BlockAlgebra& b = phi.codomain;
  auto basis = algebra_basis(a);
  const int na = static_cast<int>(basis.size());

  // Per codomain block: Gram of the spanning set {a_alpha (x) 1}, with
  // n'_k x n'_k blocks phi(a_alpha^* a_beta)_k, factored as R^* R.
  std::vector<Mat> factors;
  std::vector<int> heights;
  for (int k = 0; k < b.num_blocks(); ++k) {
    int np = b.block_dim(k);
    Mat gram = Mat::Zero(na * np, na * np);
    for (int al = 0; al < na; ++al)
      for (int be = 0; be < na; ++be)
        gram.block(al * np, be * np, np, np) =
            phi(basis[al].adjoint() * basis[be]).blocks[k];
    Mat r = gram_factor(hermitize(gram), tol);
    heights.push_back(static_cast<int>(r.rows()));
    factors.push_back(std::move(r));
  }

  GNSData g{phi, ModuleShape{b, heights, std::nullopt}, {}, {}};
  auto image_block = [&](int k, int alpha) {
    int np = b.block_dim(k);
    return factors[k].block(0, alpha * np, heights[k], np);
  };

  // pi(a_gamma) per block: least-squares left factor carrying the generator
  // images to the images of a_gamma a_alpha.
  g.pi.algebra = a;
  g.pi.space = g.space;
  for (int ga = 0; ga < na; ++ga) {
    ModuleOperator op = ModuleOperator::zero(g.space, g.space);
    for (int k = 0; k < b.num_blocks(); ++k) {
      int np = b.block_dim(k);
      Mat targets = Mat::Zero(heights[k], na * np);
      for (int al = 0; al < na; ++al) {
        Vec coords = to_vector(basis[ga] * basis[al]);
        for (int be = 0; be < na; ++be)
          if (coords[be] != Complex(0, 0))
            targets.block(0, al * np, heights[k], np) +=
                coords[be] * image_block(k, be);
      }
      op.blocks[k] = solve_left(factors[k], targets, tol);
      double scale = 1.0 + operator_norm(targets);
      if (operator_norm(op.blocks[k] * factors[k] - targets) > tol * scale)
        throw Error("paschke_gns: representation solve is inconsistent");
    }
    g.pi.on_basis.push_back(std::move(op));
  }

  // xi = class(1 (x) 1): sum of the diagonal-unit generator images.
  g.xi = ModuleElement::zero(g.space);
  for (int j = 0; j < a.num_blocks(); ++j)
    for (int t = 0; t < a.block_dim(j); ++t) {
      int alpha = algebra_basis_index(a, j, t, t);
      for (int k = 0; k < b.num_blocks(); ++k)
        g.xi.blocks[k] += image_block(k, alpha);
    }

  // phi(a) = <xi, pi(a) xi> on the basis.
  for (int al = 0; al < na; ++al) {
    AlgebraElement img = phi(basis[al]);
    AlgebraElement rec = inner_product(g.xi, g.pi.on_basis[al](g.xi));
    if (distance(img, rec) > tol * (1.0 + img.max_seminorm()) * 100)
      throw Error("paschke_gns: reconstruction identity failed");
  }
  return g;
}

StinespringData stinespring(const CPMap& phi, double tol) {
  GNSData g = paschke_gns(phi, tol);
  StinespringData s{g.phi,
                    ModuleShape{g.phi.codomain, g.phi.codomain.block_dims,
                                std::nullopt},
                    g.space, g.pi, {}, g.xi};
  s.v = ModuleOperator{s.d, s.k_phi, g.xi.blocks};
  return s;
}

ModuleOperator ModuleStinespringData::pi(const ModuleElement& x) const {
  if (!x.shape.same_space(map.domain))
    throw Error("ModuleStinespringData: domain mismatch");
  ModuleOperator t = ModuleOperator::zero(base.k_phi, k_big);
  Vec coords = to_vector(x);
  for (int i = 0; i < coords.size(); ++i) {
    if (coords[i] == Complex(0, 0)) continue;
    for (size_t k = 0; k < t.blocks.size(); ++k)
      t.blocks[k] += coords[i] * pi_on_basis[i].blocks[k];
  }
  return t;
}

TensorDilation tensor_dilation(const ModuleShape& e, const StinespringData& s,
                               double tol) {
  if (e.algebra != s.phi.domain)
    throw Error("tensor_dilation: module algebra does not match the map");
  const BlockAlgebra& b = s.phi.codomain;
  auto ebasis = module_basis(e);
  const int ne = static_cast<int>(ebasis.size());

  // pi(<x_i, x_j>) per block, the only input the tensor Gram needs.
  std::vector<ModuleOperator> pairs(ne * ne,
                                    ModuleOperator::zero(s.k_phi, s.k_phi));
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < ne; ++j)
      pairs[i * ne + j] = s.pi(inner_product(ebasis[i], ebasis[j]));

  TensorDilation td;
  std::vector<int> heights;
  std::vector<Mat> tensor;  // per block: rho_k x (ne * r_k), columns grouped by i
  for (int k = 0; k < b.num_blocks(); ++k) {
    int r = s.k_phi.height(k);
    // Spanning set {x_i (x) E_{t,1}}: its B-valued Gram has n' x n' blocks
    // pi(<x_i,x_j>)(t,u) E_{11}, so the quotient reduces to the scalar Gram
    // H((i,t),(j,u)) = pi(<x_i,x_j>)_k (t,u).
    Mat h = Mat::Zero(ne * r, ne * r);
    for (int i = 0; i < ne; ++i)
      for (int j = 0; j < ne; ++j)
        h.block(i * r, j * r, r, r) = pairs[i * ne + j].blocks[k];
    Mat f = gram_factor(hermitize(h), tol);
    heights.push_back(static_cast<int>(f.rows()));
    tensor.push_back(std::move(f));
  }
  td.k_big = ModuleShape{b, heights, std::nullopt};

  // pi_Phi(x_i) block k carries kappa to T kappa with T = columns i*r..i*r+r-1
  // of the Gram factor (the first-column coordinates of class(x_i (x) E_{t,1})).
  for (int i = 0; i < ne; ++i) {
    ModuleOperator op = ModuleOperator::zero(s.k_phi, td.k_big);
    for (int k = 0; k < b.num_blocks(); ++k) {
      int r = s.k_phi.height(k);
      op.blocks[k] = tensor[k].block(0, i * r, heights[k], r);
    }
    td.pi_on_basis.push_back(std::move(op));
  }
  return td;
}

ModuleStinespringData module_stinespring(const PhiMap& map,
                                         const StinespringData& s, double tol) {
  map.validate();
  if (!s.phi.same_signature(map.underlying) ||
      choi_distance(s.phi, map.underlying) > tol * 100)
    throw Error("module_stinespring: dilation data does not match the "
                "underlying map");
  const BlockAlgebra& b = map.codomain.algebra;
  auto ebasis = module_basis(map.domain);
  const int ne = static_cast<int>(ebasis.size());

  TensorDilation td = tensor_dilation(map.domain, s, tol);
  ModuleStinespringData m{map, s, td.k_big, std::move(td.pi_on_basis), {}};
  const std::vector<int>& heights = m.k_big.heights;

  // w*: the isometry k_big -> F extending pi_Phi(x_i) xi -> Phi(x_i).
  m.w = ModuleOperator::zero(map.codomain, m.k_big);
  for (int k = 0; k < b.num_blocks(); ++k) {
    int np = b.block_dim(k);
    int mf = map.codomain.height(k);
    if (mf < heights[k])
      throw Error("module_stinespring: codomain block too small to receive "
                  "the dilation isometry");
    Mat sources(heights[k], ne * np), targets(mf, ne * np);
    for (int i = 0; i < ne; ++i) {
      sources.block(0, i * np, heights[k], np) =
          m.pi_on_basis[i].blocks[k] * s.xi.blocks[k];
      targets.block(0, i * np, mf, np) = map(ebasis[i]).blocks[k];
    }
    Mat a = solve_left(sources, targets, tol);
    double scale = 1.0 + operator_norm(targets);
    if (operator_norm(a * sources - targets) > tol * scale * 100)
      throw Error("module_stinespring: inner-product Gram mismatch "
                  "(not a phi-map for the given dilation)");
    m.w.blocks[k] = a.adjoint();
  }
  return m;
}

bool minimality_check(const StinespringData& s, double tol) {
  auto abasis = algebra_basis(s.phi.domain);
  auto dbasis = module_basis(s.d);
  Mat span(s.k_phi.dim(), abasis.size() * dbasis.size());
  int col = 0;
  for (const auto& a : abasis)
    for (const auto& d : dbasis)
      span.col(col++) = to_vector(s.pi(a)(s.v(d)));
  return numerical_rank(span, tol) == s.k_phi.dim();
}

bool minimality_check(const ModuleStinespringData& m, double tol) {
  auto ebasis = module_basis(m.map.domain);
  auto dbasis = module_basis(m.base.d);
  Mat span(m.k_big.dim(), ebasis.size() * dbasis.size());
  int col = 0;
  for (size_t i = 0; i < ebasis.size(); ++i)
    for (const auto& d : dbasis)
      span.col(col++) = to_vector(m.pi_on_basis[i](m.base.v(d)));
  return numerical_rank(span, tol) == m.k_big.dim();
}

}  // namespace cpmod
