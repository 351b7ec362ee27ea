#include "cpmod/sampling.hpp"

#include <cmath>

namespace cpmod {

double Rng::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(gen);
}

double Rng::gauss() { return std::normal_distribution<double>(0.0, 1.0)(gen); }

Complex Rng::cgauss() { return Complex(gauss(), gauss()); }

Mat Rng::gaussian(int rows, int cols) {
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = cgauss();
  return m;
}

AlgebraElement random_element(Rng& rng, const BlockAlgebra& alg) {
  AlgebraElement a{alg, {}};
  for (int n : alg.block_dims) a.blocks.push_back(rng.gaussian(n, n));
  return a;
}

AlgebraElement random_positive(Rng& rng, const BlockAlgebra& alg) {
  AlgebraElement b = random_element(rng, alg);
  return b.adjoint() * b;
}

ModuleElement random_module_element(Rng& rng, const ModuleShape& shape) {
  ModuleElement x{shape, {}};
  for (int j = 0; j < shape.num_blocks(); ++j)
    x.blocks.push_back(rng.gaussian(shape.height(j), shape.width(j)));
  return x;
}

CPMap random_cp_map(Rng& rng, const BlockAlgebra& dom, const BlockAlgebra& cod,
                    int kraus) {
  CPMap m = CPMap::zero(dom, cod);
  for (int j = 0; j < dom.num_blocks(); ++j) {
    int n = dom.block_dim(j);
    for (int k = 0; k < cod.num_blocks(); ++k) {
      int np = cod.block_dim(k);
      for (int t = 0; t < kraus; ++t) {
        // phi_jk(a) = v* a v contributes the Gram of the rows of v.
        Mat v = std::sqrt(1.0 / (2.0 * n * kraus)) * rng.gaussian(n, np);
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s)
            m.choi[j][k].block(r * np, s * np, np, np) +=
                v.row(r).adjoint() * v.row(s);
      }
    }
  }
  return m;
}

CPMap random_non_cp_map(Rng& rng, const BlockAlgebra& dom,
                        const BlockAlgebra& cod) {
  CPMap m = random_cp_map(rng, dom, cod);
  // Push one Choi block below zero along a random direction.
  int j = static_cast<int>(rng.uniform() * dom.num_blocks());
  int k = static_cast<int>(rng.uniform() * cod.num_blocks());
  Mat& c = m.choi.at(j).at(k);
  Vec dir = rng.gaussian(static_cast<int>(c.rows()), 1);
  dir.normalize();
  double depth = operator_norm(c) + 1.0;
  c -= depth * (dir * dir.adjoint());
  return m;
}

PhiMap random_phi_map(Rng& rng, const ModuleShape& e, const ModuleShape& f,
                      const CPMap& phi, double tol) {
  if (f.algebra != phi.codomain)
    throw Error("random_phi_map: codomain algebra mismatch");
  StinespringData s = stinespring(phi, tol);
  TensorDilation td = tensor_dilation(e, s, tol);
  std::vector<Mat> iso;
  for (int k = 0; k < f.num_blocks(); ++k) {
    int rho = td.k_big.height(k);
    if (f.height(k) < rho)
      throw Error("random_phi_map: codomain block too small for an isometry");
    Eigen::HouseholderQR<Mat> qr(rng.gaussian(f.height(k), rho));
    Mat q = qr.householderQ() * Mat::Identity(f.height(k), rho);
    iso.push_back(std::move(q));
  }
  auto ebasis = module_basis(e);
  std::vector<ModuleElement> images;
  for (size_t i = 0; i < ebasis.size(); ++i) {
    ModuleElement img = ModuleElement::zero(f);
    for (int k = 0; k < f.num_blocks(); ++k)
      img.blocks[k] =
          iso[k] * td.pi_on_basis[i].blocks[k] * s.xi.blocks[k];
    images.push_back(std::move(img));
  }
  return PhiMap::from_images(e, f, images, phi);
}

namespace {

constexpr double kContractionSlack = 1e-3;

}  // namespace

ModuleOperator random_positive_contraction(
    Rng& rng, const std::vector<ModuleOperator>& basis, double tol) {
  if (basis.empty())
    throw Error("random_positive_contraction: empty commutant basis");
  ModuleOperator b = ModuleOperator::zero(basis.front().domain,
                                          basis.front().codomain);
  for (const ModuleOperator& e : basis) b += rng.cgauss() * e;
  ModuleOperator m = b.adjoint() * b;
  double scale = 1.0 / (max_operator_norm(m) + kContractionSlack);
  (void)tol;
  return Complex(scale, 0.0) * m;
}

CommutantElement random_positive_contraction(
    Rng& rng, const std::vector<CommutantElement>& basis, double tol) {
  if (basis.empty())
    throw Error("random_positive_contraction: empty commutant basis");
  CommutantElement b{
      ModuleOperator::zero(basis.front().t1.domain, basis.front().t1.domain),
      ModuleOperator::zero(basis.front().t2.domain, basis.front().t2.domain)};
  for (const CommutantElement& e : basis) b += rng.cgauss() * e;
  CommutantElement m = b.adjoint() * b;
  double norm =
      std::max(max_operator_norm(m.t1), max_operator_norm(m.t2));
  (void)tol;
  return Complex(1.0 / (norm + kContractionSlack), 0.0) * m;
}

CommutantElement random_dominating_contraction(
    Rng& rng, const std::vector<CommutantElement>& basis,
    const CommutantElement& lower, double tol) {
  CommutantElement bump = random_positive_contraction(rng, basis, tol);
  double lower_norm = std::max(max_operator_norm(lower.t1),
                               max_operator_norm(lower.t2));
  double gap = std::max(0.0, 1.0 - lower_norm);
  return lower + Complex(gap, 0.0) * bump;
}

}  // namespace cpmod
