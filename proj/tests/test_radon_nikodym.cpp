#include "cpmod/instance.hpp"
#include "cpmod/radon_nikodym.hpp"
#include "cpmod/sampling.hpp"

#include <doctest.h>

using namespace cpmod;

namespace {

Representation left_mult_rep(const BlockAlgebra& alg, int copies) {
  // pi(a) acting on `copies` stacked columns of each block
  ModuleShape space{alg, {}, std::nullopt};
  for (int n : alg.block_dims) space.heights.push_back(n * copies);
  Representation pi{alg, space, {}};
  for (const AlgebraElement& a : algebra_basis(alg)) {
    ModuleOperator op = ModuleOperator::zero(space, space);
    for (size_t k = 0; k < op.blocks.size(); ++k) {
      Mat amp = Mat::Zero(space.height(k), space.height(k));
      int n = alg.block_dim(k);
      for (int c = 0; c < copies; ++c)
        amp.block(c * n, c * n, n, n) = a.blocks[k];
      op.blocks[k] = amp;
    }
    pi.on_basis.push_back(std::move(op));
  }
  return pi;
}

ModuleStinespringData dilate(const PhiMap& big, double tol) {
  StinespringData s = stinespring(big.underlying, tol);
  return module_stinespring(big, s, tol);
}

}  // namespace

TEST_CASE("commutant of one copy of a matrix algebra is the scalars") {
  auto basis = algebra_commutant(left_mult_rep(BlockAlgebra{{2}}, 1), 1e-9);
  CHECK(basis.size() == 1);
}

TEST_CASE("commutant of two copies has dimension four") {
  auto basis = algebra_commutant(left_mult_rep(BlockAlgebra{{2}}, 2), 1e-9);
  CHECK(basis.size() == 4);
}

TEST_CASE("commutant dimension matches a dense null-space oracle") {
  InstanceFile inst = builtin_fixture("example_3_4");
  CPMap phi = inst.cp_map("phi");
  StinespringData s = stinespring(phi, 1e-9);
  auto basis = algebra_commutant(s.pi, 1e-9);

  // oracle: stack the commutation constraints for every basis image and
  // count the null directions directly
  size_t oracle_dim = 0;
  for (int k = 0; k < s.k_phi.num_blocks(); ++k) {
    int r = s.k_phi.height(k);
    std::vector<Mat> rows;
    for (const ModuleOperator& img : s.pi.on_basis) {
      const Mat p = img.blocks[k];
      rows.push_back(linear_map_matrix(
          r, r, [&](const Mat& u) { return u * p - p * u; }));
    }
    Mat stacked(rows.size() * r * r, r * r);
    for (size_t i = 0; i < rows.size(); ++i)
      stacked.middleRows(i * r * r, r * r) = rows[i];
    oracle_dim += null_space(stacked, 1e-9).cols();
  }
  CHECK(basis.size() == oracle_dim);
}

TEST_CASE("contraction between dilations of ordered maps") {
  InstanceFile inst = builtin_fixture("example_3_5");
  CPMap phi = inst.cp_map("phi");
  StinespringData s = stinespring(phi, 1e-9);

  StinespringData same = stinespring(phi, 1e-9);
  ModuleOperator j = contraction_J(phi, phi, s, same, 1e-9);
  CHECK(distance(j.adjoint() * j, ModuleOperator::identity(s.k_phi)) < 1e-8);

  StinespringData half = stinespring(0.5 * phi, 1e-9);
  ModuleOperator jh = contraction_J(phi, 0.5 * phi, s, half, 1e-9);
  CHECK(distance(jh.adjoint() * jh,
                 Complex(0.5, 0.0) * ModuleOperator::identity(s.k_phi)) <
        1e-8);
  CHECK(max_operator_norm(jh) <= 1.0 + 1e-9);

  CHECK_THROWS_AS(contraction_J(0.5 * phi, phi, half, s, 1e-9), Error);
}

TEST_CASE("maps from commutant contractions and back") {
  InstanceFile inst = builtin_fixture("example_3_4");
  CPMap phi = inst.cp_map("phi");
  StinespringData s = stinespring(phi, 1e-9);

  ModuleOperator eye = ModuleOperator::identity(s.k_phi);
  CHECK(choi_distance(phi_T(s, eye, 1e-9), phi) < 1e-10);
  CHECK(choi_distance(phi_T(s, Complex(0.5, 0.0) * eye, 1e-9), 0.5 * phi) <
        1e-10);
  CPMap zero = phi_T(s, ModuleOperator::zero(s.k_phi, s.k_phi), 1e-9);
  CHECK(choi_distance(zero, CPMap::zero(phi.domain, phi.codomain)) < 1e-12);

  CHECK(distance(recover_T(s, phi, 1e-9), eye) < 1e-8);
  CHECK(max_operator_norm(recover_T(s, zero, 1e-9)) < 1e-8);

  Rng rng(41);
  auto basis = algebra_commutant(s.pi, 1e-9);
  for (int it = 0; it < 10; ++it) {
    ModuleOperator t = random_positive_contraction(rng, basis, 1e-9);
    CPMap below = phi_T(s, t, 1e-9);
    CHECK(cp_order_leq(below, phi, 1e-9));
    CHECK(distance(recover_T(s, below, 1e-9), t) < 1e-8);
  }
}

TEST_CASE("module commutant contains the identity pair and is closed") {
  InstanceFile inst = builtin_fixture("example_3_5");
  ModuleStinespringData m = dilate(inst.phi_map("Phi"), 1e-9);
  auto basis = module_commutant(m, 1e-9);
  REQUIRE(!basis.empty());

  // the identity pair must lie in the span: residual of its best
  // approximation from the basis is zero; here we simply check membership
  // via the intertwining residual
  CommutantElement eye = CommutantElement::identity(m);
  CHECK(commutant_residual(m, eye) < 1e-10);

  for (const CommutantElement& c : basis) {
    CHECK(commutant_residual(m, c) < 1e-8);
    CHECK(commutant_residual(m, c.adjoint()) < 1e-8);
    for (const CommutantElement& d : basis)
      CHECK(commutant_residual(m, c * d) < 1e-8);
  }
}

TEST_CASE("scaling through a positive commutant pair") {
  InstanceFile inst = builtin_fixture("example_3_4");
  PhiMap big = inst.phi_map("Phi");
  StinespringData s = stinespring(big.underlying, 1e-9);
  ModuleStinespringData m = module_stinespring(big, s, 1e-9);

  CommutantElement eye = CommutantElement::identity(m);
  PhiMap same = phi_TS(m, s, eye, 1e-9);
  CHECK(operator_norm(same.matrix - big.matrix) < 1e-10);

  // a scalar pair lambda(I (+) I) scales the map by lambda and the
  // underlying map by lambda squared
  CommutantElement quarter = Complex(0.25, 0.0) * eye;
  PhiMap scaled = phi_TS(m, s, quarter, 1e-9);
  CHECK(operator_norm(scaled.matrix - 0.25 * big.matrix) < 1e-10);
  CHECK(choi_distance(scaled.underlying, 0.0625 * big.underlying) < 1e-10);
}

TEST_CASE("derivative of the map itself and of its half") {
  InstanceFile inst = builtin_fixture("example_3_5");
  PhiMap big = inst.phi_map("Phi");

  RNDerivative self = rn_derivative(big, big, 1e-9);
  ModuleStinespringData m = dilate(big, 1e-9);
  CHECK(distance(self.delta.t1, ModuleOperator::identity(m.base.k_phi)) <
        1e-8);
  CHECK(distance(self.delta.t2, ModuleOperator::identity(m.k_big)) < 1e-8);

  RNDerivative halved = rn_derivative(big, 0.5 * big, 1e-9);
  CHECK(distance(halved.delta.t1,
                 Complex(0.25, 0.0) * ModuleOperator::identity(m.base.k_phi)) <
        1e-8);
  CHECK(distance(halved.delta.t2,
                 Complex(0.25, 0.0) * ModuleOperator::identity(m.k_big)) <
        1e-8);

  CHECK_THROWS_AS(rn_derivative(0.5 * big, big, 1e-9), Error);
}

TEST_CASE("equivalent dominated maps share one derivative") {
  InstanceFile inst = builtin_fixture("example_3_5");
  PhiMap big = inst.phi_map("Phi");
  PhiMap other = inst.phi_map("Psi");
  PhiMap small1 = 0.5 * big;
  PhiMap small2 = 0.5 * other;
  RNDerivative d1 = rn_derivative(big, small1, 1e-9);
  RNDerivative d2 = rn_derivative(big, small2, 1e-9);
  CHECK(distance(d1.delta.t1, d2.delta.t1) < 1e-8);
  CHECK(distance(d1.delta.t2, d2.delta.t2) < 1e-8);
}

TEST_CASE("linking operator between the bundled four-row maps") {
  InstanceFile inst = builtin_fixture("example_3_5");
  PhiMap big = inst.phi_map("Phi");
  PhiMap other = inst.phi_map("Psi");
  ModuleOperator bundled = inst.module_operator("V");
  CHECK(is_partial_isometry(bundled, 1e-10));
  for (const ModuleElement& x : module_basis(big.domain))
    CHECK(distance(big(x), bundled(other(x))) < 1e-10);

  ModuleOperator v = equivalent_partial_isometry(big, other, 1e-9);
  CHECK(is_partial_isometry(v, 1e-8));
  for (const ModuleElement& x : module_basis(big.domain))
    CHECK(distance(big(x), v(other(x))) < 1e-8);

  // self-linking gives the range projection of the dilation coisometry
  ModuleOperator self = equivalent_partial_isometry(big, big, 1e-9);
  ModuleStinespringData m = dilate(big, 1e-9);
  CHECK(distance(self, m.w.adjoint() * m.w) < 1e-8);
}

TEST_CASE("the bundled five-row linking operator maps one map onto the other") {
  InstanceFile inst = builtin_fixture("example_3_4");
  PhiMap big = inst.phi_map("Phi");
  PhiMap other = inst.phi_map("Psi");
  ModuleOperator bundled = inst.module_operator("V");
  for (const ModuleElement& x : module_basis(big.domain))
    CHECK(distance(big(x), bundled(other(x))) < 1e-10);
  // a freshly constructed linking operator passes the full contract
  ModuleOperator v = equivalent_partial_isometry(big, other, 1e-9);
  CHECK(is_partial_isometry(v, 1e-8));
}

TEST_CASE("compression along a full-rank derivative changes nothing") {
  InstanceFile inst = builtin_fixture("example_3_5");
  PhiMap big = inst.phi_map("Phi");
  ReducedStinespring red = reduced_stinespring(big, big, 1e-9);
  CHECK(distance(red.p1, ModuleOperator::identity(red.p1.domain)) < 1e-8);
  CHECK(distance(red.p2, ModuleOperator::identity(red.p2.domain)) < 1e-8);
  CHECK(minimality_check(red.module, 1e-9));
  CHECK(equivalence_check(red.module.map, big, 1e-8));
}

TEST_CASE("order isomorphism spot check") {
  InstanceFile inst = builtin_fixture("example_3_4");
  OrderIsoReport report = order_iso_check(inst.phi_map("Phi"), 5, 1e-9, 3);
  CHECK(report.ok);
  CHECK(report.max_roundtrip_residual < 1e-8);
  CHECK(report.order_failures == 0);
}

TEST_CASE("purity verdicts") {
  BlockAlgebra alg{{2}};
  CPMap id = CPMap::identity(alg);
  ModuleShape e{alg, {2}, std::nullopt};
  PhiMap pure_map{e, e, Mat::Identity(e.dim(), e.dim()), id};
  CHECK(is_pure(pure_map, 1e-9));
  auto basis = module_commutant(dilate(pure_map, 1e-9), 1e-9);
  CHECK(basis.size() == 1);

  // two equivalent diagonal summands double the commutant
  BlockAlgebra doubled{{2, 2}};
  CPMap diag = CPMap::from_linear(alg, doubled, [&](const AlgebraElement& a) {
    AlgebraElement out = AlgebraElement::zero(doubled);
    out.blocks[0] = a.blocks[0];
    out.blocks[1] = a.blocks[0];
    return out;
  });
  Rng rng(51);
  StinespringData s = stinespring(diag, 1e-9);
  TensorDilation td = tensor_dilation(e, s, 1e-9);
  ModuleShape f{doubled, td.k_big.heights, std::nullopt};
  PhiMap big = random_phi_map(rng, e, f, diag, 1e-9);
  CHECK(!is_pure(big, 1e-9));
}
