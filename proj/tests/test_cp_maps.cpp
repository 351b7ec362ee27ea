#include "cpmod/cp_maps.hpp"
#include "cpmod/instance.hpp"
#include "cpmod/sampling.hpp"

#include <doctest.h>

using namespace cpmod;

namespace {
// Schur multiplier on M_2: entrywise product with the given 2x2 pattern.
CPMap schur_map(const Mat& pattern) {
  BlockAlgebra alg{{2}};
  return CPMap::from_linear(alg, alg, [&](const AlgebraElement& a) {
    AlgebraElement out = a;
    out.blocks[0] = out.blocks[0].cwiseProduct(pattern);
    return out;
  });
}
}  // namespace

TEST_CASE("choi block of the identity map is the rank-one pair matrix") {
  BlockAlgebra alg{{2}};
  CPMap id = CPMap::identity(alg);
  const Mat& c = id.choi[0][0];
  // entry ((r,u),(s,v)) is delta_ru delta_sv
  for (int r = 0; r < 2; ++r)
    for (int u = 0; u < 2; ++u)
      for (int s = 0; s < 2; ++s)
        for (int v = 0; v < 2; ++v)
          CHECK(c(r * 2 + u, s * 2 + v) ==
                Complex((r == u && s == v) ? 1.0 : 0.0, 0.0));
  CHECK(numerical_rank(c, 1e-12) == 1);
  Rng rng(1);
  AlgebraElement a = random_element(rng, alg);
  CHECK(distance(id(a), a) < 1e-12);
  CHECK(distance(CPMap::zero(alg, alg)(a), AlgebraElement::zero(alg)) == 0.0);
}

TEST_CASE("matrix-unit values round trip through the choi grid") {
  Rng rng(3);
  BlockAlgebra dom{{2, 1}};
  BlockAlgebra cod{{2}};
  CPMap m = random_cp_map(rng, dom, cod);
  CPMap rebuilt = CPMap::from_linear(
      dom, cod, [&](const AlgebraElement& a) { return m(a); });
  CHECK(choi_distance(m, rebuilt) < 1e-12);
}

TEST_CASE("bundled five-row instance: underlying map") {
  InstanceFile inst = builtin_fixture("example_3_4");
  CPMap phi = inst.cp_map("phi");
  CHECK(is_completely_positive(phi, 1e-9));
  CHECK(std::abs(phi.choi[0][0](0, 0).real() - 0.25) < 1e-15);
  CHECK(std::abs(phi.choi[0][0](3, 3).real() - 1.0) < 1e-15);
  // it acts as the entrywise multiplier diag(1/4, 1)
  Mat pattern(2, 2);
  pattern << 0.25, 0, 0, 1;
  CHECK(choi_distance(phi, schur_map(pattern)) < 1e-12);
}

TEST_CASE("bundled four-row instance: underlying map") {
  InstanceFile inst = builtin_fixture("example_3_5");
  CPMap phi = inst.cp_map("phi");
  AlgebraElement img = phi(AlgebraElement::identity(phi.domain));
  CHECK(operator_norm(img.blocks[0] - 3.0 * Mat::Identity(2, 2)) < 1e-12);
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(phi.choi[0][0]),
                                        Eigen::EigenvaluesOnly);
  Eigen::Vector4d want(0, 0, 2, 4);
  CHECK((es.eigenvalues() - want).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(is_completely_positive(phi, 1e-9));
}

TEST_CASE("transpose is not completely positive") {
  BlockAlgebra alg{{2}};
  CPMap t = CPMap::from_linear(alg, alg, [](const AlgebraElement& a) {
    AlgebraElement out = a;
    out.blocks[0] = out.blocks[0].transpose().eval();
    return out;
  });
  CHECK(!is_completely_positive(t, 1e-9));
  CHECK(min_eigenvalue(t.choi[0][0]) == doctest::Approx(-1.0));
}

TEST_CASE("compressions are completely positive") {
  Rng rng(7);
  BlockAlgebra dom{{3}};
  BlockAlgebra cod{{2}};
  Mat v = rng.gaussian(3, 2);
  CPMap comp = CPMap::from_linear(dom, cod, [&](const AlgebraElement& a) {
    AlgebraElement out = AlgebraElement::zero(cod);
    out.blocks[0] = v.adjoint() * a.blocks[0] * v;
    return out;
  });
  CHECK(is_completely_positive(comp, 1e-9));
}

TEST_CASE("maps that fail to preserve adjoints are not completely positive") {
  BlockAlgebra alg{{2}};
  CPMap m = CPMap::identity(alg);
  m.choi[0][0](0, 1) += 0.5;  // breaks hermiticity of the block
  CHECK(!is_completely_positive(m, 1e-9));
}

TEST_CASE("cp order") {
  InstanceFile a = builtin_fixture("example_3_4");
  InstanceFile b = builtin_fixture("example_3_5");
  CPMap small = a.cp_map("phi");
  CPMap large = b.cp_map("phi");
  CHECK(cp_order_leq(small, small, 1e-9));
  CHECK(cp_order_leq(0.5 * small, small, 1e-9));
  CHECK(cp_order_leq(small, large, 1e-9));
  CHECK(!cp_order_leq(large, small, 1e-9));
}

TEST_CASE("module map identity holds on the bundled instances") {
  for (const std::string& name : builtin_fixture_names()) {
    InstanceFile inst = builtin_fixture(name);
    PhiMap big = inst.phi_map("Phi");
    PhiMap other = inst.phi_map("Psi");
    CHECK(phi_map_check(big, 1e-10));
    CHECK(phi_map_check(other, 1e-10));
    // doubling the module map breaks the identity against the same
    // underlying map by a factor of four
    PhiMap bad = big;
    bad.matrix *= 2.0;
    CHECK(!phi_map_check(bad, 1e-10));
    CHECK(equivalence_check(big, other, 1e-9));
    CHECK(!equivalence_check(big, bad, 1e-9));
  }
}

TEST_CASE("recovering the underlying map from the module map") {
  InstanceFile inst = builtin_fixture("example_3_4");
  PhiMap big = inst.phi_map("Phi");
  CPMap recovered = induced_phi(big.matrix, big.domain, big.codomain, 1e-9);
  CHECK(choi_distance(recovered, big.underlying) < 1e-10);

  CPMap from_zero = induced_phi(Mat::Zero(big.codomain.dim(), big.domain.dim()),
                                big.domain, big.codomain, 1e-9);
  CHECK(choi_distance(from_zero, CPMap::zero(big.underlying.domain,
                                             big.underlying.codomain)) <
        1e-12);

  // a generic matrix does not preserve any algebra-valued inner product
  Rng rng(21);
  Mat garbage = rng.gaussian(big.codomain.dim(), big.domain.dim());
  garbage(0, 0) += 3.0;
  CHECK_THROWS_AS(induced_phi(garbage, big.domain, big.codomain, 1e-9), Error);
}

TEST_CASE("unitary post-composition preserves equivalence") {
  InstanceFile inst = builtin_fixture("example_3_5");
  PhiMap big = inst.phi_map("Phi");
  Rng rng(17);
  Mat g = rng.gaussian(4, 4);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  ModuleOperator u = ModuleOperator::identity(big.codomain);
  u.blocks[0] = q;
  PhiMap rotated = u * big;
  CHECK(equivalence_check(big, rotated, 1e-9));
}
