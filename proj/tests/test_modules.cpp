#include "cpmod/modules.hpp"
#include "cpmod/sampling.hpp"

#include <doctest.h>

using namespace cpmod;

TEST_CASE("inner product basics") {
  BlockAlgebra alg{{2}};
  ModuleShape shape{alg, {3}, std::nullopt};
  ModuleElement x = ModuleElement::zero(shape);
  ModuleElement y = ModuleElement::zero(shape);
  x.blocks[0](0, 0) = 1.0;
  y.blocks[0](1, 1) = 1.0;  // disjoint rows and columns
  CHECK(inner_product(x, y).max_seminorm() == 0.0);
  CHECK(is_positive(inner_product(x, x), 1e-9));

  Rng rng(2);
  for (int it = 0; it < 200; ++it) {
    ModuleElement a = random_module_element(rng, shape);
    ModuleElement b = random_module_element(rng, shape);
    CHECK(is_positive(inner_product(a, a), 1e-9));
    CHECK(distance(inner_product(a, b).adjoint(), inner_product(b, a)) <
          1e-12);
    // right linearity in the second slot
    AlgebraElement c = random_element(rng, alg);
    CHECK(distance(inner_product(a, b.right_mul(c)),
                   inner_product(a, b) * c) <= 1e-12 * (1.0 + c.max_seminorm()));
  }
}

TEST_CASE("the matrix-block model is full") {
  BlockAlgebra alg{{2, 1}};
  ModuleShape shape{alg, {3, 2}, std::nullopt};
  auto basis = module_basis(shape);
  Mat span(alg.dim(), basis.size() * basis.size());
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = 0; j < basis.size(); ++j)
      span.col(i * basis.size() + j) =
          to_vector(inner_product(basis[i], basis[j]));
  CHECK(numerical_rank(span, 1e-12) == alg.dim());
}

TEST_CASE("adjoint identity on random vectors") {
  BlockAlgebra alg{{2}};
  ModuleShape dom{alg, {3}, std::nullopt};
  ModuleShape cod{alg, {2}, std::nullopt};
  Rng rng(4);
  ModuleOperator t = ModuleOperator::zero(dom, cod);
  t.blocks[0] = rng.gaussian(2, 3);
  for (int it = 0; it < 20; ++it) {
    ModuleElement x = random_module_element(rng, dom);
    ModuleElement y = random_module_element(rng, cod);
    CHECK(distance(inner_product(t(x), y),
                   inner_product(x, t.adjoint()(y))) <= 1e-12 * 10);
  }
  Mat n = Mat::Zero(2, 2);
  n(0, 1) = 1.0;
  ModuleOperator u = ModuleOperator::identity(cod);
  u.blocks[0] = n;
  CHECK(u.adjoint().blocks[0](1, 0) == Complex(1.0, 0.0));
}

TEST_CASE("partial isometry test") {
  BlockAlgebra alg{{1}};
  ModuleShape shape{alg, {4}, std::nullopt};
  ModuleOperator v = ModuleOperator::identity(shape);
  v.blocks[0].diagonal() << 1, -1, 1, 1;
  CHECK(is_partial_isometry(v, 1e-10));
  ModuleOperator w = ModuleOperator::identity(shape);
  w.blocks[0] *= 2.0;
  CHECK(!is_partial_isometry(w, 1e-10));
}

TEST_CASE("kernel projection") {
  BlockAlgebra alg{{1}};
  ModuleShape shape{alg, {2}, std::nullopt};
  ModuleOperator zero = ModuleOperator::zero(shape, shape);
  CHECK(distance(kernel_projection(zero, 1e-9),
                 ModuleOperator::identity(shape)) < 1e-12);
  ModuleOperator inv = ModuleOperator::identity(shape);
  inv.blocks[0] << 2, 1, 0, 1;
  CHECK(max_operator_norm(kernel_projection(inv, 1e-9)) < 1e-10);
  ModuleOperator d = ModuleOperator::identity(shape);
  d.blocks[0].diagonal() << 1, 0;
  ModuleOperator p = kernel_projection(d, 1e-9);
  CHECK(std::abs(p.blocks[0](1, 1).real() - 1.0) < 1e-12);
  CHECK(std::abs(p.blocks[0](0, 0)) < 1e-12);
  CHECK(distance(p * p, p) < 1e-10);
  CHECK(distance(p.adjoint(), p) < 1e-12);
  CHECK(max_operator_norm(d * p) < 1e-10);
}

TEST_CASE("operator norms per block") {
  BlockAlgebra alg{{2, 2}};
  ModuleShape shape{alg, {2, 3}, std::nullopt};
  CHECK(operator_norm(ModuleOperator::identity(shape), 0) ==
        doctest::Approx(1.0));
  CHECK(operator_norm(ModuleOperator::zero(shape, shape), 1) == 0.0);
}

TEST_CASE("ampliation left action is a unital *-homomorphism") {
  BlockAlgebra alg{{2}};
  ModuleShape shape{alg, {4}, LeftActionSpec{{2}}};
  Rng rng(9);
  CHECK(distance(left_action_operator(shape, AlgebraElement::identity(alg)),
                 ModuleOperator::identity(shape)) == 0.0);
  for (int it = 0; it < 20; ++it) {
    AlgebraElement a = random_element(rng, alg);
    AlgebraElement b = random_element(rng, alg);
    CHECK(distance(left_action_operator(shape, a * b),
                   left_action_operator(shape, a) *
                       left_action_operator(shape, b)) < 1e-12);
    CHECK(distance(left_action_operator(shape, a.adjoint()),
                   left_action_operator(shape, a).adjoint()) < 1e-12);
  }
}
