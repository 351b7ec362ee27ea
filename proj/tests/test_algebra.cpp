#include "cpmod/algebra.hpp"
#include "cpmod/sampling.hpp"

#include <doctest.h>

using namespace cpmod;

namespace {
AlgebraElement single_block(const Mat& m) {
  BlockAlgebra alg{{static_cast<int>(m.rows())}};
  AlgebraElement a = AlgebraElement::zero(alg);
  a.blocks[0] = m;
  return a;
}
}  // namespace

TEST_CASE("seminorm is the per-block operator norm") {
  BlockAlgebra alg{{2, 3}};
  CHECK(seminorm(AlgebraElement::identity(alg), 0) == doctest::Approx(1.0));
  CHECK(seminorm(AlgebraElement::zero(alg), 1) == 0.0);
  Mat n = Mat::Zero(2, 2);
  n(0, 1) = 2.0;
  CHECK(seminorm(single_block(n), 0) == doctest::Approx(2.0));
}

TEST_CASE("c*-identity of the seminorms") {
  Rng rng(5);
  BlockAlgebra alg{{2, 3}};
  for (int it = 0; it < 50; ++it) {
    AlgebraElement a = random_element(rng, alg);
    for (int j = 0; j < alg.num_blocks(); ++j) {
      double p = seminorm(a, j);
      CHECK(std::abs(seminorm(a.adjoint() * a, j) - p * p) <=
            1e-10 * (1.0 + p * p));
    }
  }
}

TEST_CASE("positivity verdicts") {
  BlockAlgebra alg{{2}};
  CHECK(is_positive(AlgebraElement::identity(alg), 1e-9));
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  CHECK(!is_positive(single_block(d), 1e-9));
  Mat h(2, 2);
  h << 2, 1, 1, 1;  // eigenvalues (3 +- sqrt 5)/2, both positive
  CHECK(is_positive(single_block(h), 1e-9));
  Mat nh = Mat::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(is_positive(single_block(nh), 1e-9), Error);
}

TEST_CASE("squares are positive") {
  Rng rng(7);
  BlockAlgebra alg{{2, 1}};
  for (int it = 0; it < 1000; ++it) {
    AlgebraElement b = random_element(rng, alg);
    CHECK(is_positive(b.adjoint() * b, 1e-9));
  }
}

TEST_CASE("positive square root") {
  BlockAlgebra alg{{2}};
  AlgebraElement one = AlgebraElement::identity(alg);
  CHECK(distance(sqrt_psd(one, 1e-9), one) < 1e-12);
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  AlgebraElement s = sqrt_psd(single_block(d), 1e-9);
  CHECK(std::abs(s.blocks[0](0, 0).real() - 2.0) < 1e-12);
  CHECK(std::abs(s.blocks[0](1, 1).real() - 3.0) < 1e-12);

  Rng rng(11);
  for (int it = 0; it < 20; ++it) {
    AlgebraElement p = random_positive(rng, alg);
    AlgebraElement r = sqrt_psd(p, 1e-9);
    CHECK(distance(r * r, p) <= 1e-10 * (1.0 + p.max_seminorm()));
  }
}

TEST_CASE("element matrix flattening follows the block-of-blocks layout") {
  BlockAlgebra alg{{2}};
  ElementMatrix p = ElementMatrix::zero(2, alg);
  p.at(0, 1).blocks[0](1, 0) = 3.0;
  Mat flat = p.flatten(0);
  CHECK(flat.rows() == 4);
  CHECK(flat(1, 2) == Complex(3.0, 0.0));
}

TEST_CASE("identity grid splits into coordinate tuples") {
  BlockAlgebra scalars{{1}};
  ElementMatrix p = ElementMatrix::zero(2, scalars);
  p.at(0, 0).blocks[0](0, 0) = 1.0;
  p.at(1, 1).blocks[0](0, 0) = 1.0;
  auto tuples = positive_decomposition(p, 1e-9);
  REQUIRE(tuples.size() == 2);
  ElementMatrix back = gram_sum(scalars, tuples);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(distance(p.at(i, j), back.at(i, j)) < 1e-12);
}

TEST_CASE("a single gram tuple decomposes into itself up to gram equality") {
  Rng rng(3);
  BlockAlgebra alg{{2}};
  std::vector<AlgebraElement> tuple{random_element(rng, alg),
                                    random_element(rng, alg)};
  ElementMatrix p = gram_sum(alg, {tuple});
  auto tuples = positive_decomposition(p, 1e-9);
  ElementMatrix back = gram_sum(alg, tuples);
  double scale = 1.0 + operator_norm(p.flatten(0));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(distance(p.at(i, j), back.at(i, j)) <= 1e-10 * scale);
}

TEST_CASE("random positive grids reconstruct") {
  Rng rng(13);
  BlockAlgebra alg{{2, 3}};
  for (int it = 0; it < 25; ++it) {
    int n = 1 + it % 4;
    std::vector<std::vector<AlgebraElement>> gens;
    for (int t = 0; t < n; ++t) {
      std::vector<AlgebraElement> tuple;
      for (int i = 0; i < n; ++i) tuple.push_back(random_element(rng, alg));
      gens.push_back(std::move(tuple));
    }
    ElementMatrix p = gram_sum(alg, gens);
    CHECK(is_positive(p, 1e-9));
    auto tuples = positive_decomposition(p, 1e-9);
    CHECK(static_cast<int>(tuples.size()) <= n);
    ElementMatrix back = gram_sum(alg, tuples);
    double scale = 1.0;
    for (int j = 0; j < alg.num_blocks(); ++j)
      scale = std::max(scale, operator_norm(p.flatten(j)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(distance(p.at(i, j), back.at(i, j)) <= 1e-10 * scale);
  }
}
