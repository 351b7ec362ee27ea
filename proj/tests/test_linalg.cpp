#include "cpmod/linalg.hpp"

#include <doctest.h>

using namespace cpmod;

TEST_CASE("row-major vectorization round trip") {
  Mat m(2, 3);
  m << 1, 2, 3, 4, 5, Complex(0, 6);
  CHECK(vec_rm(m)(5) == Complex(0, 6));
  CHECK((unvec_rm(vec_rm(m), 2, 3) - m).norm() == 0.0);
}

TEST_CASE("psd test requires hermitian input") {
  Mat m(2, 2);
  m << 1, 1, 0, 1;
  CHECK(!is_psd(m, 1e-9));
  CHECK(is_psd(Mat::Identity(3, 3), 1e-9));
}

TEST_CASE("gram factor reproduces the gram matrix at reduced rank") {
  Mat q(1, 3);
  q << 1, 2, 3;
  Mat g = q.adjoint() * q;
  Mat r = gram_factor(g, 1e-12);
  CHECK(r.rows() == 1);
  CHECK(operator_norm(r.adjoint() * r - g) < 1e-12);
}

TEST_CASE("solve_left matches an exact factorization") {
  Mat sources(2, 4), l(3, 2);
  sources << 1, 0, 2, 1, 0, 1, 1, 1;
  l << 1, 2, 0, 1, Complex(0, 1), 0;
  Mat targets = l * sources;
  Mat solved = solve_left(sources, targets, 1e-12);
  CHECK(operator_norm(solved - l) < 1e-10);
}

TEST_CASE("range and kernel projectors are complementary for square input") {
  Mat m(3, 3);
  m << 1, 0, 0, 0, 2, 0, 0, 0, 0;  // hermitian, rank 2
  Mat pr = range_projector(m, 1e-12);
  Mat pk = kernel_projector(m, 1e-12);
  CHECK(operator_norm(pr + pk - Mat::Identity(3, 3)) < 1e-12);
  CHECK(numerical_rank(m, 1e-12) == 2);
  Mat rb = range_basis(m, 1e-12);
  CHECK(rb.cols() == 2);
  CHECK(operator_norm(rb * rb.adjoint() - pr) < 1e-12);
}

TEST_CASE("matrix square root clamps tiny negatives and squares back") {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  Mat s = sqrt_psd(d, 1e-9);
  CHECK(std::abs(s(0, 0).real() - 2.0) < 1e-12);
  CHECK(std::abs(s(1, 1).real() - 3.0) < 1e-12);
  Mat tiny = -1e-12 * Mat::Identity(2, 2);
  CHECK(operator_norm(sqrt_psd(tiny, 1e-9)) < 1e-5);
  CHECK_THROWS_AS(sqrt_psd(-Mat::Identity(2, 2), 1e-9), Error);
}
