#pragma once

#include "cpmod/radon_nikodym.hpp"

#include <random>

namespace cpmod {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform();  // [0, 1)
  double gauss();
  Complex cgauss();
  Mat gaussian(int rows, int cols);
};

AlgebraElement random_element(Rng& rng, const BlockAlgebra& alg);
AlgebraElement random_positive(Rng& rng, const BlockAlgebra& alg);
ModuleElement random_module_element(Rng& rng, const ModuleShape& shape);

/// CP map assembled from `kraus` random Kraus pieces per block pair.
CPMap random_cp_map(Rng& rng, const BlockAlgebra& dom, const BlockAlgebra& cod,
                    int kraus = 2);

/// A map that is never CP: a random CP Choi grid with one eigenvalue pushed
/// strictly below zero.
CPMap random_non_cp_map(Rng& rng, const BlockAlgebra& dom,
                        const BlockAlgebra& cod);

/// Random phi-map E -> F over the given CP map, built as a random isometry
/// out of the tensor dilation (so the phi-map identity holds exactly).
/// Throws if a block of F is too small to receive the isometry.
PhiMap random_phi_map(Rng& rng, const ModuleShape& e, const ModuleShape& f,
                      const CPMap& phi, double tol);

/// Random positive contraction in the span of a commutant basis, built as
/// B*B/(norm + eps) with B a random combination of basis elements, so
/// membership is exact by closure of the commutant under * and products.
ModuleOperator random_positive_contraction(
    Rng& rng, const std::vector<ModuleOperator>& basis, double tol);
CommutantElement random_positive_contraction(
    Rng& rng, const std::vector<CommutantElement>& basis, double tol);

/// A second positive contraction above the given one: lower <= result <= I.
CommutantElement random_dominating_contraction(
    Rng& rng, const std::vector<CommutantElement>& basis,
    const CommutantElement& lower, double tol);

}  // namespace cpmod
