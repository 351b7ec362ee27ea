#pragma once

#include "cpmod/modules.hpp"

#include <functional>

namespace cpmod {

/// A linear map between block algebras stored blockwise as Choi matrices:
/// C[j][k] in M_{n_j * n'_k} encodes the component M_{n_j} -> M_{n'_k} via
/// C[j][k](r*n' + u, s*n' + v) = phi(E_rs)_k (u, v)   (domain factor first).
/// The map is completely positive iff every C[j][k] is PSD (in particular
/// Hermitian, which is equivalent to the map being *-preserving).
struct CPMap {
  BlockAlgebra domain;
  BlockAlgebra codomain;
  std::vector<std::vector<Mat>> choi;

  static CPMap zero(const BlockAlgebra& dom, const BlockAlgebra& cod);
  static CPMap identity(const BlockAlgebra& alg);
  /// Assemble from images of matrix units: values(j, r, s) is the image of
  /// the unit E_rs of domain block j.
  static CPMap from_values(
      const BlockAlgebra& dom, const BlockAlgebra& cod,
      const std::function<AlgebraElement(int, int, int)>& values);
  static CPMap from_linear(
      const BlockAlgebra& dom, const BlockAlgebra& cod,
      const std::function<AlgebraElement(const AlgebraElement&)>& map);

  AlgebraElement operator()(const AlgebraElement& a) const;

  CPMap& operator+=(const CPMap& o);
  CPMap& operator-=(const CPMap& o);
  friend CPMap operator+(CPMap a, const CPMap& b) { return a += b; }
  friend CPMap operator-(CPMap a, const CPMap& b) { return a -= b; }
  friend CPMap operator*(double s, CPMap a);

  bool same_signature(const CPMap& o) const {
    return domain == o.domain && codomain == o.codomain;
  }
  void validate() const;
};

/// Largest operator-norm deviation between Choi blocks.
double choi_distance(const CPMap& a, const CPMap& b);

/// True iff every Choi block is PSD within tol (non-Hermitian blocks fail).
bool is_completely_positive(const CPMap& phi, double tol);

/// psi <= phi in the completely positive order: phi - psi is CP.
bool cp_order_leq(const CPMap& psi, const CPMap& phi, double tol);

/// A module map Phi: E -> F together with its underlying algebra map phi,
/// satisfying <Phi(x), Phi(y)> = phi(<x, y>).
struct PhiMap {
  ModuleShape domain;    // over the underlying map's domain algebra
  ModuleShape codomain;  // over its codomain algebra
  Mat matrix;            // codomain.dim() x domain.dim(), basis coordinates
  CPMap underlying;

  static PhiMap from_images(const ModuleShape& e, const ModuleShape& f,
                            const std::vector<ModuleElement>& images,
                            const CPMap& underlying);

  ModuleElement operator()(const ModuleElement& x) const;
  friend PhiMap operator*(double s, PhiMap p);
  /// Post-composition with an operator on the codomain.
  friend PhiMap operator*(const ModuleOperator& v, const PhiMap& p);
  void validate() const;
};

/// Verifies the phi-map identity on all basis pairs of the domain module.
bool phi_map_check(const PhiMap& p, double tol);

/// Recovers the unique algebra map phi with phi(<x_i, x_j>) = <Phi x_i, Phi x_j>
/// from a module map given on basis coordinates (fullness of E makes the
/// system determined). Throws if the system is inconsistent beyond tol.
CPMap induced_phi(const Mat& matrix, const ModuleShape& e, const ModuleShape& f,
                  double tol);

/// Phi ~ Psi iff the induced algebra maps coincide (Choi distance <= tol,
/// relative to scale).
bool equivalence_check(const PhiMap& a, const PhiMap& b, double tol);

}  // namespace cpmod
