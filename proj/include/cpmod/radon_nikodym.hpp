#pragma once

#include "cpmod/dilation.hpp"

#include <cstdint>

namespace cpmod {

/// A pair T1 (+) T2 in the commutant of the module representation: T1 acts on
/// K_phi, T2 on K_Phi, intertwining pi_Phi(x) T1 = T2 pi_Phi(x) and
/// T1 pi_Phi(x)* = pi_Phi(x)* T2.
struct CommutantElement {
  ModuleOperator t1;
  ModuleOperator t2;

  static CommutantElement identity(const ModuleStinespringData& m);
  CommutantElement adjoint() const;
  CommutantElement& operator+=(const CommutantElement& o);
  friend CommutantElement operator+(CommutantElement a,
                                    const CommutantElement& b) {
    return a += b;
  }
  friend CommutantElement operator*(Complex s, CommutantElement a);
  /// Componentwise composition.
  friend CommutantElement operator*(const CommutantElement& a,
                                    const CommutantElement& b);
};

/// Largest intertwining residual of (t1, t2) against the basis images of
/// pi_Phi; zero (up to roundoff) exactly for commutant members.
double commutant_residual(const ModuleStinespringData& m,
                          const CommutantElement& ce);

/// Operator basis of { T : T pi(a) = pi(a) T for all a }, assembled per
/// seminorm block from an SVD null space of the stacked commutation system.
std::vector<ModuleOperator> algebra_commutant(const Representation& pi,
                                              double tol);

/// Basis of the commutant pairs of pi_Phi (joint null space of both
/// intertwining conditions over the basis of E).
std::vector<CommutantElement> module_commutant(const ModuleStinespringData& m,
                                               double tol);

/// The contraction K_phi -> K_psi determined by
/// pi_phi(a) V_phi(b) -> pi_psi(a) V_psi(b), for psi <= phi in the CP order.
/// Satisfies J V_phi = V_psi and J pi_phi(a) = pi_psi(a) J.
ModuleOperator contraction_J(const CPMap& phi, const CPMap& psi,
                             const StinespringData& s_phi,
                             const StinespringData& s_psi, double tol);

/// The map a -> V* T pi(a) V for T in the commutant of pi; lands in [0, phi]
/// when 0 <= T <= I.
CPMap phi_T(const StinespringData& s, const ModuleOperator& t, double tol);

/// Inverse of T -> phi_T on [0, phi]: T = J* J with J = contraction_J.
ModuleOperator recover_T(const StinespringData& s, const CPMap& psi,
                         double tol);

/// The module map x -> W* sqrt(T2) pi_Phi(x) sqrt(T1) xi for a positive
/// commutant pair; its underlying algebra map is phi_{T1^2}.
PhiMap phi_TS(const ModuleStinespringData& m, const StinespringData& s,
              const CommutantElement& ts, double tol);

/// delta = J*J (+) I*I with the contraction J on the algebra level and the
/// intertwiner I on the module level; psi ~ Phi_{sqrt(delta)}.
struct RNDerivative {
  CommutantElement delta;
  ModuleOperator j;  // K_phi -> K_psi
  ModuleOperator i;  // K_Phi -> K_Psi
};

RNDerivative rn_derivative(const PhiMap& phi, const PhiMap& psi, double tol);
/// Same, with the four dilation data precomputed (m_phi/m_psi built from
/// s_phi/s_psi respectively).
RNDerivative rn_derivative(const ModuleStinespringData& m_phi,
                           const ModuleStinespringData& m_psi, double tol);

/// For equivalent Phi, Psi (equal induced algebra maps): the partial isometry
/// V on F with Phi(x) = V Psi(x), V V* = (W_Phi* W_Phi) and
/// V* V = (W_Psi* W_Psi).
ModuleOperator equivalent_partial_isometry(const PhiMap& phi,
                                           const PhiMap& psi, double tol);

/// Compression of the dilation of Phi to the orthogonal complements of
/// ker(delta1) and ker(delta2): a dilation of a map equivalent to Psi.
struct ReducedStinespring {
  RNDerivative rn;
  ModuleOperator p1;  // projection onto K_phi (-) ker delta1
  ModuleOperator p2;  // projection onto K_Phi (-) ker delta2
  StinespringData base;
  ModuleStinespringData module;
};

ReducedStinespring reduced_stinespring(const PhiMap& phi, const PhiMap& psi,
                                       double tol);

/// Randomized round-trip and monotonicity report for the correspondence
/// between positive commutant contractions and maps below Phi.
struct OrderIsoReport {
  int samples = 0;
  double max_roundtrip_residual = 0.0;
  int order_pairs = 0;
  int order_failures = 0;
  bool ok = false;
};

OrderIsoReport order_iso_check(const PhiMap& phi, int samples, double tol,
                               std::uint64_t seed = 1);

/// True iff the commutant of pi_Phi is one-dimensional (scalars).
bool is_pure(const PhiMap& phi, double tol);
bool is_pure(const ModuleStinespringData& m, double tol);

}  // namespace cpmod
