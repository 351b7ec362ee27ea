#pragma once

#include "cpmod/cp_maps.hpp"

namespace cpmod {

/// A representation of a block algebra on a module, stored through the images
/// of the matrix units and extended linearly.
struct Representation {
  BlockAlgebra algebra;
  ModuleShape space;
  std::vector<ModuleOperator> on_basis;

  ModuleOperator operator()(const AlgebraElement& a) const;
};

/// GNS data for a CP map phi: A -> B. The space is the quotient of A (x) B
/// under <a(x)b, a'(x)b'> = b* phi(a* a') b', realized per codomain block as
/// rectangular matrices; pi acts by a (class of a'(x)b) = class(a a'(x)b) and
/// xi is the class of 1_A (x) 1_B, so phi(a) = <xi, pi(a) xi>.
struct GNSData {
  CPMap phi;
  ModuleShape space;
  Representation pi;
  ModuleElement xi;
};

GNSData paschke_gns(const CPMap& phi, double tol);

/// Minimal Stinespring dilation phi(a) I_D = V* pi(a) V with D the codomain
/// algebra viewed as a module over itself and V(b) = xi . b.
struct StinespringData {
  CPMap phi;
  ModuleShape d;
  ModuleShape k_phi;
  Representation pi;
  ModuleOperator v;   // d -> k_phi
  ModuleElement xi;   // = v(1)
};

StinespringData stinespring(const CPMap& phi, double tol);

/// Quotient of E (x) K_phi under <x(x)k, y(x)k'> = <k, pi(<x,y>) k'>, with
/// the operators class(x_i (x) .): K_phi -> k_big for the basis of E. Depends
/// only on E and the algebra-level dilation, not on any particular module map.
struct TensorDilation {
  ModuleShape k_big;
  std::vector<ModuleOperator> pi_on_basis;
};

TensorDilation tensor_dilation(const ModuleShape& e, const StinespringData& s,
                               double tol);

/// Module-level dilation of a phi-map Phi: E -> F. k_big is the quotient of
/// E (x) K_phi under <x(x)k, y(x)k'> = <k, pi(<x,y>) k'>; pi_on_basis holds
/// the operators pi_Phi(x_i): K_phi -> k_big for the basis of E, and w is the
/// coisometry F -> k_big with Phi(x) = w* pi_Phi(x) xi.
struct ModuleStinespringData {
  PhiMap map;
  StinespringData base;
  ModuleShape k_big;
  std::vector<ModuleOperator> pi_on_basis;
  ModuleOperator w;   // F -> k_big, w w* = I

  /// pi_Phi(x), extended linearly from the basis images.
  ModuleOperator pi(const ModuleElement& x) const;
};

/// Requires s to be Stinespring data for map.underlying (checked).
ModuleStinespringData module_stinespring(const PhiMap& map,
                                         const StinespringData& s, double tol);

/// True iff the span of {pi(algebra basis) V(module basis of D)} fills the
/// dilation space (rank check), respectively {pi_Phi(basis of E) V(...)}.
bool minimality_check(const StinespringData& s, double tol);
bool minimality_check(const ModuleStinespringData& m, double tol);

}  // namespace cpmod
