#include "cpmod/radon_nikodym.hpp"

#include "cpmod/sampling.hpp"

#include <cmath>
#include <sstream>

namespace cpmod {

namespace {

// Shared slack for derived identities: one order looser per composition level
// than the construction tolerance.
double derived(double tol) { return 100.0 * tol; }

}  // namespace

CommutantElement CommutantElement::identity(const ModuleStinespringData& m) {
  return {ModuleOperator::identity(m.base.k_phi),
          ModuleOperator::identity(m.k_big)};
}

CommutantElement CommutantElement::adjoint() const {
  return {t1.adjoint(), t2.adjoint()};
}

CommutantElement& CommutantElement::operator+=(const CommutantElement& o) {
  t1 += o.t1;
  t2 += o.t2;
  return *this;
}

CommutantElement operator*(Complex s, CommutantElement a) {
  a.t1 = s * a.t1;
  a.t2 = s * a.t2;
  return a;
}

CommutantElement operator*(const CommutantElement& a,
                           const CommutantElement& b) {
  return {a.t1 * b.t1, a.t2 * b.t2};
}

double commutant_residual(const ModuleStinespringData& m,
                          const CommutantElement& ce) {
  double r = 0.0;
  for (const ModuleOperator& q : m.pi_on_basis) {
    r = std::max(r, distance(q * ce.t1, ce.t2 * q));
    r = std::max(r, distance(ce.t1 * q.adjoint(), q.adjoint() * ce.t2));
  }
  return r;
}

std::vector<ModuleOperator> algebra_commutant(const Representation& pi,
                                              double tol) {
  std::vector<ModuleOperator> result;
  const int nb = pi.space.num_blocks();
  for (int k = 0; k < nb; ++k) {
    const int r = pi.space.height(k);
    if (r == 0) continue;
    Mat stacked(static_cast<Eigen::Index>(pi.on_basis.size()) * r * r, r * r);
    for (size_t al = 0; al < pi.on_basis.size(); ++al) {
      const Mat& p = pi.on_basis[al].blocks[k];
      stacked.middleRows(static_cast<Eigen::Index>(al) * r * r, r * r) =
          linear_map_matrix(r, r, [&](const Mat& u) { return u * p - p * u; });
    }
    Mat ns = null_space(stacked, tol);
    for (Eigen::Index c = 0; c < ns.cols(); ++c) {
      ModuleOperator t = ModuleOperator::zero(pi.space, pi.space);
      t.blocks[k] = unvec_rm(ns.col(c), r, r);
      result.push_back(std::move(t));
    }
  }
  return result;
}

std::vector<CommutantElement> module_commutant(const ModuleStinespringData& m,
                                               double tol) {
  std::vector<CommutantElement> result;
  const int nb = m.k_big.num_blocks();
  const int ne = static_cast<int>(m.pi_on_basis.size());
  for (int k = 0; k < nb; ++k) {
    const int r = m.base.k_phi.height(k);
    const int rho = m.k_big.height(k);
    if (r == 0 && rho == 0) continue;
    // Unknown vec(T1) (+) vec(T2); two intertwining conditions per basis
    // element of E.
    Mat stacked(2 * static_cast<Eigen::Index>(ne) * rho * r, r * r + rho * rho);
    Eigen::Index row = 0;
    for (int i = 0; i < ne; ++i) {
      const Mat& q = m.pi_on_basis[i].blocks[k];
      stacked.block(row, 0, rho * r, r * r) =
          linear_map_matrix(r, r, [&](const Mat& u) { return q * u; });
      stacked.block(row, r * r, rho * r, rho * rho) =
          linear_map_matrix(rho, rho, [&](const Mat& u) { return -(u * q); });
      row += rho * r;
      stacked.block(row, 0, r * rho, r * r) =
          linear_map_matrix(r, r,
                            [&](const Mat& u) { return u * q.adjoint(); });
      stacked.block(row, r * r, r * rho, rho * rho) =
          linear_map_matrix(rho, rho,
                            [&](const Mat& u) { return -(q.adjoint() * u); });
      row += r * rho;
    }
    Mat ns = null_space(stacked, tol);
    for (Eigen::Index c = 0; c < ns.cols(); ++c) {
      CommutantElement ce{ModuleOperator::zero(m.base.k_phi, m.base.k_phi),
                         ModuleOperator::zero(m.k_big, m.k_big)};
      ce.t1.blocks[k] = unvec_rm(ns.col(c).head(r * r), r, r);
      ce.t2.blocks[k] = unvec_rm(ns.col(c).tail(rho * rho), rho, rho);
      result.push_back(std::move(ce));
    }
  }
  return result;
}

ModuleOperator contraction_J(const CPMap& phi, const CPMap& psi,
                             const StinespringData& s_phi,
                             const StinespringData& s_psi, double tol) {
  if (!psi.same_signature(phi))
    throw Error("contraction_J: signature mismatch");
  if (!cp_order_leq(psi, phi, tol))
    throw Error("contraction_J: psi is not dominated by phi");
  auto abasis = algebra_basis(phi.domain);
  const int na = static_cast<int>(abasis.size());
  ModuleOperator j = ModuleOperator::zero(s_phi.k_phi, s_psi.k_phi);
  for (int k = 0; k < phi.codomain.num_blocks(); ++k) {
    int np = phi.codomain.block_dim(k);
    Mat sources(s_phi.k_phi.height(k), na * np);
    Mat targets(s_psi.k_phi.height(k), na * np);
    for (int al = 0; al < na; ++al) {
      sources.middleCols(al * np, np) =
          s_phi.pi.on_basis[al].blocks[k] * s_phi.xi.blocks[k];
      targets.middleCols(al * np, np) =
          s_psi.pi.on_basis[al].blocks[k] * s_psi.xi.blocks[k];
    }
    j.blocks[k] = solve_left(sources, targets, tol);
    double scale = 1.0 + operator_norm(targets);
    if (operator_norm(j.blocks[k] * sources - targets) > derived(tol) * scale)
      throw Error("contraction_J: Gram domination fails (maps not ordered)");
  }
  return j;
}

CPMap phi_T(const StinespringData& s, const ModuleOperator& t, double tol) {
  if (!t.domain.same_space(s.k_phi) || !t.codomain.same_space(s.k_phi))
    throw Error("phi_T: operator does not act on the dilation space");
  double scale = 1.0 + max_operator_norm(t);
  for (const ModuleOperator& p : s.pi.on_basis)
    if (distance(t * p, p * t) > derived(tol) * scale)
      throw Error("phi_T: operator is not in the commutant");
  auto abasis = algebra_basis(s.phi.domain);
  return CPMap::from_values(
      s.phi.domain, s.phi.codomain, [&](int j, int r, int c) {
        int al = algebra_basis_index(s.phi.domain, j, r, c);
        return inner_product(s.xi, t(s.pi.on_basis[al](s.xi)));
      });
}

ModuleOperator recover_T(const StinespringData& s, const CPMap& psi,
                         double tol) {
  StinespringData s_psi = stinespring(psi, tol);
  ModuleOperator j = contraction_J(s.phi, psi, s, s_psi, tol);
  return j.adjoint() * j;
}

PhiMap phi_TS(const ModuleStinespringData& m, const StinespringData& s,
              const CommutantElement& ts, double tol) {
  if (!s.k_phi.same_space(m.base.k_phi) ||
      distance(s.xi, m.base.xi) > derived(tol))
    throw Error("phi_TS: dilation data mismatch");
  if (!is_positive(ts.t1, tol) || !is_positive(ts.t2, tol))
    throw Error("phi_TS: pair is not positive");
  ModuleOperator sq1 = sqrt_psd(ts.t1, tol);
  ModuleOperator sq2 = sqrt_psd(ts.t2, tol);
  CPMap underlying = phi_T(s, ts.t1 * ts.t1, tol);
  auto ebasis = module_basis(m.map.domain);
  std::vector<ModuleElement> images;
  for (size_t i = 0; i < ebasis.size(); ++i) {
    ModuleElement img = ModuleElement::zero(m.map.codomain);
    for (int k = 0; k < m.k_big.num_blocks(); ++k)
      img.blocks[k] = m.w.blocks[k].adjoint() * sq2.blocks[k] *
                      m.pi_on_basis[i].blocks[k] * sq1.blocks[k] *
                      s.xi.blocks[k];
    images.push_back(std::move(img));
  }
  return PhiMap::from_images(m.map.domain, m.map.codomain, images, underlying);
}

RNDerivative rn_derivative(const ModuleStinespringData& m_phi,
                           const ModuleStinespringData& m_psi, double tol) {
  const PhiMap& phi = m_phi.map;
  const PhiMap& psi = m_psi.map;
  if (!phi.domain.same_space(psi.domain) ||
      !phi.codomain.same_space(psi.codomain))
    throw Error("rn_derivative: shape mismatch");
  if (!cp_order_leq(psi.underlying, phi.underlying, tol))
    throw Error("rn_derivative: underlying maps are not ordered");

  RNDerivative rn{{}, {}, {}};
  rn.j = contraction_J(phi.underlying, psi.underlying, m_phi.base, m_psi.base,
                       tol);

  auto ebasis = module_basis(phi.domain);
  const int ne = static_cast<int>(ebasis.size());
  rn.i = ModuleOperator::zero(m_phi.k_big, m_psi.k_big);
  for (int k = 0; k < m_phi.k_big.num_blocks(); ++k) {
    int np = phi.codomain.width(k);
    Mat sources(m_phi.k_big.height(k), ne * np);
    Mat targets(m_psi.k_big.height(k), ne * np);
    for (int i = 0; i < ne; ++i) {
      sources.middleCols(i * np, np) =
          m_phi.pi_on_basis[i].blocks[k] * m_phi.base.xi.blocks[k];
      targets.middleCols(i * np, np) =
          m_psi.pi_on_basis[i].blocks[k] * m_psi.base.xi.blocks[k];
    }
    rn.i.blocks[k] = solve_left(sources, targets, tol);
    double scale = 1.0 + operator_norm(targets);
    double resid = operator_norm(rn.i.blocks[k] * sources - targets);
    if (resid > derived(tol) * scale) {
      std::ostringstream msg;
      msg << "rn_derivative: intertwiner solve residual " << resid
          << " exceeds tolerance";
      throw Error(msg.str());
    }
  }

  rn.delta = CommutantElement{rn.j.adjoint() * rn.j, rn.i.adjoint() * rn.i};
  double resid = commutant_residual(m_phi, rn.delta);
  if (resid > derived(tol) *
                  (1.0 + max_operator_norm(rn.delta.t1) +
                   max_operator_norm(rn.delta.t2))) {
    std::ostringstream msg;
    msg << "rn_derivative: derivative misses the commutant, residual "
        << resid;
    throw Error(msg.str());
  }
  if (max_operator_norm(rn.delta.t1) > 1.0 + derived(tol) ||
      max_operator_norm(rn.delta.t2) > 1.0 + derived(tol))
    throw Error("rn_derivative: derivative is not a contraction");

  CommutantElement root{sqrt_psd(rn.delta.t1, tol), sqrt_psd(rn.delta.t2, tol)};
  PhiMap rebuilt = phi_TS(m_phi, m_phi.base, root, tol);
  if (!equivalence_check(psi, rebuilt, derived(tol)))
    throw Error("rn_derivative: derivative does not reproduce the map");
  return rn;
}

RNDerivative rn_derivative(const PhiMap& phi, const PhiMap& psi, double tol) {
  StinespringData s_phi = stinespring(phi.underlying, tol);
  StinespringData s_psi = stinespring(psi.underlying, tol);
  ModuleStinespringData m_phi = module_stinespring(phi, s_phi, tol);
  ModuleStinespringData m_psi = module_stinespring(psi, s_psi, tol);
  return rn_derivative(m_phi, m_psi, tol);
}

ModuleOperator equivalent_partial_isometry(const PhiMap& phi,
                                           const PhiMap& psi, double tol) {
  if (!equivalence_check(phi, psi, derived(tol)))
    throw Error("equivalent_partial_isometry: maps are not equivalent");
  // One shared algebra-level dilation: the tensor spaces of Phi and Psi then
  // coincide and U1 is the identity.
  StinespringData s = stinespring(phi.underlying, tol);
  ModuleStinespringData mp = module_stinespring(phi, s, tol);
  ModuleStinespringData mq = module_stinespring(psi, s, tol);
  if (mp.k_big.heights != mq.k_big.heights)
    throw Error("equivalent_partial_isometry: dilation dimension mismatch");

  auto ebasis = module_basis(phi.domain);
  const int ne = static_cast<int>(ebasis.size());
  ModuleOperator u2 = ModuleOperator::zero(mp.k_big, mq.k_big);
  for (int k = 0; k < mp.k_big.num_blocks(); ++k) {
    int np = phi.codomain.width(k);
    int rho = mp.k_big.height(k);
    Mat sources(rho, ne * np), targets(rho, ne * np);
    for (int i = 0; i < ne; ++i) {
      sources.middleCols(i * np, np) =
          mp.pi_on_basis[i].blocks[k] * s.xi.blocks[k];
      targets.middleCols(i * np, np) =
          mq.pi_on_basis[i].blocks[k] * s.xi.blocks[k];
    }
    u2.blocks[k] = solve_left(sources, targets, tol);
    Mat eye = Mat::Identity(rho, rho);
    if (operator_norm(u2.blocks[k].adjoint() * u2.blocks[k] - eye) >
            derived(tol) ||
        operator_norm(u2.blocks[k] * u2.blocks[k].adjoint() - eye) >
            derived(tol))
      throw Error("equivalent_partial_isometry: intertwining unitary failed");
  }

  ModuleOperator v = mp.w.adjoint() * u2.adjoint() * mq.w;

  double scale = 1.0 + max_operator_norm(v);
  if (!is_partial_isometry(v, derived(tol)))
    throw Error("equivalent_partial_isometry: result is not a partial "
                "isometry");
  if (distance(v * v.adjoint(), mp.w.adjoint() * mp.w) >
          derived(tol) * scale ||
      distance(v.adjoint() * v, mq.w.adjoint() * mq.w) > derived(tol) * scale)
    throw Error("equivalent_partial_isometry: range/support identity failed");
  for (int i = 0; i < ne; ++i)
    if (distance(phi(ebasis[i]), v(psi(ebasis[i]))) > derived(tol) * scale)
      throw Error("equivalent_partial_isometry: Phi = V Psi failed");
  if (distance(mp.w, u2.adjoint() * mq.w * v.adjoint()) >
      derived(tol) * scale)
    throw Error("equivalent_partial_isometry: W recovery identity failed");
  return v;
}

ReducedStinespring reduced_stinespring(const PhiMap& phi, const PhiMap& psi,
                                       double tol) {
  StinespringData s = stinespring(phi.underlying, tol);
  StinespringData s_psi = stinespring(psi.underlying, tol);
  ModuleStinespringData mp = module_stinespring(phi, s, tol);
  ModuleStinespringData mq = module_stinespring(psi, s_psi, tol);
  ReducedStinespring red{rn_derivative(mp, mq, tol), {}, {}, {}, {}};
  const CommutantElement& delta = red.rn.delta;

  const int nb = mp.k_big.num_blocks();
  std::vector<Mat> b1(nb), b2(nb);
  red.p1 = ModuleOperator::zero(s.k_phi, s.k_phi);
  red.p2 = ModuleOperator::zero(mp.k_big, mp.k_big);
  std::vector<int> h1(nb), h2(nb);
  for (int k = 0; k < nb; ++k) {
    b1[k] = range_basis(delta.t1.blocks[k], tol);
    b2[k] = range_basis(delta.t2.blocks[k], tol);
    red.p1.blocks[k] = b1[k] * b1[k].adjoint();
    red.p2.blocks[k] = b2[k] * b2[k].adjoint();
    h1[k] = static_cast<int>(b1[k].cols());
    h2[k] = static_cast<int>(b2[k].cols());
  }

  // Both the range and the kernel projections must intertwine.
  CommutantElement proj{red.p1, red.p2};
  CommutantElement kerproj{
      ModuleOperator::identity(s.k_phi) - red.p1,
      ModuleOperator::identity(mp.k_big) - red.p2};
  if (commutant_residual(mp, proj) > derived(tol) ||
      commutant_residual(mp, kerproj) > derived(tol))
    throw Error("reduced_stinespring: projections miss the commutant");

  // Compressed algebra-level dilation: a Stinespring construction for the
  // map a -> <xi, delta1 pi(a) xi>.
  red.base.phi = phi_T(s, delta.t1, tol);
  red.base.d = s.d;
  red.base.k_phi = ModuleShape{s.phi.codomain, h1, std::nullopt};
  red.base.pi.algebra = s.pi.algebra;
  red.base.pi.space = red.base.k_phi;
  ModuleOperator sq1 = sqrt_psd(delta.t1, tol);
  for (size_t al = 0; al < s.pi.on_basis.size(); ++al) {
    ModuleOperator op = ModuleOperator::zero(red.base.k_phi, red.base.k_phi);
    for (int k = 0; k < nb; ++k)
      op.blocks[k] =
          b1[k].adjoint() * s.pi.on_basis[al].blocks[k] * b1[k];
    red.base.pi.on_basis.push_back(std::move(op));
  }
  red.base.v = ModuleOperator::zero(red.base.d, red.base.k_phi);
  for (int k = 0; k < nb; ++k)
    red.base.v.blocks[k] = b1[k].adjoint() * sq1.blocks[k] * s.xi.blocks[k];
  red.base.xi = ModuleElement{red.base.k_phi, red.base.v.blocks};

  // Compressed module-level dilation of the representative Phi_{sqrt(delta)}.
  CommutantElement root{sq1, sqrt_psd(delta.t2, tol)};
  red.module.map = phi_TS(mp, s, root, tol);
  red.module.base = red.base;
  red.module.k_big = ModuleShape{s.phi.codomain, h2, std::nullopt};
  for (size_t i = 0; i < mp.pi_on_basis.size(); ++i) {
    ModuleOperator op =
        ModuleOperator::zero(red.base.k_phi, red.module.k_big);
    for (int k = 0; k < nb; ++k)
      op.blocks[k] =
          b2[k].adjoint() * mp.pi_on_basis[i].blocks[k] * b1[k];
    red.module.pi_on_basis.push_back(std::move(op));
  }
  red.module.w = ModuleOperator::zero(phi.codomain, red.module.k_big);
  for (int k = 0; k < nb; ++k)
    red.module.w.blocks[k] = b2[k].adjoint() * mp.w.blocks[k];

  for (int k = 0; k < nb; ++k) {
    Mat eye = Mat::Identity(h2[k], h2[k]);
    if (operator_norm(red.module.w.blocks[k] *
                          red.module.w.blocks[k].adjoint() -
                      eye) > derived(tol))
      throw Error("reduced_stinespring: compressed coisometry failed");
  }
  if (!minimality_check(red.module, tol))
    throw Error("reduced_stinespring: compressed construction not minimal");
  return red;
}

OrderIsoReport order_iso_check(const PhiMap& phi, int samples, double tol,
                               std::uint64_t seed) {
  OrderIsoReport rep;
  rep.samples = samples;
  StinespringData s = stinespring(phi.underlying, tol);
  ModuleStinespringData m = module_stinespring(phi, s, tol);
  auto basis = module_commutant(m, tol);
  Rng rng(seed);

  auto derivative_of = [&](const CommutantElement& ts) {
    CommutantElement root{sqrt_psd(ts.t1, tol), sqrt_psd(ts.t2, tol)};
    PhiMap below = phi_TS(m, s, root, tol);
    StinespringData s2 = stinespring(below.underlying, tol);
    ModuleStinespringData m2 = module_stinespring(below, s2, tol);
    return rn_derivative(m, m2, tol).delta;
  };

  for (int it = 0; it < samples; ++it) {
    CommutantElement lo = random_positive_contraction(rng, basis, tol);
    CommutantElement hi = random_dominating_contraction(rng, basis, lo, tol);
    CommutantElement dlo = derivative_of(lo);
    CommutantElement dhi = derivative_of(hi);
    rep.max_roundtrip_residual = std::max(
        {rep.max_roundtrip_residual, distance(dlo.t1, lo.t1),
         distance(dlo.t2, lo.t2), distance(dhi.t1, hi.t1),
         distance(dhi.t2, hi.t2)});
    ++rep.order_pairs;
    bool images_ordered =
        is_positive(dhi.t1 - dlo.t1, derived(tol)) &&
        is_positive(dhi.t2 - dlo.t2, derived(tol));
    bool maps_ordered = cp_order_leq(phi_T(s, lo.t1, tol),
                                     phi_T(s, hi.t1, tol), derived(tol));
    if (!images_ordered || !maps_ordered) ++rep.order_failures;
  }
  rep.ok = rep.order_failures == 0 &&
           rep.max_roundtrip_residual <= derived(tol);
  return rep;
}

bool is_pure(const ModuleStinespringData& m, double tol) {
  return module_commutant(m, tol).size() == 1;
}

bool is_pure(const PhiMap& phi, double tol) {
  if (operator_norm(phi.matrix) <= tol)
    throw Error("is_pure: zero map");
  StinespringData s = stinespring(phi.underlying, tol);
  ModuleStinespringData m = module_stinespring(phi, s, tol);
  return is_pure(m, tol);
}

}  // namespace cpmod
