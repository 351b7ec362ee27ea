#include "cpmod/verify.hpp"

#include "cpmod/radon_nikodym.hpp"
#include "cpmod/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace cpmod {

namespace {

using Clock = std::chrono::steady_clock;

double phi_map_residual(const PhiMap& p) {
  auto basis = module_basis(p.domain);
  double r = 0.0;
  for (size_t i = 0; i < basis.size(); ++i) {
    ModuleElement pi = p(basis[i]);
    for (size_t j = 0; j < basis.size(); ++j)
      r = std::max(r, distance(inner_product(pi, p(basis[j])),
                               p.underlying(inner_product(basis[i], basis[j]))));
  }
  return r;
}

double partial_isometry_residual(const ModuleOperator& v) {
  double r = 0.0;
  for (const Mat& b : v.blocks)
    r = std::max(r, operator_norm(b * b.adjoint() * b - b));
  return r;
}

double equivalence_residual(const PhiMap& a, const PhiMap& b, double tol) {
  return choi_distance(induced_phi(a.matrix, a.domain, a.codomain, tol),
                       induced_phi(b.matrix, b.domain, b.codomain, tol));
}

BlockAlgebra random_small_algebra(Rng& rng, int max_blocks, int max_dim) {
  int nb = 1 + static_cast<int>(rng.uniform() * max_blocks) % max_blocks;
  std::vector<int> dims;
  for (int i = 0; i < nb; ++i)
    dims.push_back(1 + static_cast<int>(rng.uniform() * max_dim) % max_dim);
  return BlockAlgebra{dims};
}

PhiMap random_phi_map_auto(Rng& rng, const ModuleShape& e, const CPMap& phi,
                           double tol) {
  StinespringData s = stinespring(phi, tol);
  TensorDilation td = tensor_dilation(e, s, tol);
  ModuleShape f{phi.codomain, td.k_big.heights, std::nullopt};
  return random_phi_map(rng, e, f, phi, tol);
}

// The two worked-example regressions share one residual suite.
struct ExampleResiduals {
  double map_identities;
  double equivalence;
  double bundled_v;
  double constructed_v;
};

ExampleResiduals example_suite(const InstanceFile& inst, double tol,
                               std::string* detail) {
  CPMap phi = inst.cp_map("phi");
  PhiMap big = inst.phi_map("Phi");
  PhiMap other = inst.phi_map("Psi");
  ExampleResiduals out{};
  out.map_identities =
      std::max(phi_map_residual(big), phi_map_residual(other));
  out.equivalence = equivalence_residual(big, other, tol);

  StinespringData s = stinespring(phi, tol);
  ModuleStinespringData mp = module_stinespring(big, s, tol);
  ModuleStinespringData mq = module_stinespring(other, s, tol);
  auto ebasis = module_basis(big.domain);
  auto suite = [&](const ModuleOperator& v) {
    double r = partial_isometry_residual(v);
    r = std::max(r, distance(v * v.adjoint(), mp.w.adjoint() * mp.w));
    r = std::max(r, distance(v.adjoint() * v, mq.w.adjoint() * mq.w));
    for (const auto& x : ebasis)
      r = std::max(r, distance(big(x), v(other(x))));
    return r;
  };
  out.bundled_v = suite(inst.module_operator("V"));
  out.constructed_v = suite(equivalent_partial_isometry(big, other, tol));
  if (detail) {
    std::ostringstream os;
    os << "map identities " << out.map_identities << ", equivalence "
       << out.equivalence << ", bundled V " << out.bundled_v
       << ", constructed V " << out.constructed_v;
    *detail = os.str();
  }
  return out;
}

CheckResult check_example_a(std::uint64_t, int, double tol) {
  CheckResult c{"example-a-regression",
                "five-row worked example: module map identities, equivalence, "
                "and both linking operators",
                0.0, false, 0.0, ""};
  ExampleResiduals r =
      example_suite(builtin_fixture("example_3_4"), tol, &c.detail);
  c.max_residual = std::max({r.map_identities, r.equivalence, r.bundled_v,
                             r.constructed_v});
  c.passed = c.max_residual <= 1e-10;
  return c;
}

CheckResult check_example_b(std::uint64_t, int, double tol) {
  CheckResult c{"example-b-regression",
                "four-row worked example: same suite plus the unit image and "
                "Choi spectrum of the underlying map",
                0.0, false, 0.0, ""};
  InstanceFile inst = builtin_fixture("example_3_5");
  ExampleResiduals r = example_suite(inst, tol, &c.detail);
  c.max_residual = std::max({r.map_identities, r.equivalence, r.bundled_v,
                             r.constructed_v});

  CPMap phi = inst.cp_map("phi");
  AlgebraElement unit_img = phi(AlgebraElement::identity(phi.domain));
  Mat expected = 3.0 * Mat::Identity(2, 2);
  c.max_residual =
      std::max(c.max_residual, operator_norm(unit_img.blocks[0] - expected));

  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(phi.choi[0][0]));
  Eigen::Vector4d want(0.0, 0.0, 2.0, 4.0);
  c.max_residual = std::max(
      c.max_residual, (es.eigenvalues() - want).cwiseAbs().maxCoeff());
  c.passed = c.max_residual <= 1e-10;
  return c;
}

CheckResult check_order_roundtrip(std::uint64_t seed, int samples,
                                  double tol) {
  CheckResult c{"order-isomorphism-roundtrip",
                "round trip between commutant contractions and dominated "
                "maps, with affinity and injectivity",
                0.0, false, 0.0, ""};
  Rng rng(seed * 10 + 3);
  double affinity = 0.0;
  int injectivity_failures = 0;
  for (int it = 0; it < samples; ++it) {
    BlockAlgebra dom = random_small_algebra(rng, 2, 3);
    BlockAlgebra cod = random_small_algebra(rng, 2, 3);
    CPMap phi = random_cp_map(rng, dom, cod);
    StinespringData s = stinespring(phi, tol);
    auto basis = algebra_commutant(s.pi, tol);
    ModuleOperator t = random_positive_contraction(rng, basis, tol);
    ModuleOperator u = random_positive_contraction(rng, basis, tol);

    CPMap below = phi_T(s, t, tol);
    ModuleOperator back = recover_T(s, below, tol);
    c.max_residual = std::max(c.max_residual, distance(t, back));

    double lam = rng.uniform();
    CPMap mix = phi_T(
        s, Complex(lam, 0.0) * t + Complex(1.0 - lam, 0.0) * u, tol);
    affinity = std::max(
        affinity,
        choi_distance(mix, lam * phi_T(s, t, tol) +
                               (1.0 - lam) * phi_T(s, u, tol)));
    if (distance(t, u) >= 1e-3 &&
        choi_distance(phi_T(s, t, tol), phi_T(s, u, tol)) <= 1e-6)
      ++injectivity_failures;
  }
  std::ostringstream os;
  os << "roundtrip " << c.max_residual << ", affinity " << affinity
     << ", injectivity failures " << injectivity_failures;
  c.detail = os.str();
  c.passed = c.max_residual <= 1e-8 && affinity <= 1e-10 &&
             injectivity_failures == 0;
  c.max_residual = std::max(c.max_residual, affinity);
  return c;
}

CheckResult check_rn_roundtrip(std::uint64_t seed, int samples, double tol) {
  CheckResult c{"rn-derivative-roundtrip",
                "derivative of a dominated module map: commutant membership, "
                "contraction bound, equivalence, uniqueness",
                0.0, false, 0.0, ""};
  Rng rng(seed * 10 + 4);
  double norm_excess = 0.0;
  for (int it = 0; it < samples; ++it) {
    BlockAlgebra dom{{2}};
    BlockAlgebra cod = (it % 2 == 0) ? BlockAlgebra{{2}}
                                     : BlockAlgebra{{2, 1}};
    CPMap phi = random_cp_map(rng, dom, cod);
    ModuleShape e{dom, {2}, std::nullopt};
    PhiMap big = random_phi_map_auto(rng, e, phi, tol);
    StinespringData s = stinespring(phi, tol);
    ModuleStinespringData mp = module_stinespring(big, s, tol);
    auto cbasis = module_commutant(mp, tol);
    CommutantElement ts = random_positive_contraction(rng, cbasis, tol);
    // The construction applies componentwise square roots internally, so
    // feeding it sqrt(ts) yields a map whose derivative is ts itself.
    CommutantElement root{sqrt_psd(ts.t1, tol), sqrt_psd(ts.t2, tol)};
    PhiMap below = phi_TS(mp, s, root, tol);
    StinespringData s2 = stinespring(below.underlying, tol);
    ModuleStinespringData mq = module_stinespring(below, s2, tol);
    RNDerivative rn = rn_derivative(mp, mq, tol);

    c.max_residual = std::max(
        {c.max_residual, commutant_residual(mp, rn.delta),
         distance(rn.delta.t1, ts.t1), distance(rn.delta.t2, ts.t2)});
    norm_excess = std::max(
        {norm_excess, max_operator_norm(rn.delta.t1) - 1.0,
         max_operator_norm(rn.delta.t2) - 1.0});
    CommutantElement droot{sqrt_psd(rn.delta.t1, tol),
                           sqrt_psd(rn.delta.t2, tol)};
    c.max_residual = std::max(
        c.max_residual,
        equivalence_residual(below, phi_TS(mp, s, droot, tol), tol));
  }
  std::ostringstream os;
  os << "norm excess " << norm_excess;
  c.detail = os.str();
  c.passed = c.max_residual <= 1e-8 && norm_excess <= 1e-9;
  return c;
}

CheckResult check_dilation(std::uint64_t seed, int samples, double tol) {
  CheckResult c{"dilation-reconstruction",
                "algebra- and module-level dilations reproduce their maps, "
                "are minimal, and end in a coisometry",
                0.0, false, 0.0, ""};
  Rng rng(seed * 10 + 5);
  bool minimal = true;
  for (int it = 0; it < samples; ++it) {
    BlockAlgebra dom = random_small_algebra(rng, 2, 3);
    BlockAlgebra cod = random_small_algebra(rng, 2, 3);
    CPMap phi = random_cp_map(rng, dom, cod);
    StinespringData s = stinespring(phi, tol);
    for (const AlgebraElement& a : algebra_basis(dom)) {
      ModuleOperator rec = s.v.adjoint() * s.pi(a) * s.v;
      AlgebraElement img = phi(a);
      for (int k = 0; k < cod.num_blocks(); ++k)
        c.max_residual = std::max(
            c.max_residual, operator_norm(rec.blocks[k] - img.blocks[k]));
    }
    minimal = minimal && minimality_check(s, tol);

    std::vector<int> heights;
    for (int n : dom.block_dims)
      heights.push_back(n * (1 + static_cast<int>(rng.uniform() * 2) % 2));
    ModuleShape e{dom, heights, std::nullopt};
    PhiMap big = random_phi_map_auto(rng, e, phi, tol);
    ModuleStinespringData mp = module_stinespring(big, s, tol);
    for (const ModuleElement& x : module_basis(e)) {
      ModuleElement rec = (mp.w.adjoint() * mp.pi(x))(mp.base.xi);
      c.max_residual = std::max(c.max_residual, distance(big(x), rec));
    }
    minimal = minimal && minimality_check(mp, tol);
    for (int k = 0; k < mp.k_big.num_blocks(); ++k) {
      int rho = mp.k_big.height(k);
      c.max_residual = std::max(
          c.max_residual,
          operator_norm(mp.w.blocks[k] * mp.w.blocks[k].adjoint() -
                        Mat::Identity(rho, rho)));
    }
  }
  if (!minimal) c.detail = "minimality check failed";
  c.passed = c.max_residual <= 1e-10 && minimal;
  return c;
}

bool operational_cp(const CPMap& m, Rng& rng, double tol) {
  const BlockAlgebra& a = m.domain;
  auto gram_of = [&](const std::vector<AlgebraElement>& tuple) {
    int n = static_cast<int>(tuple.size());
    ElementMatrix p = ElementMatrix::zero(n, m.codomain);
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        p.at(i, l) = m(tuple[i].adjoint() * tuple[l]);
    return p;
  };
  for (int j = 0; j < a.num_blocks(); ++j) {
    // Canonical tuple of first-row units: its Gram under the map is exactly
    // the Choi block of this domain block.
    std::vector<AlgebraElement> tuple;
    for (int i = 0; i < a.block_dim(j); ++i) {
      AlgebraElement u = AlgebraElement::zero(a);
      u.blocks[j](0, i) = 1.0;
      tuple.push_back(std::move(u));
    }
    if (!is_positive(gram_of(tuple), tol)) return false;
  }
  for (int t = 0; t < 2; ++t) {
    std::vector<AlgebraElement> tuple{random_element(rng, a),
                                      random_element(rng, a)};
    if (!is_positive(gram_of(tuple), tol)) return false;
  }
  return true;
}

CheckResult check_cp_oracle(std::uint64_t seed, int samples, double tol) {
  CheckResult c{"choi-vs-operational-cp",
                "blockwise Choi positivity agrees with the operational "
                "positivity oracle on CP and non-CP samples",
                0.0, false, 0.0, ""};
  Rng rng(seed * 10 + 6);
  int disagreements = 0;
  for (int it = 0; it < samples; ++it) {
    BlockAlgebra dom = random_small_algebra(rng, 2, 3);
    BlockAlgebra cod = random_small_algebra(rng, 2, 3);
    CPMap good = random_cp_map(rng, dom, cod);
    CPMap bad = random_non_cp_map(rng, dom, cod);
    if (is_completely_positive(good, tol) != operational_cp(good, rng, tol))
      ++disagreements;
    if (is_completely_positive(bad, tol) != operational_cp(bad, rng, tol))
      ++disagreements;
  }
  std::ostringstream os;
  os << disagreements << " disagreements over " << 2 * samples << " maps";
  c.detail = os.str();
  c.passed = disagreements == 0;
  c.max_residual = disagreements;
  return c;
}

CheckResult check_decomposition(std::uint64_t seed, int samples, double tol) {
  CheckResult c{"positive-decomposition",
                "positive matrices over the algebra split into Gram tuples "
                "that reconstruct the input",
                0.0, false, 0.0, ""};
  Rng rng(seed * 10 + 7);
  for (int it = 0; it < samples; ++it) {
    BlockAlgebra alg = random_small_algebra(rng, 2, 3);
    int n = 1 + it % 4;
    std::vector<std::vector<AlgebraElement>> tuples;
    for (int t = 0; t < n; ++t) {
      std::vector<AlgebraElement> tuple;
      for (int i = 0; i < n; ++i) tuple.push_back(random_element(rng, alg));
      tuples.push_back(std::move(tuple));
    }
    ElementMatrix p = gram_sum(alg, tuples);
    ElementMatrix rebuilt = gram_sum(alg, positive_decomposition(p, tol));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        c.max_residual =
            std::max(c.max_residual, distance(p.at(i, l), rebuilt.at(i, l)));
  }
  c.passed = c.max_residual <= 1e-10;
  return c;
}

// A projection pair inside the commutant with a kernel: spectral step
// function of a random Hermitian commutant element, with one seminorm block
// zeroed if the split happens to keep full rank.
CommutantElement rank_deficient_projection(
    Rng& rng, const std::vector<CommutantElement>& basis,
    const ModuleStinespringData& m) {
  CommutantElement h{ModuleOperator::zero(m.base.k_phi, m.base.k_phi),
                     ModuleOperator::zero(m.k_big, m.k_big)};
  for (const CommutantElement& e : basis) h += rng.cgauss() * e;
  h += h.adjoint();

  double lo = 1e300, hi = -1e300;
  auto scan = [&](const ModuleOperator& t) {
    for (const Mat& b : t.blocks) {
      if (b.rows() == 0) continue;
      Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(b),
                                            Eigen::EigenvaluesOnly);
      lo = std::min(lo, es.eigenvalues().minCoeff());
      hi = std::max(hi, es.eigenvalues().maxCoeff());
    }
  };
  scan(h.t1);
  scan(h.t2);
  double theta = 0.5 * (lo + hi);

  auto step = [&](const ModuleOperator& t) {
    ModuleOperator p = ModuleOperator::zero(t.domain, t.domain);
    for (size_t k = 0; k < t.blocks.size(); ++k) {
      if (t.blocks[k].rows() == 0) continue;
      Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(t.blocks[k]));
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > theta)
          p.blocks[k] += es.eigenvectors().col(i) *
                         es.eigenvectors().col(i).adjoint();
    }
    return p;
  };
  CommutantElement p{step(h.t1), step(h.t2)};

  bool deficient = false;
  for (size_t k = 0; k < p.t1.blocks.size(); ++k)
    if (numerical_rank(p.t1.blocks[k], kDefaultTol) <
        p.t1.blocks[k].rows())
      deficient = true;
  if (!deficient && p.t1.blocks.size() > 1) {
    p.t1.blocks[0].setZero();
    p.t2.blocks[0].setZero();
  }
  return p;
}

CheckResult check_reduced(std::uint64_t seed, int samples, double tol) {
  CheckResult c{"reduced-construction",
                "rank-deficient derivative: the compressed dilation stays "
                "minimal, coisometric, and reproduces the dominated map",
                0.0, false, 0.0, ""};
  Rng rng(seed * 10 + 8);
  int iterations = std::min(samples, 20);
  int not_deficient = 0;
  for (int it = 0; it < iterations; ++it) {
    BlockAlgebra dom{{2}};
    BlockAlgebra cod{{2, 2}};
    CPMap phi = random_cp_map(rng, dom, cod);
    ModuleShape e{dom, {2}, std::nullopt};
    PhiMap big = random_phi_map_auto(rng, e, phi, tol);
    StinespringData s = stinespring(phi, tol);
    ModuleStinespringData mp = module_stinespring(big, s, tol);
    auto cbasis = module_commutant(mp, tol);
    CommutantElement proj = rank_deficient_projection(rng, cbasis, mp);
    PhiMap below = phi_TS(mp, s, proj, tol);  // sqrt of a projection is itself
    ReducedStinespring red = reduced_stinespring(big, below, tol);

    if (red.base.k_phi.dim() >= s.k_phi.dim() &&
        red.module.k_big.dim() >= mp.k_big.dim())
      ++not_deficient;
    c.max_residual = std::max(
        c.max_residual, equivalence_residual(red.module.map, below, tol));
    for (int k = 0; k < s.k_phi.num_blocks(); ++k)
      c.max_residual = std::max(
          c.max_residual,
          operator_norm(red.p1.blocks[k] -
                        range_projector(
                            red.rn.delta.t1.blocks[k].adjoint(), tol)));
  }
  std::ostringstream os;
  os << not_deficient << " of " << iterations
     << " instances were not rank-deficient";
  c.detail = os.str();
  c.passed = c.max_residual <= 1e-8 && not_deficient == 0;
  return c;
}

CheckResult check_purity(std::uint64_t seed, int samples, double tol) {
  CheckResult c{"purity",
                "trivial-commutant detection and scalar derivatives below a "
                "pure map",
                0.0, false, 0.0, ""};
  Rng rng(seed * 10 + 9);

  BlockAlgebra alg{{2}};
  CPMap id = CPMap::identity(alg);
  ModuleShape e{alg, {2}, std::nullopt};
  PhiMap pure_map{e, e, Mat::Identity(e.dim(), e.dim()), id};
  bool pure_ok = is_pure(pure_map, tol);

  BlockAlgebra doubled_cod{{2, 2}};
  CPMap doubled = CPMap::from_linear(
      alg, doubled_cod, [&](const AlgebraElement& a) {
        AlgebraElement out = AlgebraElement::zero(doubled_cod);
        out.blocks[0] = a.blocks[0];
        out.blocks[1] = a.blocks[0];
        return out;
      });
  PhiMap doubled_map = random_phi_map_auto(rng, e, doubled, tol);
  bool doubled_ok = !is_pure(doubled_map, tol);

  // Below a pure map every derivative is a scalar multiple of the identity.
  StinespringData s = stinespring(id, tol);
  ModuleStinespringData mp = module_stinespring(pure_map, s, tol);
  auto cbasis = module_commutant(mp, tol);
  double lambda_excess = 0.0;
  int rounds = std::min(samples, 10);
  for (int it = 0; it < rounds; ++it) {
    CommutantElement ts = random_positive_contraction(rng, cbasis, tol);
    PhiMap below = phi_TS(mp, s, ts, tol);
    StinespringData s2 = stinespring(below.underlying, tol);
    ModuleStinespringData mq = module_stinespring(below, s2, tol);
    RNDerivative rn = rn_derivative(mp, mq, tol);
    double lambda =
        rn.delta.t1.blocks[0].trace().real() / rn.delta.t1.blocks[0].rows();
    c.max_residual = std::max(
        {c.max_residual,
         distance(rn.delta.t1,
                  Complex(lambda, 0.0) *
                      ModuleOperator::identity(mp.base.k_phi)),
         distance(rn.delta.t2, Complex(lambda, 0.0) *
                                   ModuleOperator::identity(mp.k_big))});
    lambda_excess =
        std::max({lambda_excess, -lambda, lambda - 1.0});
  }
  std::ostringstream os;
  os << "pure verdict " << pure_ok << ", doubled verdict " << doubled_ok
     << ", lambda excess " << lambda_excess;
  c.detail = os.str();
  c.passed = pure_ok && doubled_ok && c.max_residual <= 1e-8 &&
             lambda_excess <= 1e-8;
  return c;
}

CheckResult check_preorder(std::uint64_t seed, int samples, double tol) {
  CheckResult c{"preorder-sanity",
                "reflexivity, transitivity, and antisymmetry up to "
                "equivalence of the CP order",
                0.0, false, 0.0, ""};
  Rng rng(seed * 10 + 10);
  int failures = 0;
  for (int it = 0; it < samples; ++it) {
    BlockAlgebra dom = random_small_algebra(rng, 2, 2);
    BlockAlgebra cod = random_small_algebra(rng, 2, 2);
    CPMap top = random_cp_map(rng, dom, cod);
    StinespringData s = stinespring(top, tol);
    auto basis = algebra_commutant(s.pi, tol);
    ModuleOperator t1 = random_positive_contraction(rng, basis, tol);
    ModuleOperator bump = random_positive_contraction(rng, basis, tol);
    double gap = std::max(0.0, 1.0 - max_operator_norm(t1));
    ModuleOperator t2 = t1 + Complex(gap, 0.0) * bump;
    CPMap low = phi_T(s, t1, tol);
    CPMap mid = phi_T(s, t2, tol);

    if (!cp_order_leq(top, top, tol)) ++failures;           // reflexive
    if (!cp_order_leq(low, mid, tol)) ++failures;           // chain links
    if (!cp_order_leq(mid, top, tol)) ++failures;
    if (!cp_order_leq(low, top, tol)) ++failures;           // transitivity

    // Two module maps over the same underlying map dominate each other and
    // must therefore be equivalent.
    ModuleShape e{dom, dom.block_dims, std::nullopt};
    PhiMap a = random_phi_map_auto(rng, e, top, tol);
    PhiMap b = random_phi_map_auto(rng, e, top, tol);
    double resid = equivalence_residual(a, b, tol);
    c.max_residual = std::max(c.max_residual, resid);
    if (resid > 1e-8) ++failures;
  }
  std::ostringstream os;
  os << failures << " failures";
  c.detail = os.str();
  c.passed = failures == 0;
  return c;
}

}  // namespace

bool VerificationReport::all_passed() const {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

VerificationReport run_verification(std::uint64_t seed, int samples,
                                    double tol) {
  VerificationReport report;
  report.seed = seed;
  report.samples = samples;
  report.tol = tol;
  using CheckFn = CheckResult (*)(std::uint64_t, int, double);
  const std::pair<const char*, CheckFn> fns[] = {
      {"example-a-regression", check_example_a},
      {"example-b-regression", check_example_b},
      {"order-isomorphism-roundtrip", check_order_roundtrip},
      {"rn-derivative-roundtrip", check_rn_roundtrip},
      {"dilation-reconstruction", check_dilation},
      {"choi-vs-operational-cp", check_cp_oracle},
      {"positive-decomposition", check_decomposition},
      {"reduced-construction", check_reduced},
      {"purity", check_purity},
      {"preorder-sanity", check_preorder}};
  for (const auto& [name, fn] : fns) {
    auto start = Clock::now();
    CheckResult c;
    try {
      c = fn(seed, samples, tol);
    } catch (const Error& e) {
      c.name = name;
      c.passed = false;
      c.max_residual = std::numeric_limits<double>::infinity();
      c.detail = e.what();
    }
    c.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report.checks.push_back(std::move(c));
  }
  return report;
}

nlohmann::json report_to_json(const VerificationReport& report,
                              bool include_timing) {
  nlohmann::json j;
  j["schema"] = 1;
  j["seed"] = report.seed;
  j["samples"] = report.samples;
  j["tol"] = report.tol;
  j["ok"] = report.all_passed();
  j["checks"] = nlohmann::json::array();
  for (const CheckResult& c : report.checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["description"] = c.description;
    jc["max_residual"] = c.max_residual;
    jc["passed"] = c.passed;
    if (include_timing) jc["seconds"] = c.seconds;
    if (!c.detail.empty()) jc["detail"] = c.detail;
    j["checks"].push_back(std::move(jc));
  }
  return j;
}

}  // namespace cpmod
