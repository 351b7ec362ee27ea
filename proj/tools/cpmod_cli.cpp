// Command-line front end: inspect instance files, run the dilation and
// derivative constructions on them, and drive the randomized verification
// sweep. Exit codes: 0 = pass, 1 = mathematical failure, 2 = input error.
#include "cpmod/radon_nikodym.hpp"
#include "cpmod/sampling.hpp"
#include "cpmod/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace cpmod;
using nlohmann::json;

namespace {

struct Options {
  std::string file;
  std::string phi_name = "Phi";
  std::string psi_name = "Psi";
  std::string map_name;
  double tol = kDefaultTol;
  bool as_json = false;
};

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_mat(const Mat& m, const std::string& indent) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::cout << indent;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      Complex z = m(r, c);
      char buf[64];
      if (std::abs(z.imag()) < 1e-12)
        std::snprintf(buf, sizeof(buf), "%10.6g", z.real());
      else
        std::snprintf(buf, sizeof(buf), "%9.5g%+.5gi", z.real(), z.imag());
      std::cout << buf << (c + 1 < m.cols() ? " " : "");
    }
    std::cout << "\n";
  }
}

void print_operator(const ModuleOperator& v) {
  for (size_t k = 0; k < v.blocks.size(); ++k) {
    std::cout << "  block " << k << " (" << v.blocks[k].rows() << " x "
              << v.blocks[k].cols() << "):\n";
    print_mat(v.blocks[k], "    ");
  }
}

json operator_to_json(const ModuleOperator& v) {
  json blocks = json::array();
  for (const Mat& b : v.blocks) blocks.push_back(mat_to_json(b));
  return blocks;
}

// Anything thrown while reading a file is an input problem (exit 2), not a
// mathematical failure; rethrow outside the Error hierarchy.
InstanceFile load(const std::string& path) {
  try {
    return parse_instance(path);
  } catch (const Error& e) {
    throw std::runtime_error(e.what());
  }
}

/// Name lookups are input problems, not mathematical failures.
CPMap get_cp(const InstanceFile& inst, const std::string& name) {
  try {
    return inst.cp_map(name);
  } catch (const Error& e) {
    throw std::runtime_error(e.what());
  }
}

PhiMap get_phi(const InstanceFile& inst, const std::string& name) {
  try {
    return inst.phi_map(name);
  } catch (const Error& e) {
    throw std::runtime_error(e.what());
  }
}

/// Names of the two module maps to act on: the explicit ones if given,
/// otherwise the first two phi-role maps in name order.
std::pair<std::string, std::string> pick_pair(const InstanceFile& inst,
                                              const Options& opt) {
  auto names = inst.maps_with_role("phi");
  auto have = [&](const std::string& n) {
    return std::find(names.begin(), names.end(), n) != names.end();
  };
  if (have(opt.phi_name) && have(opt.psi_name))
    return {opt.phi_name, opt.psi_name};
  if (names.size() < 2)
    throw std::runtime_error("instance does not contain two module maps");
  return {names[0], names[1]};
}

int cmd_check_cp(const Options& opt) {
  InstanceFile inst = load(opt.file);
  auto names = inst.maps_with_role("cp");
  if (!opt.map_name.empty()) names = {opt.map_name};
  if (names.empty()) throw std::runtime_error("instance contains no cp-role maps");
  json out{{"schema", 1}, {"command", "check-cp"}, {"maps", json::array()}};
  bool all_cp = true;
  for (const auto& n : names) {
    CPMap m = get_cp(inst, n);
    bool cp = is_completely_positive(m, opt.tol);
    all_cp = all_cp && cp;
    out["maps"].push_back({{"name", n}, {"completely_positive", cp}});
    if (!opt.as_json)
      std::cout << n << ": completely positive: " << (cp ? "true" : "false")
                << "\n";
  }
  out["ok"] = all_cp;
  if (opt.as_json) std::cout << out.dump(2) << "\n";
  return all_cp ? 0 : 1;
}

int cmd_choi(const Options& opt) {
  InstanceFile inst = load(opt.file);
  auto names = inst.maps_with_role("cp");
  if (!opt.map_name.empty()) names = {opt.map_name};
  if (names.empty()) throw std::runtime_error("instance contains no cp-role maps");
  json out{{"schema", 1}, {"command", "choi"}, {"maps", json::array()}};
  for (const auto& n : names) {
    CPMap m = get_cp(inst, n);
    json jm{{"name", n}, {"blocks", json::array()}};
    if (!opt.as_json) std::cout << n << ":\n";
    for (size_t j = 0; j < m.choi.size(); ++j)
      for (size_t k = 0; k < m.choi[j].size(); ++k) {
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m.choi[j][k]),
                                              Eigen::EigenvaluesOnly);
        json jb{{"domain_block", j},
                {"codomain_block", k},
                {"matrix", mat_to_json(m.choi[j][k])},
                {"eigenvalues", json::array()}};
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
          jb["eigenvalues"].push_back(es.eigenvalues()(i));
        jm["blocks"].push_back(std::move(jb));
        if (!opt.as_json) {
          std::cout << "  block (" << j << ", " << k << "), eigenvalues:";
          for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            std::cout << " " << es.eigenvalues()(i);
          std::cout << "\n";
          print_mat(m.choi[j][k], "    ");
        }
      }
    out["maps"].push_back(std::move(jm));
  }
  if (opt.as_json) std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_dilate(const Options& opt) {
  InstanceFile inst = load(opt.file);
  json out{{"schema", 1}, {"command", "dilate"}, {"maps", json::array()}};
  bool ok = true;
  for (const auto& n : inst.maps_with_role("cp")) {
    CPMap phi = inst.cp_map(n);
    if (!is_completely_positive(phi, opt.tol)) {
      ok = false;
      out["maps"].push_back({{"name", n}, {"error", "not completely positive"}});
      if (!opt.as_json) std::cout << n << ": not completely positive\n";
      continue;
    }
    StinespringData s = stinespring(phi, opt.tol);
    double resid = 0.0;
    for (const AlgebraElement& a : algebra_basis(phi.domain)) {
      ModuleOperator rec = s.v.adjoint() * s.pi(a) * s.v;
      AlgebraElement img = phi(a);
      for (int k = 0; k < phi.codomain.num_blocks(); ++k)
        resid = std::max(resid, operator_norm(rec.blocks[k] - img.blocks[k]));
    }
    bool minimal = minimality_check(s, opt.tol);
    ok = ok && minimal && resid <= 100 * opt.tol;
    out["maps"].push_back({{"name", n},
                           {"space_heights", s.k_phi.heights},
                           {"reconstruction_residual", resid},
                           {"minimal", minimal}});
    if (!opt.as_json)
      std::cout << n << ": dilation space heights "
                << json(s.k_phi.heights).dump() << ", reconstruction residual "
                << resid << ", minimal: " << (minimal ? "true" : "false")
                << "\n";
  }
  for (const auto& n : inst.maps_with_role("phi")) {
    PhiMap big = inst.phi_map(n);
    StinespringData s = stinespring(big.underlying, opt.tol);
    ModuleStinespringData m = module_stinespring(big, s, opt.tol);
    double resid = 0.0;
    for (const ModuleElement& x : module_basis(big.domain))
      resid = std::max(resid,
                       distance(big(x), (m.w.adjoint() * m.pi(x))(m.base.xi)));
    double coiso = 0.0;
    for (int k = 0; k < m.k_big.num_blocks(); ++k) {
      int rho = m.k_big.height(k);
      coiso = std::max(coiso,
                       operator_norm(m.w.blocks[k] * m.w.blocks[k].adjoint() -
                                     Mat::Identity(rho, rho)));
    }
    bool minimal = minimality_check(m, opt.tol);
    ok = ok && minimal && resid <= 100 * opt.tol && coiso <= 100 * opt.tol;
    out["maps"].push_back({{"name", n},
                           {"space_heights", m.k_big.heights},
                           {"reconstruction_residual", resid},
                           {"coisometry_residual", coiso},
                           {"minimal", minimal}});
    if (!opt.as_json)
      std::cout << n << ": dilation space heights "
                << json(m.k_big.heights).dump() << ", reconstruction residual "
                << resid << ", coisometry residual " << coiso
                << ", minimal: " << (minimal ? "true" : "false") << "\n";
  }
  out["ok"] = ok;
  if (opt.as_json) std::cout << out.dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_rn(const Options& opt) {
  InstanceFile inst = load(opt.file);
  auto [pn, qn] = pick_pair(inst, opt);
  PhiMap phi = get_phi(inst, pn);
  PhiMap psi = get_phi(inst, qn);
  RNDerivative rn = rn_derivative(phi, psi, opt.tol);
  json out{{"schema", 1},
           {"command", "rn"},
           {"dominating", pn},
           {"dominated", qn},
           {"delta_algebra_part", operator_to_json(rn.delta.t1)},
           {"delta_module_part", operator_to_json(rn.delta.t2)},
           {"norm", std::max(max_operator_norm(rn.delta.t1),
                             max_operator_norm(rn.delta.t2))},
           {"ok", true}};
  if (opt.as_json) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "derivative of " << qn << " with respect to " << pn
              << " (norm " << out["norm"].get<double>() << ")\n";
    std::cout << "algebra-level part:\n";
    print_operator(rn.delta.t1);
    std::cout << "module-level part:\n";
    print_operator(rn.delta.t2);
  }
  return 0;
}

int cmd_compare(const Options& opt) {
  InstanceFile inst = load(opt.file);
  auto [pn, qn] = pick_pair(inst, opt);
  PhiMap phi = get_phi(inst, pn);
  PhiMap psi = get_phi(inst, qn);
  CPMap iphi = induced_phi(phi.matrix, phi.domain, phi.codomain, opt.tol);
  CPMap ipsi = induced_phi(psi.matrix, psi.domain, psi.codomain, opt.tol);
  bool psi_below = cp_order_leq(ipsi, iphi, opt.tol);
  bool phi_below = cp_order_leq(iphi, ipsi, opt.tol);
  bool equivalent = equivalence_check(phi, psi, opt.tol);
  json out{{"schema", 1},
           {"command", "compare"},
           {"first", pn},
           {"second", qn},
           {"second_below_first", psi_below},
           {"first_below_second", phi_below},
           {"equivalent", equivalent}};
  if (!opt.as_json) {
    std::cout << qn << " below " << pn << ": " << (psi_below ? "true" : "false")
              << "\n"
              << pn << " below " << qn << ": " << (phi_below ? "true" : "false")
              << "\n"
              << "equivalent: " << (equivalent ? "true" : "false") << "\n";
  }
  if (equivalent) {
    ModuleOperator v = equivalent_partial_isometry(phi, psi, opt.tol);
    out["partial_isometry"] = operator_to_json(v);
    if (!opt.as_json) {
      std::cout << "linking partial isometry with " << pn << " = V " << qn
                << ":\n";
      print_operator(v);
    }
  }
  out["ok"] = psi_below || phi_below || equivalent;
  if (opt.as_json) std::cout << out.dump(2) << "\n";
  return out["ok"].get<bool>() ? 0 : 1;
}

int cmd_isometry(const Options& opt) {
  InstanceFile inst = load(opt.file);
  auto [pn, qn] = pick_pair(inst, opt);
  PhiMap phi = get_phi(inst, pn);
  PhiMap psi = get_phi(inst, qn);
  ModuleOperator v = equivalent_partial_isometry(phi, psi, opt.tol);
  json out{{"schema", 1},
           {"command", "isometry"},
           {"first", pn},
           {"second", qn},
           {"constructed", operator_to_json(v)},
           {"ok", true}};
  if (!opt.as_json) {
    std::cout << "constructed partial isometry with " << pn << " = V " << qn
              << ":\n";
    print_operator(v);
  }
  // If the file bundles a candidate operator, grade it too.
  if (inst.operators.count("V")) {
    ModuleOperator cand = inst.module_operator("V");
    double resid = 0.0;
    for (const Mat& b : cand.blocks)
      resid = std::max(resid, operator_norm(b * b.adjoint() * b - b));
    for (const ModuleElement& x : module_basis(phi.domain))
      resid = std::max(resid, distance(phi(x), cand(psi(x))));
    bool cand_ok = resid <= 100 * opt.tol;
    out["bundled_residual"] = resid;
    out["bundled_ok"] = cand_ok;
    out["ok"] = cand_ok;
    if (!opt.as_json)
      std::cout << "bundled V residual: " << resid << " ("
                << (cand_ok ? "pass" : "fail") << ")\n";
  }
  if (opt.as_json) std::cout << out.dump(2) << "\n";
  return out["ok"].get<bool>() ? 0 : 1;
}

int cmd_reduce(const Options& opt) {
  InstanceFile inst = load(opt.file);
  auto [pn, qn] = pick_pair(inst, opt);
  PhiMap phi = get_phi(inst, pn);
  PhiMap psi = get_phi(inst, qn);
  ReducedStinespring red = reduced_stinespring(phi, psi, opt.tol);
  StinespringData full = stinespring(phi.underlying, opt.tol);
  ModuleStinespringData mfull = module_stinespring(phi, full, opt.tol);
  json out{{"schema", 1},
           {"command", "reduce"},
           {"full_algebra_heights", full.k_phi.heights},
           {"full_module_heights", mfull.k_big.heights},
           {"reduced_algebra_heights", red.base.k_phi.heights},
           {"reduced_module_heights", red.module.k_big.heights},
           {"equivalent_to_dominated",
            equivalence_check(red.module.map, psi, opt.tol)},
           {"minimal", minimality_check(red.module, opt.tol)}};
  out["ok"] = out["equivalent_to_dominated"].get<bool>() &&
              out["minimal"].get<bool>();
  if (opt.as_json) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "full dilation heights: algebra "
              << json(full.k_phi.heights).dump() << ", module "
              << json(mfull.k_big.heights).dump() << "\n"
              << "reduced dilation heights: algebra "
              << json(red.base.k_phi.heights).dump() << ", module "
              << json(red.module.k_big.heights).dump() << "\n"
              << "equivalent to dominated map: "
              << (out["equivalent_to_dominated"].get<bool>() ? "true" : "false")
              << "\nminimal: "
              << (out["minimal"].get<bool>() ? "true" : "false") << "\n";
  }
  return out["ok"].get<bool>() ? 0 : 1;
}

int cmd_purity(const Options& opt) {
  InstanceFile inst = load(opt.file);
  auto names = inst.maps_with_role("phi");
  if (!opt.map_name.empty()) names = {opt.map_name};
  if (names.empty()) throw std::runtime_error("instance contains no module maps");
  json out{{"schema", 1}, {"command", "purity"}, {"maps", json::array()}};
  for (const auto& n : names) {
    bool pure = is_pure(get_phi(inst, n), opt.tol);
    out["maps"].push_back({{"name", n}, {"pure", pure}});
    if (!opt.as_json)
      std::cout << n << ": pure: " << (pure ? "true" : "false") << "\n";
  }
  out["ok"] = true;
  if (opt.as_json) std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_verify(std::uint64_t seed, int samples, double tol, bool as_json,
               bool timing) {
  VerificationReport report = run_verification(seed, samples, tol);
  if (as_json) {
    std::cout << report_to_json(report, timing).dump(2) << "\n";
  } else {
    for (const CheckResult& c : report.checks) {
      std::printf("[%s] %-30s max residual %.3e", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.max_residual);
      if (!c.detail.empty()) std::printf("  (%s)", c.detail.c_str());
      std::printf("\n");
    }
    std::printf("%d/%zu checks passed\n",
                static_cast<int>(std::count_if(
                    report.checks.begin(), report.checks.end(),
                    [](const CheckResult& c) { return c.passed; })),
                report.checks.size());
  }
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Completely positive maps on blockwise matrix modules: "
               "dilations, derivatives, and verification"};
  app.require_subcommand(1);

  Options opt;
  std::uint64_t seed = 1;
  int samples = 50;
  bool timing = true;

  auto add_common = [&](CLI::App* sub, bool with_file = true) {
    if (with_file) sub->add_option("file", opt.file, "instance file")->required();
    sub->add_option("--tol", opt.tol, "numerical tolerance");
    sub->add_flag("--json", opt.as_json, "machine-readable output");
  };

  auto* c_check = app.add_subcommand("check-cp", "test complete positivity");
  add_common(c_check);
  c_check->add_option("--name", opt.map_name, "restrict to one map");

  auto* c_choi = app.add_subcommand("choi", "print Choi blocks and spectra");
  add_common(c_choi);
  c_choi->add_option("--name", opt.map_name, "restrict to one map");

  auto* c_dilate = app.add_subcommand("dilate", "build and grade dilations");
  add_common(c_dilate);

  auto* c_rn = app.add_subcommand("rn", "derivative of one module map "
                                        "with respect to another");
  add_common(c_rn);
  c_rn->add_option("--phi", opt.phi_name, "dominating map name");
  c_rn->add_option("--psi", opt.psi_name, "dominated map name");

  auto* c_compare = app.add_subcommand("compare", "order and equivalence "
                                                  "verdicts for two maps");
  add_common(c_compare);
  c_compare->add_option("--phi", opt.phi_name, "first map name");
  c_compare->add_option("--psi", opt.psi_name, "second map name");

  auto* c_isometry = app.add_subcommand(
      "isometry", "partial isometry linking two equivalent maps");
  add_common(c_isometry);
  c_isometry->add_option("--phi", opt.phi_name, "first map name");
  c_isometry->add_option("--psi", opt.psi_name, "second map name");

  auto* c_reduce = app.add_subcommand(
      "reduce", "compress the dilation along a rank-deficient derivative");
  add_common(c_reduce);
  c_reduce->add_option("--phi", opt.phi_name, "dominating map name");
  c_reduce->add_option("--psi", opt.psi_name, "dominated map name");

  auto* c_purity = app.add_subcommand("purity", "trivial-commutant test");
  add_common(c_purity);
  c_purity->add_option("--name", opt.map_name, "restrict to one map");

  auto* c_verify = app.add_subcommand("verify", "randomized verification "
                                                "sweep over all constructions");
  c_verify->add_option("--tol", opt.tol, "numerical tolerance");
  c_verify->add_flag("--json", opt.as_json, "machine-readable output");
  c_verify->add_option("--seed", seed, "random seed");
  c_verify->add_option("--samples", samples, "samples per randomized check");
  bool no_timing = false;
  c_verify->add_flag("--no-timing", no_timing,
                     "omit wall times from --json output");

  GenSpec spec;
  std::string out_path;
  std::string fixture;
  auto* c_gen = app.add_subcommand("gen", "write a random instance file");
  c_gen->add_option("out", out_path, "output path")->required();
  c_gen->add_option("--seed", spec.seed, "random seed");
  c_gen->add_option("--tol", spec.tol, "numerical tolerance");
  c_gen->add_option("--domain-blocks", spec.domain_blocks,
                    "domain algebra block dims");
  c_gen->add_option("--codomain-blocks", spec.codomain_blocks,
                    "codomain algebra block dims");
  c_gen->add_option("--domain-heights", spec.domain_heights,
                    "domain module heights");
  c_gen->add_option("--codomain-heights", spec.codomain_heights,
                    "codomain module heights (default: sized to the dilation)");
  c_gen->add_flag("--ordered-pair", spec.ordered_pair,
                  "also emit a map dominated by the generated one");
  c_gen->add_flag("--pure", spec.pure, "identity-style instance with a "
                                       "trivial commutant");
  c_gen->add_option("--fixture", fixture,
                    "write a bundled worked example instead of sampling");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_check->parsed()) return cmd_check_cp(opt);
    if (c_choi->parsed()) return cmd_choi(opt);
    if (c_dilate->parsed()) return cmd_dilate(opt);
    if (c_rn->parsed()) return cmd_rn(opt);
    if (c_compare->parsed()) return cmd_compare(opt);
    if (c_isometry->parsed()) return cmd_isometry(opt);
    if (c_reduce->parsed()) return cmd_reduce(opt);
    if (c_purity->parsed()) return cmd_purity(opt);
    if (c_verify->parsed())
      return cmd_verify(seed, samples, opt.tol, opt.as_json, !no_timing);
    if (c_gen->parsed()) {
      InstanceFile inst =
          fixture.empty() ? generate_random(spec) : builtin_fixture(fixture);
      write_instance(inst, out_path);
      std::cout << "wrote " << out_path << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    // Failed mathematical preconditions (unordered maps, inequivalent maps,
    // inconsistent systems) are mathematical failures; everything the parser
    // throws is an input error.
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
