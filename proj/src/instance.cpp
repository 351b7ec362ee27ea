#include "cpmod/instance.hpp"

#include "cpmod/sampling.hpp"

#include <cmath>
#include <fstream>

namespace cpmod {

using nlohmann::json;

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error("instance: complex entries must be [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array()) throw Error("instance: matrix must be an array of rows");
  Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw Error("instance: ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

}  // namespace

const BlockAlgebra& InstanceFile::algebra(const std::string& name) const {
  auto it = algebras.find(name);
  if (it == algebras.end())
    throw Error("instance: unknown algebra '" + name + "'");
  return it->second;
}

const ModuleShape& InstanceFile::module(const std::string& name) const {
  auto it = modules.find(name);
  if (it == modules.end())
    throw Error("instance: unknown module '" + name + "'");
  return it->second;
}

CPMap InstanceFile::cp_map(const std::string& name) const {
  auto it = maps.find(name);
  if (it == maps.end() || it->second.role != "cp")
    throw Error("instance: no cp map named '" + name + "'");
  CPMap m{algebra(it->second.domain), algebra(it->second.codomain),
          it->second.choi};
  m.validate();
  return m;
}

PhiMap InstanceFile::phi_map(const std::string& name) const {
  auto it = maps.find(name);
  if (it == maps.end() || it->second.role != "phi")
    throw Error("instance: no module map named '" + name + "'");
  PhiMap p{module(it->second.domain), module(it->second.codomain),
           it->second.matrix, cp_map(it->second.underlying)};
  p.validate();
  return p;
}

ModuleOperator InstanceFile::module_operator(const std::string& name) const {
  auto it = operators.find(name);
  if (it == operators.end())
    throw Error("instance: no operator named '" + name + "'");
  const ModuleShape& shape = module(it->second.module);
  ModuleOperator t{shape, shape, it->second.blocks};
  t.validate();
  return t;
}

std::vector<std::string> InstanceFile::maps_with_role(
    const std::string& role) const {
  std::vector<std::string> names;
  for (const auto& [name, entry] : maps)
    if (entry.role == role) names.push_back(name);
  return names;
}

InstanceFile instance_from_json(const json& j) {
  InstanceFile inst;
  if (j.contains("metadata")) {
    const json& md = j.at("metadata");
    inst.name = md.value("name", "");
    inst.seed = md.value("seed", std::uint64_t{0});
    if (md.contains("tol")) inst.tol = md.at("tol").get<double>();
  }
  // Bind each section to a named json before calling items(): iterating the
  // proxy of a temporary is undefined behaviour.
  const json empty = json::object();
  const json& algebras = j.contains("algebras") ? j.at("algebras") : empty;
  for (const auto& [name, spec] : algebras.items()) {
    BlockAlgebra alg{spec.at("block_dims").get<std::vector<int>>()};
    alg.validate();
    inst.algebras.emplace(name, std::move(alg));
  }
  const json& modules = j.contains("modules") ? j.at("modules") : empty;
  for (const auto& [name, spec] : modules.items()) {
    std::string alg_name = spec.at("algebra").get<std::string>();
    ModuleShape shape{inst.algebra(alg_name),
                      spec.at("heights").get<std::vector<int>>(),
                      std::nullopt};
    if (spec.contains("left_action"))
      shape.left_action =
          LeftActionSpec{spec.at("left_action").get<std::vector<int>>()};
    shape.validate();
    inst.module_algebra.emplace(name, alg_name);
    inst.modules.emplace(name, std::move(shape));
  }
  const json& maps = j.contains("maps") ? j.at("maps") : empty;
  for (const auto& [name, spec] : maps.items()) {
    MapEntry entry;
    entry.role = spec.at("role").get<std::string>();
    entry.domain = spec.at("domain").get<std::string>();
    entry.codomain = spec.at("codomain").get<std::string>();
    if (entry.role == "cp") {
      for (const json& row : spec.at("choi")) {
        std::vector<Mat> blocks;
        for (const json& cell : row) blocks.push_back(mat_from_json(cell));
        entry.choi.push_back(std::move(blocks));
      }
    } else if (entry.role == "phi") {
      entry.underlying = spec.at("underlying").get<std::string>();
      entry.matrix = mat_from_json(spec.at("matrix"));
    } else {
      throw Error("instance: unknown map role '" + entry.role + "'");
    }
    inst.maps.emplace(name, std::move(entry));
  }
  const json& operators = j.contains("operators") ? j.at("operators") : empty;
  for (const auto& [name, spec] : operators.items()) {
    OperatorEntry entry;
    entry.module = spec.at("module").get<std::string>();
    for (const json& b : spec.at("blocks"))
      entry.blocks.push_back(mat_from_json(b));
    inst.operators.emplace(name, std::move(entry));
  }

  // Eager validation: every map and operator must assemble, and every map
  // used as the underlying map of a module map must be CP.
  double tol = inst.tol.value_or(kDefaultTol);
  for (const auto& [name, entry] : inst.maps) {
    if (entry.role == "cp") {
      inst.cp_map(name);
    } else {
      PhiMap p = inst.phi_map(name);
      if (!is_completely_positive(p.underlying, tol))
        throw Error("instance: underlying map '" + entry.underlying +
                    "' of '" + name + "' is not completely positive");
    }
  }
  for (const auto& [name, entry] : inst.operators) inst.module_operator(name);
  return inst;
}

json instance_to_json(const InstanceFile& inst) {
  json j;
  j["schema"] = 1;
  json md;
  md["name"] = inst.name;
  md["seed"] = inst.seed;
  if (inst.tol) md["tol"] = *inst.tol;
  j["metadata"] = std::move(md);
  j["algebras"] = json::object();
  for (const auto& [name, alg] : inst.algebras)
    j["algebras"][name] = {{"block_dims", alg.block_dims}};
  j["modules"] = json::object();
  for (const auto& [name, shape] : inst.modules) {
    json m;
    m["algebra"] = inst.module_algebra.at(name);
    m["heights"] = shape.heights;
    if (shape.left_action) m["left_action"] = shape.left_action->multiplicities;
    j["modules"][name] = std::move(m);
  }
  j["maps"] = json::object();
  for (const auto& [name, entry] : inst.maps) {
    json m;
    m["role"] = entry.role;
    m["domain"] = entry.domain;
    m["codomain"] = entry.codomain;
    if (entry.role == "cp") {
      json grid = json::array();
      for (const auto& row : entry.choi) {
        json jrow = json::array();
        for (const Mat& cell : row) jrow.push_back(mat_to_json(cell));
        grid.push_back(std::move(jrow));
      }
      m["choi"] = std::move(grid);
    } else {
      m["underlying"] = entry.underlying;
      m["matrix"] = mat_to_json(entry.matrix);
    }
    j["maps"][name] = std::move(m);
  }
  if (!inst.operators.empty()) {
    j["operators"] = json::object();
    for (const auto& [name, entry] : inst.operators) {
      json o;
      o["module"] = entry.module;
      o["blocks"] = json::array();
      for (const Mat& b : entry.blocks) o["blocks"].push_back(mat_to_json(b));
      j["operators"][name] = std::move(o);
    }
  }
  return j;
}

InstanceFile parse_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("instance: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("instance: malformed JSON in '" + path + "': " + e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const json::exception& e) {
    throw Error("instance: malformed instance '" + path + "': " + e.what());
  }
}

void write_instance(const InstanceFile& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("instance: cannot write '" + path + "'");
  out << instance_to_json(inst).dump(2) << "\n";
}

namespace {

// Both bundled instances share the layout A = B = M_2, E = M_2 over A,
// F a single tall block over B.
InstanceFile two_by_two_fixture(const std::string& name, int f_height,
                                std::optional<int> f_multiplicity) {
  InstanceFile inst;
  inst.name = name;
  inst.algebras.emplace("A", BlockAlgebra{{2}});
  inst.algebras.emplace("B", BlockAlgebra{{2}});
  ModuleShape e{inst.algebra("A"), {2}, LeftActionSpec{{1}}};
  ModuleShape f{inst.algebra("B"), {f_height}, std::nullopt};
  if (f_multiplicity) f.left_action = LeftActionSpec{{*f_multiplicity}};
  inst.module_algebra.emplace("E", "A");
  inst.module_algebra.emplace("F", "B");
  inst.modules.emplace("E", std::move(e));
  inst.modules.emplace("F", std::move(f));
  return inst;
}

MapEntry cp_entry(const Mat& choi_block) {
  MapEntry entry;
  entry.role = "cp";
  entry.domain = "A";
  entry.codomain = "B";
  entry.choi = {{choi_block}};
  return entry;
}

MapEntry phi_entry(const Mat& matrix) {
  MapEntry entry;
  entry.role = "phi";
  entry.domain = "E";
  entry.codomain = "F";
  entry.underlying = "phi";
  entry.matrix = matrix;
  return entry;
}

InstanceFile fixture_five_by_two() {
  InstanceFile inst = two_by_two_fixture("example_3_4", 5, std::nullopt);
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);

  Mat choi = Mat::Zero(4, 4);
  choi(0, 0) = 0.25;
  choi(3, 3) = 1.0;
  inst.maps.emplace("phi", cp_entry(choi));

  // Columns: images of the four matrix units of E, rows: coordinates of F.
  Mat big = Mat::Zero(10, 4);
  big(0, 0) = 0.5;   // first unit -> (1/2) at (0,0)
  big(9, 1) = 1.0;   // second unit -> 1 at (4,1)
  big(6, 2) = 0.5;   // third unit -> (1/2) at (3,0)
  big(3, 3) = 1.0;   // fourth unit -> 1 at (1,1)
  inst.maps.emplace("Phi", phi_entry(big));

  Mat other = Mat::Zero(10, 4);
  other(0, 0) = 1.0 / (2.0 * r2);
  other(2, 0) = 1.0 / (2.0 * r2);
  other(5, 1) = 1.0;
  other(6, 2) = 0.5;
  other(1, 3) = -1.0 / r3;
  other(3, 3) = 1.0 / r3;
  other(9, 3) = 1.0 / r3;
  inst.maps.emplace("Psi", phi_entry(other));

  Mat v = Mat::Zero(5, 5);
  v(0, 0) = 1.0 / r2;
  v(0, 1) = 1.0 / r2;
  v(1, 4) = r3;
  v(3, 3) = 1.0;
  v(4, 2) = 1.0;
  inst.operators.emplace("V", OperatorEntry{"F", {v}});
  return inst;
}

InstanceFile fixture_four_by_two() {
  InstanceFile inst = two_by_two_fixture("example_3_5", 4, 2);
  const double r2 = std::sqrt(2.0);

  Mat choi = Mat::Zero(4, 4);
  choi(0, 0) = 3.0;
  choi(0, 3) = 1.0;
  choi(3, 0) = 1.0;
  choi(3, 3) = 3.0;
  inst.maps.emplace("phi", cp_entry(choi));

  Mat big = Mat::Zero(8, 4);
  big(0, 0) = r2;
  big(2, 0) = -1.0;
  big(1, 1) = r2;
  big(3, 1) = 1.0;
  big(4, 2) = r2;
  big(6, 2) = -1.0;
  big(5, 3) = r2;
  big(7, 3) = 1.0;
  inst.maps.emplace("Phi", phi_entry(big));

  Mat other = big;
  other(2, 0) = 1.0;
  other(3, 1) = -1.0;
  inst.maps.emplace("Psi", phi_entry(other));

  Mat v = Mat::Zero(4, 4);
  v(0, 0) = 1.0;
  v(1, 1) = -1.0;
  v(2, 2) = 1.0;
  v(3, 3) = 1.0;
  inst.operators.emplace("V", OperatorEntry{"F", {v}});
  return inst;
}

}  // namespace

std::vector<std::string> builtin_fixture_names() {
  return {"example_3_4", "example_3_5"};
}

InstanceFile builtin_fixture(const std::string& name) {
  if (name == "example_3_4") return fixture_five_by_two();
  if (name == "example_3_5") return fixture_four_by_two();
  throw Error("instance: unknown fixture '" + name + "'");
}

InstanceFile generate_random(const GenSpec& spec) {
  for (int n : spec.domain_blocks)
    if (n < 1 || n > 4) throw Error("generate_random: block dims must be 1..4");
  for (int n : spec.codomain_blocks)
    if (n < 1 || n > 4) throw Error("generate_random: block dims must be 1..4");
  for (int m : spec.domain_heights)
    if (m < 0 || m > 8) throw Error("generate_random: heights must be 0..8");
  for (int m : spec.codomain_heights)
    if (m < 0 || m > 8) throw Error("generate_random: heights must be 0..8");

  Rng rng(spec.seed);
  InstanceFile inst;
  inst.seed = spec.seed;

  if (spec.pure) {
    // Identity module map over a single full matrix block: the commutant of
    // its dilation is the scalars.
    BlockAlgebra alg{{spec.domain_blocks.front()}};
    inst.name = "random-pure";
    inst.algebras.emplace("A", alg);
    inst.algebras.emplace("B", alg);
    ModuleShape e{alg, alg.block_dims, std::nullopt};
    inst.module_algebra.emplace("E", "A");
    inst.module_algebra.emplace("F", "B");
    inst.modules.emplace("E", e);
    inst.modules.emplace("F", e);
    CPMap id = CPMap::identity(alg);
    MapEntry phi;
    phi.role = "cp";
    phi.domain = "A";
    phi.codomain = "B";
    phi.choi = id.choi;
    inst.maps.emplace("phi", std::move(phi));
    MapEntry big;
    big.role = "phi";
    big.domain = "E";
    big.codomain = "F";
    big.underlying = "phi";
    big.matrix = Mat::Identity(e.dim(), e.dim());
    inst.maps.emplace("Phi", std::move(big));
    return inst;
  }

  BlockAlgebra dom{spec.domain_blocks};
  BlockAlgebra cod{spec.codomain_blocks};
  inst.name = spec.ordered_pair ? "random-ordered-pair" : "random-instance";
  inst.algebras.emplace("A", dom);
  inst.algebras.emplace("B", cod);
  if (static_cast<int>(spec.domain_heights.size()) != dom.num_blocks())
    throw Error("generate_random: one domain height per block required");

  CPMap phi = random_cp_map(rng, dom, cod);
  ModuleShape e{dom, spec.domain_heights, std::nullopt};
  StinespringData s = stinespring(phi, spec.tol);
  TensorDilation td = tensor_dilation(e, s, spec.tol);
  std::vector<int> f_heights = spec.codomain_heights;
  if (f_heights.empty()) f_heights = td.k_big.heights;
  ModuleShape f{cod, f_heights, std::nullopt};
  f.validate();
  PhiMap big = random_phi_map(rng, e, f, phi, spec.tol);

  inst.module_algebra.emplace("E", "A");
  inst.module_algebra.emplace("F", "B");
  inst.modules.emplace("E", e);
  inst.modules.emplace("F", f);
  MapEntry phi_e;
  phi_e.role = "cp";
  phi_e.domain = "A";
  phi_e.codomain = "B";
  phi_e.choi = phi.choi;
  inst.maps.emplace("phi", std::move(phi_e));
  MapEntry big_e;
  big_e.role = "phi";
  big_e.domain = "E";
  big_e.codomain = "F";
  big_e.underlying = "phi";
  big_e.matrix = big.matrix;
  inst.maps.emplace("Phi", std::move(big_e));

  if (spec.ordered_pair) {
    ModuleStinespringData m = module_stinespring(big, s, spec.tol);
    auto basis = module_commutant(m, spec.tol);
    CommutantElement ts = random_positive_contraction(rng, basis, spec.tol);
    CommutantElement root{sqrt_psd(ts.t1, spec.tol),
                          sqrt_psd(ts.t2, spec.tol)};
    PhiMap below = phi_TS(m, s, root, spec.tol);
    MapEntry psi_e;
    psi_e.role = "cp";
    psi_e.domain = "A";
    psi_e.codomain = "B";
    psi_e.choi = below.underlying.choi;
    inst.maps.emplace("psi", std::move(psi_e));
    MapEntry below_e;
    below_e.role = "phi";
    below_e.domain = "E";
    below_e.codomain = "F";
    below_e.underlying = "psi";
    below_e.matrix = below.matrix;
    inst.maps.emplace("Psi", std::move(below_e));
  }
  return inst;
}

}  // namespace cpmod
