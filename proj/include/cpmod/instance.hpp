#pragma once

#include "cpmod/cp_maps.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>

namespace cpmod {

/// One named map in an instance file: either a linear map between algebras
/// stored through its Choi blocks (role "cp"), or a module map stored as a
/// dense matrix on the basis together with the name of its underlying cp map
/// (role "phi").
struct MapEntry {
  std::string role;
  std::string domain;
  std::string codomain;
  std::string underlying;               // phi role only
  std::vector<std::vector<Mat>> choi;   // cp role only
  Mat matrix;                           // phi role only
};

/// A named operator on a module, stored blockwise.
struct OperatorEntry {
  std::string module;
  std::vector<Mat> blocks;
};

struct InstanceFile {
  std::string name;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::map<std::string, BlockAlgebra> algebras;
  std::map<std::string, std::string> module_algebra;  // module name -> algebra
  std::map<std::string, ModuleShape> modules;
  std::map<std::string, MapEntry> maps;
  std::map<std::string, OperatorEntry> operators;

  const BlockAlgebra& algebra(const std::string& name) const;
  const ModuleShape& module(const std::string& name) const;
  CPMap cp_map(const std::string& name) const;
  PhiMap phi_map(const std::string& name) const;
  ModuleOperator module_operator(const std::string& name) const;

  /// Names of maps with the given role, sorted by name.
  std::vector<std::string> maps_with_role(const std::string& role) const;
};

InstanceFile instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const InstanceFile& inst);

/// Parses and eagerly validates: dimensions consistent, every referenced
/// name resolves, and every map referenced as an underlying map is CP.
InstanceFile parse_instance(const std::string& path);
void write_instance(const InstanceFile& inst, const std::string& path);

/// Bundled worked-example instances, keyed by their fixture file names.
std::vector<std::string> builtin_fixture_names();
InstanceFile builtin_fixture(const std::string& name);

/// Random instance generation (deterministic in the seed). Caps: block dims
/// <= 4, module heights <= 8. When codomain_heights is empty the codomain
/// module is sized to exactly fit the dilation of the generated map.
struct GenSpec {
  std::vector<int> domain_blocks{2};
  std::vector<int> codomain_blocks{2};
  std::vector<int> domain_heights{2};
  std::vector<int> codomain_heights{};
  std::uint64_t seed = 0;
  bool ordered_pair = false;  // also emit a map dominated by the first
  bool pure = false;          // identity-style instance with trivial commutant
  double tol = kDefaultTol;
};

InstanceFile generate_random(const GenSpec& spec);

}  // namespace cpmod
