#include "cpmod/instance.hpp"
#include "cpmod/radon_nikodym.hpp"
#include "cpmod/verify.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

using namespace cpmod;
using nlohmann::json;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(CPMOD_FIXTURE_DIR) + "/" + name;
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/cpmod_test_") + name;
}

// Runs the command line tool, captures stdout, returns the exit status.
int run_cli(const std::string& args, std::string* output = nullptr) {
  std::string cmd = std::string(CPMOD_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string captured;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    captured.append(buf.data(), got);
  int status = pclose(pipe);
  if (output) *output = captured;
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("bundled fixture files parse and match the built-in instances") {
  for (const std::string& name : builtin_fixture_names()) {
    InstanceFile from_file = parse_instance(fixture_path(name + ".json"));
    InstanceFile built_in = builtin_fixture(name);
    CHECK(instance_to_json(from_file) == instance_to_json(built_in));
  }
}

TEST_CASE("parse then serialize is the identity") {
  for (const std::string& name : builtin_fixture_names()) {
    std::string path = temp_path(name + "_roundtrip.json");
    write_instance(builtin_fixture(name), path);
    InstanceFile parsed = parse_instance(path);
    std::string path2 = temp_path(name + "_roundtrip2.json");
    write_instance(parsed, path2);
    std::ifstream a(path), b(path2);
    std::string sa((std::istreambuf_iterator<char>(a)),
                   std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)),
                   std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    std::remove(path.c_str());
    std::remove(path2.c_str());
  }
}

TEST_CASE("parse diagnostics are distinct") {
  auto write_text = [](const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
  };

  std::string bad_json = temp_path("bad.json");
  write_text(bad_json, "{ not json");
  CHECK_THROWS_WITH_AS(parse_instance(bad_json),
                       doctest::Contains("malformed JSON"), Error);

  json j = instance_to_json(builtin_fixture("example_3_4"));
  j["modules"]["F"]["heights"] = {3};  // no longer matches the map matrices
  std::string bad_dims = temp_path("bad_dims.json");
  write_text(bad_dims, j.dump());
  CHECK_THROWS_WITH_AS(parse_instance(bad_dims),
                       doctest::Contains("dimension mismatch"), Error);

  json k = instance_to_json(builtin_fixture("example_3_4"));
  k["maps"]["phi"]["choi"][0][0][0][0] = {-5.0, 0.0};  // negative eigenvalue
  std::string bad_cp = temp_path("bad_cp.json");
  write_text(bad_cp, k.dump());
  CHECK_THROWS_WITH_AS(parse_instance(bad_cp),
                       doctest::Contains("not completely positive"), Error);

  json m = instance_to_json(builtin_fixture("example_3_4"));
  m["maps"]["phi"]["choi"][0][0][0][0] = "oops";
  std::string bad_entry = temp_path("bad_entry.json");
  write_text(bad_entry, m.dump());
  CHECK_THROWS_WITH_AS(parse_instance(bad_entry),
                       doctest::Contains("[re, im]"), Error);

  for (const std::string& p : {bad_json, bad_dims, bad_cp, bad_entry})
    std::remove(p.c_str());
}

TEST_CASE("random generation is deterministic and capped") {
  GenSpec spec;
  spec.seed = 5;
  InstanceFile a = generate_random(spec);
  InstanceFile b = generate_random(spec);
  CHECK(instance_to_json(a) == instance_to_json(b));
  CHECK_NOTHROW(a.cp_map("phi").validate());
  CHECK(phi_map_check(a.phi_map("Phi"), 1e-8));

  GenSpec too_big;
  too_big.domain_blocks = {5};
  CHECK_THROWS_AS(generate_random(too_big), Error);
  GenSpec too_tall;
  too_tall.domain_heights = {9, 1};
  too_tall.domain_blocks = {2, 2};
  CHECK_THROWS_AS(generate_random(too_tall), Error);
}

TEST_CASE("generated ordered pairs really are ordered") {
  GenSpec spec;
  spec.seed = 1;
  spec.ordered_pair = true;
  InstanceFile inst = generate_random(spec);
  CPMap phi = inst.cp_map("phi");
  CPMap psi = inst.cp_map("psi");
  CHECK(cp_order_leq(psi, phi, 1e-8));
  CHECK(phi_map_check(inst.phi_map("Psi"), 1e-8));
}

TEST_CASE("generated pure instances have trivial commutant") {
  GenSpec spec;
  spec.seed = 2;
  spec.pure = true;
  InstanceFile inst = generate_random(spec);
  CHECK(is_pure(inst.phi_map("Phi"), 1e-9));
}

TEST_CASE("verification report lists every check once") {
  VerificationReport report = run_verification(3, 1, 1e-9);
  CHECK(report.checks.size() == 10);
  for (size_t i = 0; i < report.checks.size(); ++i)
    for (size_t j = i + 1; j < report.checks.size(); ++j)
      CHECK(report.checks[i].name != report.checks[j].name);
  json j = report_to_json(report, false);
  CHECK(j["schema"] == 1);
  CHECK(j["checks"].size() == 10);
}

TEST_CASE("cli: verdicts, exit codes, and determinism") {
  std::string out;
  CHECK(run_cli("check-cp " + fixture_path("example_3_5.json"), &out) == 0);
  CHECK(out.find("completely positive: true") != std::string::npos);

  CHECK(run_cli("compare " + fixture_path("example_3_4.json"), &out) == 0);
  CHECK(out.find("equivalent: true") != std::string::npos);

  CHECK(run_cli("purity " + fixture_path("example_3_4.json"), &out) == 0);

  // missing file and unknown subcommand are input errors
  CHECK(run_cli("check-cp /nonexistent.json") == 2);
  CHECK(run_cli("frobnicate") != 0);

  // a non-cp map fails check-cp with exit 1
  json j = instance_to_json(builtin_fixture("example_3_4"));
  j["maps"].erase("Phi");
  j["maps"].erase("Psi");
  j["maps"]["phi"]["choi"][0][0][1][2] = {1.0, 0.0};  // transpose-like defect
  j["maps"]["phi"]["choi"][0][0][2][1] = {1.0, 0.0};
  j["maps"]["phi"]["choi"][0][0][1][1] = {0.0, 0.0};
  std::string non_cp = temp_path("non_cp.json");
  {
    std::ofstream f(non_cp);
    f << j.dump();
  }
  std::string verdict;
  CHECK(run_cli("check-cp " + non_cp, &verdict) == 1);
  CHECK(verdict.find("completely positive: false") != std::string::npos);
  std::remove(non_cp.c_str());

  // byte-identical machine output on repeated runs
  std::string gen_args = "gen " + temp_path("gen.json") + " --seed 9";
  CHECK(run_cli(gen_args) == 0);
  std::ifstream g1(temp_path("gen.json"));
  std::string first((std::istreambuf_iterator<char>(g1)),
                    std::istreambuf_iterator<char>());
  CHECK(run_cli(gen_args) == 0);
  std::ifstream g2(temp_path("gen.json"));
  std::string second((std::istreambuf_iterator<char>(g2)),
                     std::istreambuf_iterator<char>());
  CHECK(first == second);
  CHECK(!first.empty());
  std::remove(temp_path("gen.json").c_str());

  std::string ja, jb;
  std::string rn_args =
      "rn " + fixture_path("example_3_5.json") + " --json";
  CHECK(run_cli(rn_args, &ja) == 0);
  CHECK(run_cli(rn_args, &jb) == 0);
  CHECK(ja == jb);
  CHECK(json::parse(ja)["schema"] == 1);
}
