#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "sphereiso/json_io.hpp"

using namespace sphereiso;

namespace {

// The CLI binary sits next to the test binaries in the build tree.
const char* kCli = "./sphereiso";

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(kCli) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Report content with the wall-clock line removed, for byte comparison.
std::string strip_wall_time(const std::string& text) {
  std::stringstream out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (line.find("wall_time_ms") == std::string::npos) out << line << "\n";
  return out.str();
}

std::string tmp_dir(const std::string& name) {
  std::string d = "cli_" + name;
  if (std::system(("rm -rf " + d + " && mkdir -p " + d).c_str()) != 0)
    throw std::runtime_error("tmp dir setup failed: " + d);
  return d;
}

}  // namespace

TEST_CASE("gen writes a loadable instance") {
  auto dir = tmp_dir("gen");
  auto r = run_cli("gen --atoms 6 --p 2 --seed 11 --out " + dir);
  REQUIRE(r.exit_code == 0);
  auto dom = space_from_json(load_json_file(dir + "/domain.json"));
  auto cod = space_from_json(load_json_file(dir + "/codomain.json"));
  CHECK(dom.size() == 6);
  CHECK(cod.size() == 6);
  auto T = operator_from_json(dom, cod, load_json_file(dir + "/operator.json"));
  CHECK(T.p == 2.0);
  auto desc = load_json_file(dir + "/oracle.json");
  CHECK(desc.at("type") == "planted");
}

TEST_CASE("extract on a planted instance passes and exits zero") {
  auto dir = tmp_dir("planted");
  REQUIRE(run_cli("gen --atoms 5 --p 1 --seed 3 --out " + dir).exit_code == 0);
  auto r = run_cli("run extract --dir " + dir + " --out " + dir + "/rep.json");
  CHECK(r.exit_code == 0);
  auto rep = load_json_file(dir + "/rep.json");
  CHECK(rep.at("pass") == true);
  CHECK(rep.at("results")[0].at("verdict") == "extendable");
  CHECK(rep.at("results")[0].at("max_deviation").get<double>() == 0.0);
}

TEST_CASE("extract detects a perturbed instance, still exiting zero") {
  // A perturbed oracle is expected to be rejected; detecting it counts
  // as a passing run.
  auto dir = tmp_dir("perturbed");
  REQUIRE(run_cli("gen --atoms 5 --p 2 --seed 5 --adversarial perturb:0.02 "
                  "--out " + dir)
              .exit_code == 0);
  auto r = run_cli("run extract --dir " + dir + " --out " + dir + "/rep.json");
  CHECK(r.exit_code == 0);
  auto rep = load_json_file(dir + "/rep.json");
  CHECK(rep.at("results")[0].at("verdict") == "rejected");
}

TEST_CASE("failing checks exit nonzero") {
  // Verifying a perturbed descriptor's operator passes (the operator file
  // itself is canonical), so break the weight on disk instead.
  auto dir = tmp_dir("broken");
  REQUIRE(run_cli("gen --atoms 4 --p 2 --seed 7 --out " + dir).exit_code == 0);
  auto op = load_json_file(dir + "/operator.json");
  for (auto& [k, v] : op.at("h").items()) {
    v = v.get<double>() * 2.0;
    break;
  }
  save_json_file(dir + "/operator.json", op);
  auto r = run_cli("run verify --dir " + dir);
  CHECK(r.exit_code == 1);
}

TEST_CASE("reports are byte-identical across runs and worker counts") {
  auto dir = tmp_dir("det");
  auto r1 = run_cli("run dist --trials 25 --seed 9 --out " + dir + "/a.json");
  REQUIRE(r1.exit_code == 0);
  int rc = std::system(("SPHEREISO_WORKERS=1 " + std::string(kCli) +
                        " run dist --trials 25 --seed 9 --out " + dir +
                        "/b.json")
                           .c_str());
  REQUIRE(rc == 0);
  CHECK(strip_wall_time(slurp(dir + "/a.json")) ==
        strip_wall_time(slurp(dir + "/b.json")));
}

TEST_CASE("sharp and homeo runs pass") {
  CHECK(run_cli("run sharp --points 3 --trials 10").exit_code == 0);
  CHECK(run_cli("run homeo --points 8 --trials 10").exit_code == 0);
}

TEST_CASE("rn exhaustive run reports zero mismatches") {
  auto dir = tmp_dir("rn");
  auto r = run_cli("run rn --exhaustive 3 --out " + dir + "/rep.json");
  CHECK(r.exit_code == 0);
  auto rep = load_json_file(dir + "/rep.json");
  CHECK(rep.at("results")[0].at("mismatches") == 0);
  CHECK(rep.at("results")[0].at("cases").get<long>() > 0);
}

TEST_CASE("serve-oracle closes the loop as an external oracle") {
  auto dir = tmp_dir("serve");
  REQUIRE(run_cli("gen --atoms 4 --p 2 --seed 13 --out " + dir).exit_code == 0);
  auto r = run_cli("run extract --dir " + dir + " --oracle-cmd \"" +
                   std::string(kCli) + " serve-oracle --dir " + dir + "\"" +
                   " --out " + dir + "/rep.json");
  CHECK(r.exit_code == 0);
  auto rep = load_json_file(dir + "/rep.json");
  CHECK(rep.at("results")[0].at("verdict") == "extendable");
}

TEST_CASE("json round trips for every file format") {
  auto sp = FiniteMeasureSpace(
      {"a", "b", "c"}, {Mass(Rat(1, 2)), Mass::infinity(), Mass(0)});
  auto j = space_to_json(sp);
  auto sp2 = space_from_json(j);
  CHECK(sp2.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(sp2.id(i) == sp.id(i));
    CHECK(sp2.weight(i) == sp.weight(i));
  }

  SubSigmaAlgebra c(sp, {0b011, 0b100}, {Mass(Rat(1, 2)), Mass(0)});
  auto c2 = partition_from_json(sp, partition_to_json(c));
  CHECK(c2.blocks == c.blocks);
  CHECK(c2.lambda == c.lambda);

  auto base = FiniteMeasureSpace::indexed({Mass(1), Mass(2)});
  LpVector f(base, {0.25, -0.5}, 2.0);
  auto f2 = vector_from_json(base, vector_to_json(f));
  CHECK(f2.values == f.values);
  CHECK(f2.p == f.p);

  auto T = canonical_weight(RegularSetIso::build(base, base, {1, 0}), 2.0);
  auto T2 = operator_from_json(base, base, operator_to_json(T));
  CHECK(T2.iso.atom_map() == T.iso.atom_map());
  CHECK(T2.h == T.h);

  SupVector sv({"x", "y"}, {1.0, 0.25});
  auto sv2 = supvector_from_json(supvector_to_json(sv));
  CHECK(sv2.points == sv.points);
  CHECK(sv2.values == sv.values);

  std::vector<std::string> X = {"x0", "x1", "x2"};
  std::vector<int> sigma = {2, 0, 1};
  auto s2 = permutation_from_json(X, X, permutation_to_json(X, X, sigma));
  CHECK(s2 == sigma);
}
