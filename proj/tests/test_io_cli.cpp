#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "qig/families.hpp"
#include "qig/io.hpp"

using namespace qig;
namespace fs = std::filesystem;

namespace {

const std::string kCli = QIG_CLI_PATH;
const std::string kSpecs = QIG_SPECS_DIR;
const fs::path kWork = QIG_TEST_WORKDIR;

std::string spec(const char* name) { return kSpecs + "/" + name; }

int run(const std::string& args, const std::string& env = "") {
  fs::create_directories(kWork);
  const std::string cmd = env + " \"" + kCli + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json report(const std::string& name) { return read_json_file((kWork / name).string()); }

std::string out(const std::string& name) { return "--out \"" + (kWork / name).string() + "\""; }

}  // namespace

TEST_CASE("complex and matrix JSON round trip") {
  const ComplexMatrix m{{1.0, cplx{0.5, -0.25}}, {cplx{0.5, 0.25}, 2.0}};
  const auto back = complex_matrix_from_json(to_json(m), "m");
  CHECK((back - m).frobenius_norm() == 0.0);
  CHECK(to_json(cplx{1.5, -2.0}) == json::array({1.5, -2.0}));
  CHECK(complex_from_json(json(3.0), "x") == cplx{3.0, 0.0});

  const RealMatrix re{{2.0, 0.1}, {0.1, 1.0}}, im{{0.0, -0.3}, {0.3, 0.0}};
  const QFisherMatrix f(FisherKind::rld, re, im);
  const auto g = fisher_from_json(to_json(f));
  CHECK(g.kind() == FisherKind::rld);
  CHECK((g.imag_part() - im).frobenius_norm() == 0.0);
  CHECK(number(std::numeric_limits<double>::infinity()) == json("inf"));
}

TEST_CASE("parse errors name the offending field") {
  try {
    complex_matrix_from_json(json::parse(R"([[1, 2], [3]])"), "rho");
    FAIL("ragged matrix accepted");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("rho") != std::string::npos);
  }
  try {
    parse_family_spec(json::parse(R"({"kind":"bloch_rotation","r":1.5})"));
    FAIL("r = 1.5 accepted");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("'r'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_family_spec(json::parse(R"({"kind":"nope"})")), InvalidArgument);
  CHECK_THROWS_AS(state_from_json(json::parse(R"({"rho":[[0.6,0],[0,0.6]]})"), "rho"), InvalidArgument);
}

TEST_CASE("family specs re-parse to a digest-equal spec") {
  for (const char* name : {"bloch.json", "bloch_grid.json", "fixed_basis.json", "simplex.json", "qubit_pair.json", "gaussian.json"}) {
    CAPTURE(name);
    const auto parsed = parse_family_spec(read_json_file(spec(name)));
    const json canonical = to_json(parsed);
    const auto again = parse_family_spec(canonical);
    CHECK(digest(to_json(again)) == digest(canonical));
  }
  CHECK(digest(json{{"a", 1}}) != digest(json{{"a", 2}}));
  CHECK(digest(json{{"a", 1}}).size() == 16);
}

TEST_CASE("cli fisher reports the Bloch values") {
  REQUIRE(run("fisher --family \"" + spec("bloch.json") + "\" --theta 0 " + out("fisher.json")) == 0);
  const auto r = report("fisher.json");
  CHECK(r["pass"] == true);
  CHECK(r["subcommand"] == "fisher");
  const auto& res = r["results"][0];
  CHECK(std::abs(res["SLD"]["real_part"][0][0].get<double>() - 0.64) <= 1e-12);
  CHECK(std::abs(res["RLD"]["real_part"][0][0].get<double>() - 0.64 / 0.36) <= 1e-12);
  CHECK(res["RLD"].contains("tolerance"));
  // the echoed input re-parses to the same spec
  CHECK(digest(to_json(parse_family_spec(r["input"]))) == r["input_digest"]);
}

TEST_CASE("cli fisher on a two-parameter family") {
  REQUIRE(run("fisher --family \"" + spec("qubit_pair.json") + "\" " + out("pair.json")) == 0);
  const auto res = report("pair.json")["results"][0];
  CHECK(res["sandwich"]["RLD_minus_KM_min_eig"].get<double>() >= -1e-8);
  CHECK(res["imag_commutator"]["max_discrepancy"].get<double>() <= 1e-12);
}

TEST_CASE("cli divergence of a state against itself is zero") {
  REQUIRE(run("divergence --rho \"" + spec("rho_a.json") + "\" --sigma \"" + spec("rho_a.json") + "\" " + out("div.json")) == 0);
  const auto res = report("div.json")["results"];
  for (const char* k : {"umegaki", "rld_closed", "rld_integral", "two_point_kl"})
    CHECK(std::abs(res[k].get<double>()) <= 1e-12);
}

TEST_CASE("cli exit codes") {
  std::ofstream(kWork / "bad.json") << R"({"kind":"bloch_rotation","r":1.5})";
  CHECK(run("fisher --family \"" + (kWork / "bad.json").string() + "\" " + out("bad_report.json")) == 1);
  CHECK(run("fisher --family \"" + (kWork / "missing.json").string() + "\" " + out("bad_report.json")) == 1);
  CHECK(run("nonsense") != 0);

  // too small a Fock cutoff for sigma2 = 3: a genuine tolerance violation
  CHECK(run("gaussian --sigma2 3 --hbar 1 --truncation 20 " + out("gauss_small.json")) == 2);
  CHECK(report("gauss_small.json")["pass"] == false);

  CHECK(run("global --family \"" + spec("fixed_basis.json") + "\" " + out("global.json")) == 0);
}

TEST_CASE("cli runs are deterministic and honour the seed override") {
  const std::string args = "monotone --trials 10 --dims 2,3 --seed 5 ";
  REQUIRE(run(args + out("m1.json")) == 0);
  REQUIRE(run(args + out("m2.json")) == 0);
  CHECK(report("m1.json")["results"] == report("m2.json")["results"]);

  REQUIRE(run("monotone --trials 10 --dims 2,3 --seed 99 " + out("m3.json"), "QIG_SEED=5") == 0);
  CHECK(report("m3.json")["seed"] == 5);
  CHECK(report("m3.json")["results"] == report("m1.json")["results"]);
}
