#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "qperf/cli.hpp"
#include "qperf/complex.hpp"

using namespace qperf;
using nlohmann::json;

namespace {

struct RunResult {
  int code = 0;
  std::string out, err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult r;
  r.code = cli_run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("digest matches the reference vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  // Spills into a second block: 56 bytes of padding do not fit after 448 bits.
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("canonical rendering sorts keys and ends with a newline") {
  json j;
  j["zeta"] = 1;
  j["alpha"] = json::array({1, 2});
  std::string text = canonical_json(j);
  CHECK(text.find("alpha") < text.find("zeta"));
  CHECK(text.back() == '\n');
}

TEST_CASE("usage and input errors exit one") {
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"frobnicate", "--algebra", corpus_path("a2.alg")}).code == 1);
  CHECK(run_cli({"basis"}).code == 1);  // --algebra is required
  CHECK(run_cli({"basis", "--algebra", corpus_path("a2.alg"), "--bogus"}).code == 1);
  CHECK(run_cli({"basis", "--algebra", corpus_path("no_such_file.alg")}).code == 1);

  std::ofstream bad("cli_bad_input.alg", std::ios::binary);
  bad << "vertex x\narrow a x\n";  // arrow needs label, source and target
  bad.close();
  RunResult r = run_cli({"basis", "--algebra", "cli_bad_input.alg"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("help request exits zero") {
  RunResult r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("enumerate-tilting") != std::string::npos);
}

TEST_CASE("basis report on the one-vertex algebra") {
  RunResult r = run_cli({"basis", "--algebra", corpus_path("empty.alg")});
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["schema"] == 1);
  CHECK(rep["tool"] == "qperf");
  CHECK(rep["field"] == "F101");
  CHECK(rep["truncated"] == false);
  CHECK(rep["timing_ms"] == 0);
  CHECK(rep["input_sha256"] == sha256_hex(slurp(corpus_path("empty.alg"))));
  CHECK(rep["command"][0] == "basis");
  CHECK(rep["payload"]["dim"] == 1);
  CHECK(rep["payload"]["vertices"] == json::array({"x"}));
  CHECK(rep["payload"]["arrows"].empty());
}

TEST_CASE("reports are byte-identical across runs") {
  std::vector<std::string> args = {"enumerate-tilting", "--algebra",
                                   corpus_path("ex211.alg"), "--seed", "777"};
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.err == b.err);

  // The --out file carries the same payload the stream run produced.
  std::vector<std::string> file_args = args;
  file_args.push_back("--out");
  file_args.push_back("cli_tilting_report.json");
  RunResult c = run_cli(file_args);
  REQUIRE(c.code == 0);
  CHECK(c.out.empty());
  json from_file = json::parse(slurp("cli_tilting_report.json"));
  json from_stream = json::parse(a.out);
  CHECK(from_file["payload"] == from_stream["payload"]);
  CHECK(from_file["input_sha256"] == from_stream["input_sha256"]);
}

TEST_CASE("tilting enumeration through the front end") {
  RunResult r =
      run_cli({"enumerate-tilting", "--algebra", corpus_path("ex211.alg")});
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["payload"]["count"] == 3);
  CHECK(rep["payload"]["truncated"] == false);
  CHECK(rep["payload"]["unknown_excluded"] == 0);

  // The dumped complexes parse back into honest objects.
  AlgebraBasis A = load_algebra("ex211.alg");
  for (const json& jx : rep["payload"]["objects"]) {
    PerfectComplex X = complex_from_json(A, jx);
    CHECK_NOTHROW(X.validate());
    CHECK(is_exceptional(X));
  }
}

TEST_CASE("bounded exceptional sweep reports truncation with exit three") {
  RunResult r = run_cli({"enumerate-exceptional", "--algebra",
                         corpus_path("ex211.alg"), "--max-length", "3",
                         "--max-mult", "2"});
  CHECK(r.code == 3);
  json rep = json::parse(r.out);
  CHECK(rep["payload"]["count"] == 3);
  CHECK(rep["payload"]["truncated"] == true);
  CHECK(rep["truncated"] == true);
}

TEST_CASE("conclusions verb passes the two-loop example") {
  RunResult r = run_cli({"conclusions", "--algebra", corpus_path("ex211.alg")});
  CHECK(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["payload"]["all_pass"] == true);
  CHECK(rep["payload"]["qualifying"] == json::array({"x", "y"}));
  CHECK(r.err.find("PASS") != std::string::npos);
}

TEST_CASE("endo verb reproduces the reconstruction dimensions") {
  RunResult r = run_cli({"endo", "--algebra", corpus_path("ex211.alg")});
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  REQUIRE(rep["payload"]["count"] == 3);
  std::vector<int> dims;
  for (const json& t : rep["payload"]["tiltings"])
    dims.push_back(t["endo"]["dim"].get<int>());
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<int>{5, 8, 8});
}

TEST_CASE("field override changes the report field") {
  RunResult r = run_cli({"basis", "--algebra", corpus_path("a2.alg"), "--field",
                         "Q"});
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["field"] == "Q");
  CHECK(rep["payload"]["dim"] == 3);
}

TEST_CASE("coxeter verb carries the hereditary characteristic polynomial") {
  RunResult r = run_cli({"coxeter", "--algebra", corpus_path("kronecker.alg")});
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["payload"]["char_poly_ascending"] == json::array({"1", "-2", "1"}));
  CHECK(rep["payload"]["char_poly_integral"] == true);
  CHECK(rep["payload"]["unimodular"] == true);
}
