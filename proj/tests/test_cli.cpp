#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = dgc::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string model(const std::string& name) {
  return (std::filesystem::path(DGC_MODELS_DIR) / name).string();
}

std::string golden(const std::string& name) {
  std::ifstream in(std::filesystem::path(DGC_GOLDEN_DIR) / name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("homology of the two-sphere file") {
  const Result r = run({"homology", model("sphere2.dgc"), "--complex", "S2", "--degrees", "0..2"});
  CHECK(r.code == 0);
  CHECK(r.out == "degree  homology\n0       Z\n1       0\n2       0\n");
}

TEST_CASE("hopf page two") {
  const Result r = run({"ss", model("hopf.dgc"), "--complex", "HOPF", "--page", "2"});
  REQUIRE(r.code == 0);
  for (const char* row : {"0  0  Z", "0  1  Z", "2  0  Z", "2  1  Z"}) CHECK(contains(r.out, row));
  CHECK(contains(r.out, "(2,0)  (0,1)  [[1]]   yes"));
  const Result j = run({"ss", model("hopf.dgc"), "--complex", "HOPF", "--page", "2", "--format",
                        "jsonl"});
  CHECK(j.out == golden("hopf_ss2.jsonl"));
}

TEST_CASE("broken cocycle fails validation") {
  const Result r = run({"validate", model("broken_cocycle.dgc"), "--format", "jsonl"});
  CHECK(r.code == 1);
  CHECK(contains(r.out, R"("section":"complex","name":"BROKEN","ok":false)"));
  CHECK(contains(r.out, R"("witness":["M","m"])"));
  CHECK(r.out == golden("broken_validate.jsonl"));
}

TEST_CASE("jsonl output is stable") {
  const std::vector<std::string> args{"homology", model("torus.dgc"), "--complex", "T2",
                                      "--degrees", "0..3", "--format", "jsonl"};
  const Result a = run(args);
  const Result b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == golden("torus_homology.jsonl"));
}

TEST_CASE("maps, homotopies and the criterion") {
  const std::string circle = model("circle.dgc");
  CHECK(run({"validate", circle}).code == 0);
  CHECK(run({"map", circle, "--name", "SHIFT", "--check"}).code == 0);
  CHECK(run({"homotopy", circle, "--name", "H", "--check"}).code == 0);
  const Result applied = run({"map", circle, "--name", "SHIFT", "--apply", "1|m"});
  CHECK(contains(applied.out, "t|m"));
  const Result induced =
      run({"map", circle, "--name", "SHIFT", "--induced", "--degrees", "0..0", "--format", "jsonl"});
  CHECK(contains(induced.out, R"("matrix":[[1]])"));
  const Result yes = run({"criterion", circle, "--a", "ZERO", "--b", "ID", "--degree", "0"});
  CHECK(contains(yes.out, "true"));
  const Result no = run({"criterion", circle, "--a", "ID", "--b", "ZERO", "--degree", "0",
                         "--mode", "q", "--format", "jsonl"});
  CHECK(contains(no.out, R"("result":false)"));
}

TEST_CASE("spectral invariant") {
  const Result r = run({"spectral-invariant", model("circle.dgc"), "--complex", "S1", "--class",
                        "t|m - 1|m", "--level", "1", "--format", "jsonl"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, R"("value":"1")"));
}

TEST_CASE("export matches the shipped file") {
  const Result r = run({"export", "--model", "hopf"});
  CHECK(r.code == 0);
  std::ifstream in(model("hopf.dgc"));
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(r.out == ss.str());
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"homology", model("sphere2.dgc"), "--complex", "S2"}).code == 2);
  CHECK(run({"homology", model("sphere2.dgc"), "--complex", "S2", "--degrees", "3"}).code == 2);
  CHECK(run({"homology", model("sphere2.dgc"), "--complex", "NOPE", "--degrees", "0..1"}).code ==
        2);
  CHECK(run({"export", "--model", "klein"}).code == 2);
  const Result missing = run({"validate", model("absent.dgc")});
  CHECK(missing.code == 1);
  CHECK_FALSE(missing.err.empty());
  CHECK(run({"map", model("circle.dgc"), "--name", "ID"}).code == 2);
}

TEST_CASE("truncation from the environment") {
  ::setenv("DGC_TRUNCATION", "bad", 1);
  CHECK(run({"validate", model("hopf.dgc")}).code == 2);
  ::setenv("DGC_TRUNCATION", "3", 1);
  CHECK(run({"validate", model("hopf.dgc")}).code == 0);
  ::unsetenv("DGC_TRUNCATION");
}
