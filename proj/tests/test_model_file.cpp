#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dgc/model_file.hpp"
#include "dgc/spectral_sequence.hpp"

using namespace dgc;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> shipped_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(DGC_MODELS_DIR))
    if (e.path().extension() == ".dgc") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

const char* const circle_text = R"([dga]
name = A
kind = laurent_group_ring
generators = t

[module]
name = F
over = A
kind = regular
box = 3

[complex]
name = S1
module = F
generators = M:1@1, m:0@0
cocycle = M,m: t - 1
)";

template <class E>
E expect_error(const std::string& text) {
  try {
    parse_model_file(text);
  } catch (const E& e) {
    return e;
  } catch (const std::exception& e) {
    FAIL("wrong exception: " << e.what());
  }
  FAIL("no exception for:\n" << text);
  throw;
}

}  // namespace

TEST_CASE("shipped files are canonical") {
  const auto files = shipped_files();
  REQUIRE(files.size() >= 8);
  for (const auto& p : files) {
    CAPTURE(p);
    const std::string text = slurp(p);
    CHECK(export_model_file(parse_model_file(text)) == text);
  }
}

TEST_CASE("built-in models survive a round trip") {
  for (const auto& m : builtin_models()) {
    CAPTURE(m.id);
    const std::string text = export_model_file(model_file_for(m, "X"));
    const ModelFile back = parse_model_file(text);
    CHECK(export_model_file(back) == text);
    const ComplexSection* c = back.find<ComplexSection>("X");
    REQUIRE(c != nullptr);
    for (const auto& [k, g] : m.expected_homology)
      CHECK(homology(*c->complex, k, k).front() == g);
  }
}

TEST_CASE("section lookup") {
  const ModelFile f = parse_model_file(circle_text);
  CHECK(f.sections().size() == 3);
  CHECK(f.find<DgaSection>("A") != nullptr);
  CHECK(f.find<ModuleSection>("A") == nullptr);
  CHECK(f.names<ComplexSection>() == std::vector<std::string>{"S1"});
  CHECK(homology(*f.find<ComplexSection>("S1")->complex, 0, 0).front() ==
        HomologyGroup::free(1));
}

TEST_CASE("unresolved reference reports its line") {
  std::string text = circle_text;
  text.replace(text.find("over = A"), 8, "over = B");
  const auto e = expect_error<UnresolvedReference>(text);
  CHECK(e.line() == 8);
  CHECK(e.column() == 8);
  CHECK(std::string(e.what()).find("line 8") != std::string::npos);
}

TEST_CASE("malformed rational") {
  std::string text = circle_text;
  text.replace(text.find("M:1@1"), 5, "M:1@3/");
  const auto e = expect_error<SyntaxError>(text);
  CHECK(e.line() == 15);
}

TEST_CASE("duplicate names") {
  std::string text = circle_text;
  text += "\n[module]\nname = S1\nover = A\nkind = regular\n";
  const auto e = expect_error<DuplicateName>(text);
  CHECK(e.line() == 19);
}

TEST_CASE("syntax errors") {
  expect_error<SyntaxError>("[dga]\nname A\n");
  expect_error<SyntaxError>("name = A\n");
  expect_error<SyntaxError>("[weird]\nname = A\n");
  expect_error<SyntaxError>("[dga]\nname = A\nkind = laurent_group_ring\ngenerators = t\ncolour = red\n");
  expect_error<SyntaxError>("[dga]\nname = A\nname = B\nkind = laurent_group_ring\n");
  std::string text = circle_text;
  text.replace(text.find("t - 1"), 5, "t - (");
  const auto e = expect_error<SyntaxError>(text);
  CHECK(e.line() == 16);
}

TEST_CASE("truncation default comes from the options") {
  const std::string text = "[dga]\nname = A\nkind = free\ngenerators = x:1\n";
  ParseOptions options;
  options.default_truncation = 5;
  const ModelFile f = parse_model_file(text, options);
  const std::string exported = export_model_file(f);
  CHECK(exported.find("truncation = 5") != std::string::npos);
}

TEST_CASE("maps and homotopies in the circle file") {
  const ModelFile f = read_model_file(std::filesystem::path(DGC_MODELS_DIR) / "circle.dgc");
  for (const auto& name : f.names<MapSection>())
    CHECK(validate_continuation(*f.find<MapSection>(name)->map).ok());
  for (const auto& name : f.names<HomotopySection>())
    CHECK(validate_homotopy(*f.find<HomotopySection>(name)->homotopy).ok());
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(read_model_file("/nonexistent/x.dgc"), SyntaxError);
}

TEST_CASE("compact key=value lines and primed names") {
  const std::string text = R"([dga]
name=A
kind=table
truncation=4
basis=e:0,x:1,x2:2
product=x*x=x2
differential=x->0
corners=x:e;x2:e

[module]
name=F
over=A
basis=one:0,u:1
action=one*x=u;u*x=0
differential=u->0

[complex]
name=C1
module=F
generators=M:2@1, m:0@0
cocycle=M,m:x

[complex]
name=C2
module=F
generators=M':2@1, m':0@0
cocycle=M',m':x

[map]
name=P
from=C1
to=C2
nu=M,M':e; m,m':e

[map]
name=Q
from=C1
to=C2
nu=M,M':e; m,m':e

[homotopy]
name=H
map0=P
map1=Q
)";
  const ModelFile f = parse_model_file(text);
  CHECK(f.names<ComplexSection>() == std::vector<std::string>{"C1", "C2"});
  const auto& c2 = *f.find<ComplexSection>("C2")->complex;
  CHECK(c2.generator(0).name == "M'");
  auto h = homology(c2, 0, 3);
  CHECK(h[0] == HomologyGroup::free(1));
  CHECK(h[3] == HomologyGroup::free(1));
  CHECK(validate_homotopy(*f.find<HomotopySection>("H")->homotopy).ok());
  // The exporter writes the canonical spacing.
  const std::string canonical = export_model_file(f);
  CHECK(canonical.find("name = A") != std::string::npos);
  CHECK(export_model_file(parse_model_file(canonical)) == canonical);
}
