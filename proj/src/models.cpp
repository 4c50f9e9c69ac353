#include "dgc/models.hpp"

#include "dgc/errors.hpp"

namespace dgc {
namespace {

Generator gen(std::string name, int degree, long action) {
  return Generator{std::move(name), degree, Rational(action), std::nullopt};
}

NamedModel finish(std::string id, ModulePtr module, std::vector<Generator> gens,
                  CocycleEntries cocycle,
                  std::vector<std::pair<int, HomologyGroup>> expected,
                  std::string source_note) {
  NamedModel m;
  m.id = std::move(id);
  m.algebra = module->algebra();
  m.module = module;
  m.complex = std::make_shared<const TwistedComplex>(module, std::move(gens),
                                                     std::move(cocycle));
  m.expected_homology = std::move(expected);
  m.source_note = std::move(source_note);
  return m;
}

HomologyGroup z() { return HomologyGroup::free(1); }
HomologyGroup zero() { return {}; }
HomologyGroup z_mod(long n) { return HomologyGroup{0, {Integer(n)}}; }

DgaPtr group_of_order_two() {
  TableDgaBuilder b(default_truncation);
  auto e = b.add_word("e", 0);
  auto g = b.add_word("g", 0);
  b.set_unit(e);
  b.set_product(g, g, {{e, 1}});
  return b.build();
}

}  // namespace

NamedModel circle_model() {
  DgaPtr a = Dga::laurent({"t"});
  ModulePtr f = DgModule::regular(a);
  std::vector<std::pair<int, HomologyGroup>> expected{{0, z()}};
  for (int k = 1; k <= 8; ++k) expected.emplace_back(k, zero());
  return finish("circle", f, {gen("M", 1, 1), gen("m", 0, 0)},
                {{{0, 1}, a->parse("t - 1")}}, std::move(expected),
                "cellular chains of the universal cover R with deck group Z");
}

NamedModel circle_twisted_model() {
  DgaPtr a = Dga::laurent({"t"});
  ModulePtr trivial = DgModule::make_explicit(a, {{"one", 0}}, {}, {});
  ModulePtr f = trivial->twisted(Rank1LocalSystem::on_generators(a, {-1}));
  return finish("circle_twisted", f, {gen("M", 1, 1), gen("m", 0, 0)},
                {{{0, 1}, a->parse("t - 1")}}, {{0, z_mod(2)}, {1, zero()}},
                "cellular chains of the circle with t acting by -1: "
                "multiplication by -2");
}

NamedModel sphere_model(int n, int truncation) {
  if (n < 2) throw InvalidDefinition("sphere model needs n >= 2");
  if (truncation < 2 * n)
    throw TruncationTooSmall("sphere model of dimension " + std::to_string(n) +
                             " needs truncation at least " +
                             std::to_string(2 * n));
  DgaPtr a = free_tensor_algebra({{"x", n - 1}}, truncation);
  ModulePtr f = DgModule::regular(a);
  std::vector<std::pair<int, HomologyGroup>> expected{{0, z()}};
  for (int k = 1; k <= truncation - 2; ++k) expected.emplace_back(k, zero());
  return finish("sphere" + std::to_string(n), f,
                {gen("M", n, 1), gen("m", 0, 0)}, {{{0, 1}, a->parse("x")}},
                std::move(expected),
                "cone of right multiplication by x on the free algebra");
}

NamedModel torus_model() {
  DgaPtr a = Dga::laurent({"t", "s"});
  ModulePtr f = DgModule::regular(a);
  CocycleEntries c{
      {{1, 3}, a->parse("t - 1")},
      {{2, 3}, a->parse("s - 1")},
      {{0, 1}, a->parse("s - 1")},
      {{0, 2}, a->parse("-t + 1")},
  };
  return finish("torus", f,
                {gen("T", 2, 2), gen("A", 1, 1), gen("B", 1, 1), gen("m", 0, 0)},
                std::move(c), {{0, z()}, {1, zero()}, {2, zero()}},
                "Koszul complex of (t - 1, s - 1) over Z[t^±1, s^±1]");
}

NamedModel rp_model(int n, RpCoefficients mode) {
  if (n < 1) throw InvalidDefinition("projective space model needs n >= 1");
  DgaPtr a = group_of_order_two();
  const std::size_t g = a->find_word("g")->as_index();
  ModulePtr f;
  std::string suffix;
  switch (mode) {
    case RpCoefficients::group_ring:
      f = DgModule::regular(a);
      break;
    case RpCoefficients::trivial:
      f = DgModule::make_explicit(a, {{"one", 0}},
                                  {{0, Word::index(g), {{0, Integer(1)}}}}, {});
      suffix = "_trivial";
      break;
    case RpCoefficients::sign:
      f = DgModule::make_explicit(a, {{"one", 0}},
                                  {{0, Word::index(g), {{0, Integer(-1)}}}}, {});
      suffix = "_sign";
      break;
  }
  std::vector<Generator> gens;
  for (int k = n; k >= 0; --k) gens.push_back(gen("x" + std::to_string(k), k, k));
  CocycleEntries c;
  for (int k = n; k >= 1; --k) {
    const std::size_t from = static_cast<std::size_t>(n - k);
    c.emplace(std::pair{from, from + 1},
              a->parse(k % 2 == 0 ? "e + g" : "e - g"));
  }
  std::vector<std::pair<int, HomologyGroup>> expected;
  for (int k = 0; k <= n; ++k) {
    HomologyGroup h;
    switch (mode) {
      case RpCoefficients::group_ring:
        h = (k == 0 || k == n) ? z() : zero();
        break;
      case RpCoefficients::trivial:
        if (k == 0)
          h = z();
        else if (k == n)
          h = k % 2 ? z() : zero();
        else
          h = k % 2 ? z_mod(2) : zero();
        break;
      case RpCoefficients::sign:
        if (k == n)
          h = k % 2 ? zero() : z();
        else
          h = k % 2 ? zero() : z_mod(2);
        break;
    }
    expected.emplace_back(k, h);
  }
  return finish("rp" + std::to_string(n) + suffix, f, std::move(gens),
                std::move(c), std::move(expected),
                mode == RpCoefficients::group_ring
                    ? "cellular chains of the double cover S^n"
                    : "cellular chains of RP^n with multiplications by "
                      "1 +- (-1)^k");
}

NamedModel hopf_model(int truncation) {
  DgaPtr a = free_tensor_algebra({{"x", 1}}, truncation);
  Word x = *a->find_word("x");
  ModulePtr f = DgModule::make_explicit(a, {{"one", 0}, {"u", 1}},
                                        {{0, x, {{1, Integer(1)}}}}, {});
  std::vector<std::pair<int, HomologyGroup>> expected{
      {0, z()}, {1, zero()}, {2, zero()}, {3, z()}, {4, zero()}};
  return finish("hopf", f, {gen("M", 2, 1), gen("m", 0, 0)},
                {{{0, 1}, a->parse("x")}}, std::move(expected),
                "homology of S^3 (two-cell complex with a 2x2 differential)");
}

std::vector<NamedModel> builtin_models() {
  return {circle_model(),
          circle_twisted_model(),
          sphere_model(2),
          sphere_model(3),
          torus_model(),
          rp_model(2),
          rp_model(3),
          rp_model(3, RpCoefficients::trivial),
          rp_model(4, RpCoefficients::sign),
          hopf_model()};
}

}  // namespace dgc
