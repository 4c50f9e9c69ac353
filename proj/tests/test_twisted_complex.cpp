#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "dgc/chain_maps.hpp"
#include "dgc/errors.hpp"
#include "dgc/gauge.hpp"
#include "dgc/models.hpp"
#include "oracles.hpp"

using namespace dgc;

namespace {

HomologyGroup z() { return HomologyGroup::free(1); }

ComplexPtr permuted(const TwistedComplex& x, const std::vector<std::size_t>& order) {
  std::vector<std::size_t> where(order.size());
  std::vector<Generator> gens;
  for (std::size_t i = 0; i < order.size(); ++i) {
    where[order[i]] = i;
    gens.push_back(x.generator(order[i]));
  }
  CocycleEntries c;
  for (const auto& [xy, m] : x.cocycle()) c.emplace(std::pair{where[xy.first], where[xy.second]}, m);
  return std::make_shared<const TwistedComplex>(x.module(), std::move(gens), std::move(c));
}

}  // namespace

TEST_CASE("circle differential") {
  auto x = circle_model().complex;
  CHECK(x->differential(x->parse_chain("1|M")) == x->parse_chain("t|m - 1|m"));
  CHECK(x->differential(x->parse_chain("t^2|m")).is_zero());
  AssembledComplex w = assemble(*x, 1, 1);
  const auto& cells = w.basis(1).cells;
  auto j = std::find_if(cells.begin(), cells.end(), [&](const Cell& c) {
    return x->cell_name(c) == "1|M";
  });
  REQUIRE(j != cells.end());
  IntVector col = w.differential(1).column(static_cast<std::size_t>(j - cells.begin()));
  CHECK(w.to_chain(col, 0) == x->parse_chain("t|m - 1|m"));
}

TEST_CASE("sphere differential") {
  auto x = sphere_model(2).complex;
  CHECK(x->differential(x->parse_chain("1|M")) == x->parse_chain("x|m"));
  CHECK(x->differential(x->parse_chain("x|m")).is_zero());
  // |x^2| = 2: D(x^2 ⊗ M) = x^2.x ⊗ m with sign +.
  CHECK(x->differential(x->parse_chain("x^2|M")) == x->parse_chain("x^3|m"));
  CHECK(x->differential(x->parse_chain("x|M")) == x->parse_chain("-x^2|m"));
}

TEST_CASE("zero cocycle gives zero differentials") {
  DgaPtr a = free_tensor_algebra({{"x", 1}}, 6);
  auto x = std::make_shared<const TwistedComplex>(
      DgModule::regular(a),
      std::vector<Generator>{{"a", 1, std::nullopt, std::nullopt},
                             {"b", 0, std::nullopt, std::nullopt}},
      CocycleEntries{});
  CHECK(validate_cocycle(*x).ok());
  AssembledComplex w = assemble(*x, 0, 5);
  for (int k = 0; k <= 5; ++k) CHECK(w.differential(k).is_zero());
  auto h = homology(*x, 0, 4);
  CHECK(h[0] == z());
  for (int k = 1; k <= 4; ++k) CHECK(h[k] == HomologyGroup::free(2));
}

TEST_CASE("twisted circle against the 1x1 Smith form") {
  auto m = circle_twisted_model();
  auto h = homology(*m.complex, 0, 1);
  CHECK(h[0] == oracle::homology(IntMatrix{{-2}}, IntMatrix(0, 1)));
  CHECK(h[0] == HomologyGroup{0, {Integer(2)}});
  CHECK(h[1] == oracle::homology(IntMatrix(1, 0), IntMatrix{{-2}}));
  CHECK(h[1].is_trivial());
}

TEST_CASE("a fake middle generator breaks Maurer-Cartan") {
  DgaPtr a = free_tensor_algebra({{"x", 1}}, 8);
  auto x = std::make_shared<const TwistedComplex>(
      DgModule::regular(a),
      std::vector<Generator>{{"M", 2, Rational(2), std::nullopt},
                             {"Z", 1, Rational(1), std::nullopt},
                             {"m", 0, Rational(0), std::nullopt}},
      CocycleEntries{{{0, 2}, a->parse("x")},
                     {{0, 1}, a->parse("1")},
                     {{1, 2}, a->parse("1")}});
  ValidationReport r = validate_cocycle(*x);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].axiom == "Maurer-Cartan");
  CHECK(r.violations[0].witness == std::vector<std::string>{"M", "m"});
  CHECK(r.violations[0].residual == "1");
  CHECK_THROWS_AS(homology(*x, 0, 3), DifferentialNotSquareZero);
}

TEST_CASE("degree constraint and class labels") {
  DgaPtr a = free_tensor_algebra({{"x", 1}}, 6);
  auto bad = std::make_shared<const TwistedComplex>(
      DgModule::regular(a),
      std::vector<Generator>{{"M", 2, std::nullopt, "A"},
                             {"m", 0, std::nullopt, "B"}},
      CocycleEntries{{{0, 1}, a->parse("x^2")}});
  ValidationReport r = validate_cocycle(*bad);
  REQUIRE(r.violations.size() == 2);
  CHECK(r.violations[0].axiom == "degree");
  CHECK(r.violations[1].axiom == "class label");
}

TEST_CASE("truncation certification") {
  auto x = sphere_model(2, 12).complex;
  CHECK(certified_max_degree(*x) == 11);
  CHECK_NOTHROW(homology(*x, 0, 11));
  CHECK_THROWS_AS(homology(*x, 0, 12), TruncationExceeded);
  CHECK_THROWS_AS(sphere_model(3, 5), TruncationTooSmall);
}

TEST_CASE("filtered subcomplexes") {
  auto x = sphere_model(2).complex;
  CHECK(filtered_subcomplex(*x, ExtendedRational::infinity()).generators().size() == 2);
  TwistedComplex empty = filtered_subcomplex(*x, ExtendedRational(Rational(0)));
  CHECK(empty.generators().empty());
  for (const auto& g : homology(empty, 0, 3)) CHECK(g.is_trivial());
  TwistedComplex low = filtered_subcomplex(*x, ExtendedRational(Rational(1, 2)));
  REQUIRE(low.generators().size() == 1);
  CHECK(low.generator(0).name == "m");
  auto h = homology(low, 0, 6);
  auto f = module_homology(*x->module(), 0, 6);
  CHECK(h == f);
}

TEST_CASE("filtration needs monotone actions") {
  auto m = circle_model();
  std::vector<Generator> gens = m.complex->generators();
  std::swap(gens[0].action, gens[1].action);
  TwistedComplex flipped(m.module, gens, m.complex->cocycle());
  CHECK_THROWS_AS(filtered_subcomplex(flipped, ExtendedRational::infinity()),
                  NotActionMonotone);
  gens[0].action.reset();
  TwistedComplex missing(m.module, gens, m.complex->cocycle());
  CHECK_THROWS_AS(spectral_number(missing, missing.parse_chain("1|m"), 1),
                  ActionsMissing);
}

TEST_CASE("spectral numbers") {
  auto s2 = sphere_model(2).complex;
  CHECK(spectral_number(*s2, s2->parse_chain("x|m"), Rational(1, 2)) ==
        ExtendedRational(Rational(1)));
  CHECK(spectral_number(*s2, s2->parse_chain("x|m"), Rational(3, 2)) ==
        ExtendedRational(Rational(3, 2)));
  CHECK(spectral_number(*s2, s2->parse_chain("1|m"), Rational(1, 2)) ==
        ExtendedRational::infinity());
  auto s1 = circle_model().complex;
  CHECK(spectral_number(*s1, s1->parse_chain("1|m"), Rational(1, 2)) ==
        ExtendedRational::infinity());
  CHECK(spectral_number(*s1, s1->parse_chain("t|m - 1|m"), Rational(1, 2)) ==
        ExtendedRational(Rational(1)));
  CHECK_THROWS_AS(spectral_number(*s2, s2->parse_chain("1|M"), Rational(2)),
                  NotACycle);
  CHECK_THROWS_AS(spectral_number(*s2, s2->parse_chain("x|m"), Rational(0)),
                  NotACycle);
}

TEST_CASE("spectral numbers over Z and Q differ on torsion") {
  auto x = circle_twisted_model().complex;
  // 2 ⊗ m is a boundary of M; 1 ⊗ m is one only over Q.
  CHECK(spectral_number(*x, x->parse_chain("one|m"), Rational(1, 2)) ==
        ExtendedRational::infinity());
  CHECK(spectral_number(*x, x->parse_chain("one|m"), Rational(1, 2),
                        GroundRing::rationals) == ExtendedRational(Rational(1)));
  CHECK(spectral_number(*x, x->parse_chain("2*one|m"), Rational(1, 2)) ==
        ExtendedRational(Rational(1)));
}

TEST_CASE("spectrality on random complexes") {
  GaugeGenerator gen(7);
  GaugeOptions opts;
  for (int i = 0; i < 30; ++i) {
    GaugeInstance inst = gen.instance(opts);
    const TwistedComplex& x = *inst.conjugate;
    AssembledComplex w = assemble(x, 0, 6);
    std::set<Rational> actions;
    for (const auto& g : x.generators()) actions.insert(*g.action);
    for (int k = 0; k <= 5; ++k) {
      Subquotient h = homology_presentation(w, k);
      for (const auto& v : h.generators()) {
        Chain c = w.to_chain(v, k);
        Rational b0 = 0;
        for (const auto& [cell, coeff] : c.terms())
          b0 = std::max(b0, *x.generator(cell.generator).action);
        b0 += Rational(1, 4);
        ExtendedRational s = spectral_number(x, c, b0);
        CHECK((!s.is_finite() || s == ExtendedRational(b0) ||
               actions.count(s.value())));
      }
    }
  }
}

TEST_CASE("homology does not depend on generator order") {
  GaugeGenerator gen(11);
  std::mt19937_64 rng(5);
  for (auto kind : {GaugeAlgebra::polynomial, GaugeAlgebra::free_with_differential,
                    GaugeAlgebra::laurent}) {
    GaugeOptions opts;
    opts.algebra = kind;
    for (int i = 0; i < 10; ++i) {
      GaugeInstance inst = gen.instance(opts);
      std::vector<std::size_t> order(inst.conjugate->generators().size());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      auto p = permuted(*inst.conjugate, order);
      CHECK(validate_cocycle(*p).ok());
      CHECK(homology(*inst.conjugate, 0, 5) == homology(*p, 0, 5));
    }
  }
}

TEST_CASE("functoriality of filtration inclusions on the sphere") {
  auto x = sphere_model(2).complex;
  auto level = [&](ExtendedRational b) {
    return std::make_shared<const TwistedComplex>(filtered_subcomplex(*x, b));
  };
  ComplexPtr low = level(ExtendedRational(Rational(1, 2)));
  ComplexPtr mid = level(ExtendedRational(Rational(1)));
  ComplexPtr top = level(ExtendedRational::infinity());
  DgaPtr a = x->algebra();
  auto inclusion = [&](const ComplexPtr& s, const ComplexPtr& t) {
    CocycleEntries e;
    for (std::size_t i = 0; i < s->generators().size(); ++i)
      e.emplace(std::pair{i, t->generator_index(s->generator(i).name)}, a->unit());
    return ContinuationCocycle(s, t, e);
  };
  auto i12 = inclusion(low, mid);
  auto i23 = inclusion(mid, top);
  auto i13 = inclusion(low, top);
  for (const auto* nu : {&i12, &i23, &i13}) CHECK(validate_continuation(*nu).ok());
  auto h12 = induced_on_homology(i12, 0, 6);
  auto h23 = induced_on_homology(i23, 0, 6);
  auto h13 = induced_on_homology(i13, 0, 6);
  for (int k = 0; k <= 6; ++k) {
    GroupMap composed = h23[k].compose_after(h12[k]);
    composed.normalize();
    CHECK(composed == h13[k]);
    CHECK(is_isomorphism(h12[k]));
  }
  CHECK(is_isomorphism(h13[0]));
  CHECK(h13[1].target_orders.empty());
}
