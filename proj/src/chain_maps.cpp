#include "dgc/chain_maps.hpp"

#include <algorithm>

#include "dgc/errors.hpp"

namespace dgc {
namespace {

Integer sign_of(int degree) { return degree % 2 == 0 ? 1 : -1; }

template <typename F>
void for_row(const CocycleEntries& entries, std::size_t x, F&& f) {
  for (auto it = entries.lower_bound({x, 0});
       it != entries.end() && it->first.first == x; ++it)
    f(it->first.second, it->second);
}

AlgebraElement lookup(const CocycleEntries& entries, std::size_t x,
                      std::size_t y) {
  auto it = entries.find({x, y});
  return it == entries.end() ? AlgebraElement() : it->second;
}

CocycleEntries drop_zeros(CocycleEntries entries, const Dga& a) {
  CocycleEntries out;
  for (auto& [xy, v] : entries) {
    if (v.is_zero()) continue;
    a.check_member(v);
    out.emplace(xy, std::move(v));
  }
  return out;
}

void check_indices(const CocycleEntries& entries, const TwistedComplex& s,
                   const TwistedComplex& t) {
  for (const auto& [xy, v] : entries)
    if (xy.first >= s.generators().size() || xy.second >= t.generators().size())
      throw InvalidDefinition("map entry refers to an unknown generator");
}

/// sum over cells of sign(|a|) a.e(x, y) ⊗ y, with `signed_by_degree`
/// selecting the (-1)^{|a|} factor.
std::optional<Chain> apply_entries(const DgModule& f, const CocycleEntries& e,
                                   const Chain& z, bool signed_by_degree) {
  Chain out;
  for (const auto& [c, v] : z.terms()) {
    const ModuleElement a = f.element(c.word);
    const Integer s = signed_by_degree ? sign_of(f.word(c.word).degree) * v : v;
    bool ok = true;
    for_row(e, c.generator, [&](std::size_t y, const AlgebraElement& n) {
      if (!ok) return;
      auto an = f.try_act(a, n);
      if (!an) {
        ok = false;
        return;
      }
      for (const auto& [w, x] : an->terms()) out.add_term({w, y}, s * x);
    });
    if (!ok) return std::nullopt;
  }
  return out;
}

std::string describe_degree_problem(const Dga& a, const AlgebraElement& v,
                                    int expected) {
  if (expected < 0)
    return "entry " + a.format(v) + " where the degree would be " +
           std::to_string(expected) + " < 0";
  return "entry " + a.format(v) + " is not homogeneous of degree " +
         std::to_string(expected);
}

Chain translate(const Chain& z, const DgModule& from, const DgModule& to) {
  if (&from == &to) return z;
  Chain out;
  for (const auto& [c, v] : z.terms()) {
    auto w = to.find_word(from.word(c.word).name);
    if (!w) throw TruncationExceeded("cell has no counterpart in the larger box");
    out.add_term({*w, c.generator}, v);
  }
  return out;
}

ComplexPtr over_module(const TwistedComplex& x, ModulePtr f) {
  return std::make_shared<const TwistedComplex>(std::move(f), x.generators(),
                                                x.cocycle());
}

}  // namespace

// ---------------------------------------------------------------------------
// ContinuationCocycle

ContinuationCocycle::ContinuationCocycle(ComplexPtr source, ComplexPtr target,
                                         CocycleEntries entries)
    : source_(std::move(source)), target_(std::move(target)) {
  if (source_->module() != target_->module())
    throw MixedAlgebra("continuation cocycle between complexes over different "
                       "modules");
  entries_ = drop_zeros(std::move(entries), *source_->algebra());
  check_indices(entries_, *source_, *target_);
}

ContinuationCocycle ContinuationCocycle::identity(const ComplexPtr& x) {
  CocycleEntries e;
  for (std::size_t i = 0; i < x->generators().size(); ++i)
    e.emplace(std::pair{i, i}, x->algebra()->unit());
  return ContinuationCocycle(x, x, std::move(e));
}

AlgebraElement ContinuationCocycle::entry(std::size_t x, std::size_t y) const {
  return lookup(entries_, x, y);
}

std::optional<AlgebraElement> continuation_residual(
    const ContinuationCocycle& nu, std::size_t x, std::size_t y) {
  const TwistedComplex& s = *nu.source();
  const TwistedComplex& t = *nu.target();
  const Dga& a = *s.algebra();
  AlgebraElement r = a.differential(nu.entry(x, y));
  bool ok = true;
  for_row(s.cocycle(), x, [&](std::size_t z, const AlgebraElement& m) {
    AlgebraElement n = nu.entry(z, y);
    if (n.is_zero() || !ok) return;
    auto p = a.try_multiply(m, n);
    if (!p) ok = false;
    else r -= *p;
  });
  const int dx = s.generator(x).degree;
  for_row(nu.entries(), x, [&](std::size_t z, const AlgebraElement& n) {
    AlgebraElement m = t.entry(z, y);
    if (m.is_zero() || !ok) return;
    auto p = a.try_multiply(n, m);
    if (!p) ok = false;
    else r -= sign_of(dx - t.generator(z).degree - 1) * *p;
  });
  if (!ok) return std::nullopt;
  return r;
}

ValidationReport validate_continuation(const ContinuationCocycle& nu) {
  ValidationReport report;
  const TwistedComplex& s = *nu.source();
  const TwistedComplex& t = *nu.target();
  const Dga& a = *s.algebra();
  for (const auto& [xy, v] : nu.entries()) {
    const Generator& x = s.generator(xy.first);
    const Generator& y = t.generator(xy.second);
    const int expected = x.degree - y.degree;
    if (expected < 0 || !a.is_homogeneous_of_degree(v, expected))
      report.add("degree", {x.name, y.name},
                 describe_degree_problem(a, v, expected));
    if (x.class_label != y.class_label)
      report.add("class label", {x.name, y.name},
                 "entry joins generators of different classes");
  }
  for (std::size_t x = 0; x < s.generators().size(); ++x)
    for (std::size_t y = 0; y < t.generators().size(); ++y) {
      auto r = continuation_residual(nu, x, y);
      if (r && !r->is_zero())
        report.add("continuation identity",
                   {s.generator(x).name, t.generator(y).name}, a.format(*r));
    }
  return report;
}

std::optional<Chain> try_apply(const ContinuationCocycle& nu, const Chain& z) {
  return apply_entries(*nu.source()->module(), nu.entries(), z, false);
}

Chain apply(const ContinuationCocycle& nu, const Chain& z) {
  auto image = try_apply(nu, z);
  if (!image)
    throw TruncationExceeded("image of " + nu.source()->format(z) +
                             " leaves the representable range of the module");
  auto dz = nu.source()->try_differential(z);
  std::optional<Chain> lhs = dz ? try_apply(nu, *dz) : std::nullopt;
  auto rhs = nu.target()->try_differential(*image);
  if (lhs && rhs && *lhs != *rhs)
    throw ChainMapViolation("Psi D(" + nu.source()->format(z) + ") - D Psi(" +
                            nu.source()->format(z) + ") = " +
                            nu.target()->format(*lhs - *rhs));
  return *image;
}

void check_chain_map(const ContinuationCocycle& nu, int lo, int hi) {
  const TwistedComplex& s = *nu.source();
  const TwistedComplex& t = *nu.target();
  const DgModule& f = *s.module();
  for (std::size_t x = 0; x < s.generators().size(); ++x)
    for (int k = lo; k <= hi; ++k)
      for (std::size_t w : f.words_of_degree(k - s.generator(x).degree)) {
        Chain c = s.cell(w, x);
        auto dc = s.try_differential(c);
        auto image = try_apply(nu, c);
        if (!dc || !image) continue;
        auto lhs = try_apply(nu, *dc);
        auto rhs = t.try_differential(*image);
        if (lhs && rhs && *lhs != *rhs)
          throw ChainMapViolation("Psi D(" + s.cell_name({w, x}) +
                                  ") - D Psi(" + s.cell_name({w, x}) + ") = " +
                                  t.format(*lhs - *rhs));
      }
}

IntMatrix continuation_matrix(const ContinuationCocycle& nu,
                              const AssembledComplex& source_window,
                              const AssembledComplex& target_window, int k) {
  const ChainBasis& src = source_window.basis(k);
  const ChainBasis& dst = target_window.basis(k);
  IntMatrix m(dst.cells.size(), src.cells.size());
  for (std::size_t j = 0; j < src.cells.size(); ++j) {
    auto image = try_apply(nu, nu.source()->cell(src.cells[j].word,
                                                 src.cells[j].generator));
    if (!image)
      throw TruncationExceeded("image of " +
                               nu.source()->cell_name(src.cells[j]) +
                               " leaves the module range");
    IntVector v = target_window.to_vector(*image, k);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, j) = v[i];
  }
  return m;
}

ContinuationCocycle compose(const ContinuationCocycle& nu12,
                            const ContinuationCocycle& nu23) {
  if (nu12.target() != nu23.source())
    throw EndpointMismatch(
        "target of the first map is not the source of the second");
  const Dga& a = *nu12.source()->algebra();
  CocycleEntries out;
  for (const auto& [xz, n12] : nu12.entries())
    for_row(nu23.entries(), xz.second,
            [&](std::size_t y, const AlgebraElement& n23) {
              auto p = a.try_multiply(n12, n23);
              if (!p)
                throw TruncationExceeded(
                    "composite entry exceeds the truncation degree");
              auto& slot = out[{xz.first, y}];
              slot += *p;
            });
  ContinuationCocycle result(nu12.source(), nu23.target(), std::move(out));
  if (validate_continuation(nu12).ok() && validate_continuation(nu23).ok()) {
    ValidationReport r = validate_continuation(result);
    if (!r.ok()) {
      const Violation& v = r.violations.front();
      throw ChainMapViolation("composite fails " + v.axiom + " at (" +
                              v.witness.at(0) + ", " + v.witness.at(1) +
                              "): " + v.residual);
    }
  }
  return result;
}

ExtendedRational filtration_shift(const ContinuationCocycle& nu) {
  const TwistedComplex& s = *nu.source();
  const TwistedComplex& t = *nu.target();
  if (!s.has_actions() || !t.has_actions())
    throw ActionsMissing("filtration shift needs actions on both complexes");
  ExtendedRational e = ExtendedRational::negative_infinity();
  for (const auto& [xy, v] : nu.entries()) {
    ExtendedRational d(Rational(*t.generator(xy.second).action -
                                *s.generator(xy.first).action));
    e = std::max(e, d);
  }
  return e;
}

std::vector<GroupMap> induced_on_homology(const ContinuationCocycle& nu, int lo,
                                          int hi) {
  const TwistedComplex& s = *nu.source();
  const TwistedComplex& t = *nu.target();
  AssembledComplex sw = assemble(s, lo, hi + 1);
  check_square_zero(s, sw);
  std::vector<Subquotient> source_homology;
  for (int k = lo; k <= hi; ++k)
    source_homology.push_back(homology_presentation(sw, k));

  const auto radius = s.module()->box_radius();
  const int max_margin = radius ? 16 : 0;
  for (int margin = 0; margin <= max_margin; margin = margin ? 2 * margin : 1) {
    ComplexPtr s2 = nu.source(), t2 = nu.target();
    if (margin > 0) {
      ModulePtr big = s.module()->with_box_radius(*radius + margin);
      s2 = over_module(s, big);
      t2 = over_module(t, big);
    }
    AssembledComplex tw = assemble(*t2, lo, hi + 1);
    check_square_zero(*t2, tw);
    ContinuationCocycle nu2(s2, t2, nu.entries());
    std::vector<GroupMap> out;
    bool fits = true;
    for (int k = lo; k <= hi && fits; ++k) {
      const Subquotient& qs = source_homology[k - lo];
      Subquotient qt = homology_presentation(tw, k);
      GroupMap g{qs.orders(), qt.orders(),
                 IntMatrix(qt.orders().size(), qs.orders().size())};
      for (std::size_t j = 0; j < qs.generators().size() && fits; ++j) {
        Chain cycle = translate(sw.to_chain(qs.generators()[j], k), *s.module(),
                                *s2->module());
        auto image = try_apply(nu2, cycle);
        if (!image) {
          fits = false;
          break;
        }
        IntVector v;
        try {
          v = tw.to_vector(*image, k);
        } catch (const TruncationExceeded&) {
          fits = false;
          break;
        }
        auto coords = qt.coordinates(v);
        if (!coords)
          throw ChainMapViolation("image of the cycle " + s.format(cycle) +
                                  " is not a cycle");
        for (std::size_t i = 0; i < coords->size(); ++i)
          g.matrix(i, j) = (*coords)[i];
      }
      g.normalize();
      out.push_back(std::move(g));
    }
    if (fits) return out;
  }
  throw TruncationExceeded(
      "images of homology generators do not fit in the module range");
}

TowerHomology tower_homology(const std::vector<ContinuationCocycle>& maps,
                             int lo, int hi) {
  if (maps.empty()) throw InvalidDefinition("a tower needs at least one map");
  for (std::size_t i = 0; i + 1 < maps.size(); ++i)
    if (maps[i].target() != maps[i + 1].source())
      throw EndpointMismatch("map " + std::to_string(i + 2) +
                             " does not start where map " +
                             std::to_string(i + 1) + " ends");
  TowerHomology out;
  out.lo = lo;
  out.hi = hi;
  out.stages.push_back(homology(*maps.front().source(), lo, hi));
  for (const auto& nu : maps) {
    out.stages.push_back(homology(*nu.target(), lo, hi));
    out.ladder.push_back(induced_on_homology(nu, lo, hi));
  }
  return out;
}

// ---------------------------------------------------------------------------
// HomotopyCocycle

HomotopyCocycle::HomotopyCocycle(ContinuationCocycle map0,
                                 ContinuationCocycle map1,
                                 CocycleEntries entries)
    : map0_(std::move(map0)), map1_(std::move(map1)) {
  if (map0_.source() != map1_.source() || map0_.target() != map1_.target())
    throw EndpointMismatch("homotopy between maps with different endpoints");
  entries_ = drop_zeros(std::move(entries), *map0_.source()->algebra());
  check_indices(entries_, *map0_.source(), *map0_.target());
}

AlgebraElement HomotopyCocycle::entry(std::size_t x, std::size_t y) const {
  return lookup(entries_, x, y);
}

std::optional<AlgebraElement> homotopy_residual(const HomotopyCocycle& h,
                                                std::size_t x, std::size_t y) {
  const TwistedComplex& s = *h.source();
  const TwistedComplex& t = *h.target();
  const Dga& a = *s.algebra();
  AlgebraElement r = a.differential(h.entry(x, y));
  r -= h.map1().entry(x, y);
  r += h.map0().entry(x, y);
  const int dx = s.generator(x).degree;
  bool ok = true;
  for_row(s.cocycle(), x, [&](std::size_t z, const AlgebraElement& m) {
    AlgebraElement hz = h.entry(z, y);
    if (hz.is_zero() || !ok) return;
    auto p = a.try_multiply(m, hz);
    if (!p) ok = false;
    else r -= sign_of(dx - s.generator(z).degree) * *p;
  });
  for_row(h.entries(), x, [&](std::size_t z, const AlgebraElement& hx) {
    AlgebraElement m = t.entry(z, y);
    if (m.is_zero() || !ok) return;
    auto p = a.try_multiply(hx, m);
    if (!p) ok = false;
    else r -= sign_of(dx - t.generator(z).degree) * *p;
  });
  if (!ok) return std::nullopt;
  return r;
}

std::optional<Chain> try_apply(const HomotopyCocycle& h, const Chain& z) {
  return apply_entries(*h.source()->module(), h.entries(), z, true);
}

std::pair<int, int> default_window(const TwistedComplex& x) {
  if (x.generators().empty() || x.module()->size() == 0) return {0, -1};
  const DgModule& f = *x.module();
  int lo = f.min_degree() + x.min_generator_degree();
  int hi = f.max_degree() + x.max_generator_degree();
  if (auto cert = certified_max_degree(x)) hi = std::min(hi, *cert);
  return {lo, hi};
}

ValidationReport validate_homotopy(const HomotopyCocycle& h) {
  auto [lo, hi] = default_window(*h.source());
  return validate_homotopy(h, lo, hi);
}

ValidationReport validate_homotopy(const HomotopyCocycle& h, int lo, int hi) {
  ValidationReport report;
  const TwistedComplex& s = *h.source();
  const TwistedComplex& t = *h.target();
  const Dga& a = *s.algebra();
  for (const auto& [xy, v] : h.entries()) {
    const Generator& x = s.generator(xy.first);
    const Generator& y = t.generator(xy.second);
    const int expected = x.degree - y.degree + 1;
    if (expected < 0 || !a.is_homogeneous_of_degree(v, expected))
      report.add("degree", {x.name, y.name},
                 describe_degree_problem(a, v, expected));
  }
  for (std::size_t x = 0; x < s.generators().size(); ++x)
    for (std::size_t y = 0; y < t.generators().size(); ++y) {
      auto r = homotopy_residual(h, x, y);
      if (r && !r->is_zero())
        report.add("homotopy identity",
                   {s.generator(x).name, t.generator(y).name}, a.format(*r));
    }
  if (!report.ok()) return report;

  const DgModule& f = *s.module();
  for (std::size_t x = 0; x < s.generators().size(); ++x)
    for (int k = lo; k <= hi; ++k)
      for (std::size_t w : f.words_of_degree(k - s.generator(x).degree)) {
        Chain c = s.cell(w, x);
        auto p1 = try_apply(h.map1(), c);
        auto p0 = try_apply(h.map0(), c);
        auto hc = try_apply(h, c);
        auto dc = s.try_differential(c);
        if (!p1 || !p0 || !hc || !dc) continue;
        auto dhc = t.try_differential(*hc);
        auto hdc = try_apply(h, *dc);
        if (!dhc || !hdc) continue;
        Chain diff = *p1 - *p0 - *dhc - *hdc;
        if (!diff.is_zero())
          report.add("chain homotopy", {s.cell_name({w, x})}, t.format(diff));
      }
  return report;
}

std::optional<HomotopyCocycle> find_homotopy(const ContinuationCocycle& nu0,
                                             const ContinuationCocycle& nu1,
                                             const HomotopySearch& search) {
  if (nu0.source() != nu1.source() || nu0.target() != nu1.target())
    throw EndpointMismatch("homotopy between maps with different endpoints");
  const TwistedComplex& s = *nu0.source();
  const TwistedComplex& t = *nu0.target();
  const Dga& a = *s.algebra();

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t x = 0; x < s.generators().size(); ++x)
    for (std::size_t y = 0; y < t.generators().size(); ++y) pairs.push_back({x, y});
  auto residuals = [&](const CocycleEntries& entries)
      -> std::optional<std::vector<AlgebraElement>> {
    HomotopyCocycle h(nu0, nu1, entries);
    std::vector<AlgebraElement> out;
    for (const auto& [x, y] : pairs) {
      auto r = homotopy_residual(h, x, y);
      if (!r) return std::nullopt;
      out.push_back(std::move(*r));
    }
    return out;
  };

  std::vector<Word> laurent_words;
  if (a.backend() == Backend::laurent) {
    const std::size_t n = a.generators().size();
    const std::int64_t b = search.exponent_bound;
    std::vector<std::int64_t> e(n, -b);
    while (true) {
      laurent_words.push_back(Word{e});
      std::size_t i = 0;
      while (i < n && ++e[i] > b) e[i++] = -b;
      if (i == n) break;
    }
  }
  auto words_of = [&](int degree) {
    if (a.backend() == Backend::laurent)
      return degree == 0 ? laurent_words : std::vector<Word>{};
    return a.basis(degree);
  };

  auto base = residuals({});
  if (!base) return std::nullopt;
  struct Unknown {
    std::pair<std::size_t, std::size_t> pair;
    Word word;
    std::vector<AlgebraElement> column;
  };
  std::vector<Unknown> unknowns;
  for (const auto& [x, y] : pairs) {
    const int degree = s.generator(x).degree - t.generator(y).degree + 1;
    if (degree < 0) continue;
    for (const Word& w : words_of(degree)) {
      auto r = residuals({{{x, y}, a.word(w)}});
      if (!r) continue;
      for (std::size_t i = 0; i < r->size(); ++i) (*r)[i] -= (*base)[i];
      unknowns.push_back({{x, y}, w, std::move(*r)});
    }
  }

  std::map<std::pair<std::size_t, Word>, std::size_t> rows;
  auto row_of = [&](std::size_t pair, const Word& w) {
    return rows.emplace(std::pair{pair, w}, rows.size()).first->second;
  };
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (const auto& [w, c] : (*base)[i].terms()) row_of(i, w);
  for (const auto& u : unknowns)
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (const auto& [w, c] : u.column[i].terms()) row_of(i, w);

  IntMatrix m(rows.size(), unknowns.size());
  IntVector rhs(rows.size());
  for (std::size_t j = 0; j < unknowns.size(); ++j)
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (const auto& [w, c] : unknowns[j].column[i].terms()) m(row_of(i, w), j) = c;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (const auto& [w, c] : (*base)[i].terms()) rhs[row_of(i, w)] = -c;

  auto solution = solve_integer(smith_normal_form(m), rhs);
  if (!solution) return std::nullopt;
  CocycleEntries entries;
  for (std::size_t j = 0; j < unknowns.size(); ++j)
    if ((*solution)[j] != 0) entries[unknowns[j].pair] += a.word(unknowns[j].word, (*solution)[j]);
  for (auto it = entries.begin(); it != entries.end();)
    it = it->second.is_zero() ? entries.erase(it) : std::next(it);
  HomotopyCocycle h(nu0, nu1, std::move(entries));
  if (!validate_homotopy(h).ok()) return std::nullopt;
  return h;
}

}  // namespace dgc
