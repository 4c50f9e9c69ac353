#include "dgc/gauge.hpp"

#include <algorithm>
#include <numeric>

#include "dgc/errors.hpp"

namespace dgc {
namespace {

Integer sign_of(int degree) { return degree % 2 == 0 ? 1 : -1; }

using Matrix = std::vector<std::vector<AlgebraElement>>;

Matrix product(const Dga& a, const Matrix& p, const Matrix& q) {
  const std::size_t n = p.size();
  Matrix out(n, std::vector<AlgebraElement>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (p[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!q[k][j].is_zero()) out[i][j] += a.multiply(p[i][k], q[k][j]);
    }
  return out;
}

CocycleEntries to_entries(const Matrix& m) {
  CocycleEntries out;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (!m[i][j].is_zero()) out.emplace(std::pair{i, j}, m[i][j]);
  return out;
}

}  // namespace

ModulePtr GaugeGenerator::module(const GaugeOptions& options) {
  switch (options.algebra) {
    case GaugeAlgebra::polynomial:
      return DgModule::regular(free_tensor_algebra({{"x", 1}}, options.truncation));
    case GaugeAlgebra::free_with_differential:
      return DgModule::regular(free_tensor_algebra(
          {{"x", 1}, {"y", 3}}, options.truncation, {{}, {{Integer(1), {0, 0}}}}));
    case GaugeAlgebra::laurent:
      break;
  }
  return DgModule::regular(Dga::laurent({"t"}));
}

AlgebraElement GaugeGenerator::random_element(const Dga& a, int degree,
                                              const GaugeOptions& options) {
  std::uniform_int_distribution<int> coeff(-options.coefficient_bound,
                                           options.coefficient_bound);
  std::uniform_int_distribution<std::size_t> terms(1, options.max_terms);
  AlgebraElement out;
  if (a.backend() == Backend::laurent) {
    if (degree != 0) return out;
    std::uniform_int_distribution<std::int64_t> expo(-1, 1);
    for (std::size_t i = terms(rng_); i > 0; --i) {
      AlgebraElement w = a.unit();
      for (std::size_t g = 0; g < a.generators().size(); ++g)
        w = a.multiply(w, a.generator_power(g, expo(rng_)));
      out += Integer(coeff(rng_)) * w;
    }
    return out;
  }
  if (degree < 0 || degree > a.truncation()) return out;
  std::vector<Word> words = a.basis(degree);
  if (words.empty()) return out;
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  for (std::size_t i = terms(rng_); i > 0; --i)
    out += a.word(words[pick(rng_)], coeff(rng_));
  return out;
}

ComplexPtr GaugeGenerator::base_complex(const ModulePtr& f,
                                        const GaugeOptions& options) {
  const Dga& a = *f->algebra();
  const bool laurent = a.backend() == Backend::laurent;
  std::uniform_int_distribution<std::size_t> count(2, options.max_generators);
  std::uniform_int_distribution<int> degree(0, laurent ? 2 : options.max_generator_degree);
  std::size_t n = count(rng_);
  // Over the Laurent ring an unpaired generator carries a free module of
  // infinite rank in homology; pair every generator.
  if (laurent && n % 2 == 1) n = n > 2 ? n - 1 : 2;

  std::vector<Generator> gens(n);
  std::vector<int> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 0);
  std::shuffle(ranks.begin(), ranks.end(), rng_);
  std::uniform_int_distribution<int> half(0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    gens[i].name = "g" + std::to_string(i);
    gens[i].degree = degree(rng_);
    gens[i].action = Rational(2 * ranks[i] + half(rng_), 2);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng_);
  CocycleEntries entries;
  for (std::size_t i = 0; i + 1 < n; i += 2) {
    std::size_t p = order[i], q = order[i + 1];
    if (gens[p].degree < gens[q].degree) std::swap(p, q);
    if (laurent) gens[p].degree = gens[q].degree + 1;
    const int d = gens[p].degree - gens[q].degree - 1;
    if (d < 0) continue;
    if (*gens[p].action < *gens[q].action)
      std::swap(gens[p].action, gens[q].action);
    // A cycle of degree d: a boundary plus a multiple of a closed word.
    AlgebraElement m = a.differential(random_element(a, d + 1, options));
    if (laurent) {
      // A unit times (t - 1), so the homology stays finitely generated.
      std::uniform_int_distribution<std::int64_t> expo(-1, 1);
      std::uniform_int_distribution<int> sign(0, 1);
      m = a.multiply(a.generator_power(0, expo(rng_)), a.parse("t - 1"));
      if (sign(rng_)) m *= Integer(-1);
    } else {
      std::uniform_int_distribution<int> c(1, options.coefficient_bound);
      m += a.word(*a.find_word(d == 0 ? "1" : d == 1 ? "x" : "x^" + std::to_string(d)),
                  c(rng_));
    }
    if (!m.is_zero()) entries.emplace(std::pair{p, q}, m);
  }
  return std::make_shared<const TwistedComplex>(f, std::move(gens),
                                                std::move(entries));
}

GaugeInstance GaugeGenerator::conjugate(const ComplexPtr& base,
                                        const GaugeOptions& options) {
  const TwistedComplex& x = *base;
  const Dga& a = *x.algebra();
  const bool laurent = a.backend() == Backend::laurent;
  const std::size_t n = x.generators().size();
  std::bernoulli_distribution use(0.6);

  Matrix g(n, std::vector<AlgebraElement>(n));
  Matrix nil(n, std::vector<AlgebraElement>(n));
  for (std::size_t i = 0; i < n; ++i) {
    g[i][i] = a.unit();
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Generator& gi = x.generator(i);
      const Generator& gj = x.generator(j);
      const int d = gi.degree - gj.degree;
      if (!(*gj.action < *gi.action) || d < 0 || (laurent && d != 0)) continue;
      if (!use(rng_)) continue;
      nil[i][j] = random_element(a, d, options);
      g[i][j] = nil[i][j];
    }
  }
  // k = sum_j (-nil)^j, finite since nil strictly lowers action.
  Matrix k(n, std::vector<AlgebraElement>(n));
  Matrix power(n, std::vector<AlgebraElement>(n));
  for (std::size_t i = 0; i < n; ++i) k[i][i] = power[i][i] = a.unit();
  Matrix minus_nil = nil;
  for (auto& row : minus_nil)
    for (auto& e : row) e *= Integer(-1);
  for (std::size_t step = 1; step < n; ++step) {
    power = product(a, power, minus_nil);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) k[i][j] += power[i][j];
  }

  // m'(x, w) = sum_y (-1)^{|x|-|y|} k(x, y) [ (m g)(y, w) - dg(y, w) ].
  Matrix m(n, std::vector<AlgebraElement>(n));
  for (const auto& [xy, v] : x.cocycle()) m[xy.first][xy.second] = v;
  Matrix inner = product(a, m, g);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inner[i][j] -= a.differential(g[i][j]);
  Matrix conj(n, std::vector<AlgebraElement>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t y = 0; y < n; ++y) {
      if (k[i][y].is_zero()) continue;
      const Integer s = sign_of(x.generator(i).degree - x.generator(y).degree);
      for (std::size_t w = 0; w < n; ++w)
        if (!inner[y][w].is_zero())
          conj[i][w] += s * a.multiply(k[i][y], inner[y][w]);
    }

  auto conjugate = std::make_shared<const TwistedComplex>(
      x.module(), x.generators(), to_entries(conj));
  return GaugeInstance{base, conjugate,
                       ContinuationCocycle(base, conjugate, to_entries(g)),
                       ContinuationCocycle(conjugate, base, to_entries(k))};
}

GaugeInstance GaugeGenerator::instance(const GaugeOptions& options) {
  return conjugate(base_complex(module(options), options), options);
}

HomotopyCocycle GaugeGenerator::homotopy(const ContinuationCocycle& nu0,
                                         const GaugeOptions& options) {
  const TwistedComplex& s = *nu0.source();
  const TwistedComplex& t = *nu0.target();
  const Dga& a = *s.algebra();
  std::bernoulli_distribution use(0.5);
  CocycleEntries h;
  for (std::size_t x = 0; x < s.generators().size(); ++x)
    for (std::size_t y = 0; y < t.generators().size(); ++y) {
      const int d = s.generator(x).degree - t.generator(y).degree + 1;
      if (d < 0 || !use(rng_)) continue;
      AlgebraElement e = random_element(a, d, options);
      if (!e.is_zero()) h.emplace(std::pair{x, y}, e);
    }
  // nu1 = nu0 + dh - sum (-1)^{|x|-|z|} m+ h - sum (-1)^{|x|-|z|} h m-.
  CocycleEntries nu1 = nu0.entries();
  for (const auto& [xy, e] : h) nu1[xy] += a.differential(e);
  for (const auto& [xz, m] : s.cocycle())
    for (const auto& [zy, e] : h) {
      if (zy.first != xz.second) continue;
      const Integer sg = sign_of(s.generator(xz.first).degree -
                                 s.generator(xz.second).degree);
      nu1[{xz.first, zy.second}] -= sg * a.multiply(m, e);
    }
  for (const auto& [xz, e] : h)
    for (const auto& [zy, m] : t.cocycle()) {
      if (zy.first != xz.second) continue;
      const Integer sg = sign_of(s.generator(xz.first).degree -
                                 t.generator(xz.second).degree);
      nu1[{xz.first, zy.second}] -= sg * a.multiply(e, m);
    }
  ContinuationCocycle map1(nu0.source(), nu0.target(), std::move(nu1));
  return HomotopyCocycle(nu0, std::move(map1), std::move(h));
}

ComplexPtr GaugeGenerator::shift_actions(const ComplexPtr& x) {
  std::uniform_int_distribution<int> shift(-4, 4);
  std::vector<Generator> gens = x->generators();
  for (auto& g : gens)
    if (g.action) *g.action += Rational(shift(rng_), 2);
  return std::make_shared<const TwistedComplex>(x->module(), std::move(gens),
                                                x->cocycle());
}

std::optional<SignFault> inject_sign_fault(const TwistedComplex& c,
                                           std::mt19937_64& rng) {
  const Dga& a = *c.algebra();
  struct Candidate {
    std::size_t x, z, y;
    AlgebraElement product;
  };
  std::vector<Candidate> candidates;
  for (const auto& [xz, m1] : c.cocycle())
    for (const auto& [zy, m2] : c.cocycle()) {
      if (zy.first != xz.second) continue;
      auto p = a.try_multiply(m1, m2);
      if (p && !p->is_zero())
        candidates.push_back({xz.first, xz.second, zy.second, *p});
    }
  if (candidates.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  const Candidate& chosen = candidates[pick(rng)];
  CocycleEntries entries = c.cocycle();
  entries[{chosen.x, chosen.z}] *= Integer(-1);
  SignFault fault;
  fault.complex = std::make_shared<const TwistedComplex>(
      c.module(), c.generators(), std::move(entries));
  fault.x = chosen.x;
  fault.z = chosen.z;
  fault.y = chosen.y;
  fault.expected_residual =
      Integer(2) *
      (sign_of(c.generator(chosen.x).degree - c.generator(chosen.z).degree) *
       chosen.product);
  return fault;
}

}  // namespace dgc
