#include "dgc/twisted_complex.hpp"

#include <algorithm>
#include <set>

#include "dgc/errors.hpp"
#include "expression.hpp"

namespace dgc {
namespace {

Integer sign_of(int degree) { return degree % 2 == 0 ? 1 : -1; }

}  // namespace

// ---------------------------------------------------------------------------
// Chain

Chain::Chain(Terms terms) {
  for (auto& [c, v] : terms)
    if (sgn(v) != 0) terms_.emplace(c, std::move(v));
}

Integer Chain::coefficient(const Cell& c) const {
  auto it = terms_.find(c);
  return it == terms_.end() ? Integer(0) : it->second;
}

void Chain::add_term(const Cell& c, const Integer& v) {
  if (sgn(v) == 0) return;
  auto [it, inserted] = terms_.try_emplace(c, v);
  if (!inserted) {
    it->second += v;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Chain& Chain::operator+=(const Chain& o) {
  for (const auto& [c, v] : o.terms_) add_term(c, v);
  return *this;
}

Chain& Chain::operator-=(const Chain& o) {
  for (const auto& [c, v] : o.terms_) add_term(c, -v);
  return *this;
}

Chain& Chain::operator*=(const Integer& c) {
  if (sgn(c) == 0) terms_.clear();
  for (auto& [cell, v] : terms_) v *= c;
  return *this;
}

// ---------------------------------------------------------------------------
// TwistedComplex

TwistedComplex::TwistedComplex(ModulePtr module,
                               std::vector<Generator> generators,
                               CocycleEntries cocycle)
    : module_(std::move(module)), generators_(std::move(generators)) {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (!index_.emplace(generators_[i].name, i).second)
      throw InvalidDefinition("duplicate generator '" + generators_[i].name +
                              "'");
  targets_.assign(generators_.size(), {});
  for (auto& [xy, m] : cocycle) {
    const auto [x, y] = xy;
    if (x >= generators_.size() || y >= generators_.size())
      throw InvalidDefinition("cocycle entry refers to an unknown generator");
    if (m.is_zero()) continue;
    algebra()->check_member(m);
    targets_[x].push_back(y);
    cocycle_.emplace(xy, std::move(m));
  }
}

std::optional<std::size_t> TwistedComplex::find_generator(
    std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t TwistedComplex::generator_index(std::string_view name) const {
  auto i = find_generator(name);
  if (!i) throw InvalidDefinition("unknown generator '" + std::string(name) + "'");
  return *i;
}

AlgebraElement TwistedComplex::entry(std::size_t x, std::size_t y) const {
  auto it = cocycle_.find({x, y});
  return it == cocycle_.end() ? AlgebraElement() : it->second;
}

bool TwistedComplex::has_actions() const {
  return std::all_of(generators_.begin(), generators_.end(),
                     [](const Generator& g) { return g.action.has_value(); });
}

int TwistedComplex::min_generator_degree() const {
  int d = 0;
  for (std::size_t i = 0; i < generators_.size(); ++i)
    d = i == 0 ? generators_[i].degree : std::min(d, generators_[i].degree);
  return d;
}

int TwistedComplex::max_generator_degree() const {
  int d = 0;
  for (std::size_t i = 0; i < generators_.size(); ++i)
    d = i == 0 ? generators_[i].degree : std::max(d, generators_[i].degree);
  return d;
}

int TwistedComplex::degree(const Cell& c) const {
  return module_->word(c.word).degree + generators_.at(c.generator).degree;
}

std::optional<int> TwistedComplex::degree(const Chain& z) const {
  std::optional<int> d;
  for (const auto& [c, v] : z.terms()) {
    int k = degree(c);
    if (d && *d != k) return std::nullopt;
    d = k;
  }
  return d;
}

std::optional<Chain> TwistedComplex::try_differential(const Chain& z) const {
  const DgModule& f = *module_;
  Chain out;
  for (const auto& [c, v] : z.terms()) {
    const ModuleElement a = f.element(c.word);
    const ModuleElement da = f.differential(a);
    for (const auto& [w, dv] : da.terms())
      out.add_term({w, c.generator}, v * dv);
    const Integer s = sign_of(f.word(c.word).degree) * v;
    for (std::size_t y : targets_[c.generator]) {
      auto am = f.try_act(a, cocycle_.at({c.generator, y}));
      if (!am) return std::nullopt;
      for (const auto& [w, mv] : am->terms()) out.add_term({w, y}, s * mv);
    }
  }
  return out;
}

Chain TwistedComplex::differential(const Chain& z) const {
  auto d = try_differential(z);
  if (!d)
    throw TruncationExceeded("differential of " + format(z) +
                             " leaves the representable range of the module");
  return *d;
}

Chain TwistedComplex::cell(std::size_t word, std::size_t generator,
                           const Integer& c) const {
  if (word >= module_->size() || generator >= generators_.size())
    throw InvalidDefinition("cell out of range");
  Chain z;
  z.add_term({word, generator}, c);
  return z;
}

Chain TwistedComplex::tensor(const ModuleElement& a, std::size_t x) const {
  module_->check_member(a);
  Chain z;
  for (const auto& [w, v] : a.terms()) z.add_term({w, x}, v);
  return z;
}

ModuleElement TwistedComplex::component(const Chain& z, std::size_t x) const {
  ModuleElement out = module_->zero();
  for (const auto& [c, v] : z.terms())
    if (c.generator == x) out += module_->element(c.word, v);
  return out;
}

Chain TwistedComplex::parse_chain(std::string_view text) const {
  Chain out;
  for (const auto& m : detail::parse_monomials(text, true)) {
    const auto& tail = *m.tail;
    auto x = find_generator(tail.name);
    if (!x)
      throw ExpressionError("unknown generator '" + tail.name + "'",
                            tail.position);
    std::string module_text = m.coefficient.get_str();
    for (const auto& f : m.factors) {
      module_text += "*" + f.name;
      if (f.exponent != 1) module_text += "^" + std::to_string(f.exponent);
    }
    ModuleElement a;
    try {
      a = module_->parse(module_text);
    } catch (const ExpressionError& e) {
      throw ExpressionError(e.what(), m.factors.empty() ? tail.position
                                                        : m.factors[0].position);
    }
    out += tensor(a, *x);
  }
  return out;
}

std::string TwistedComplex::cell_name(const Cell& c) const {
  return module_->format(module_->element(c.word)) + "|" +
         generators_.at(c.generator).name;
}

std::string TwistedComplex::format(const Chain& z) const {
  if (z.is_zero()) return "0";
  std::string out;
  for (const auto& [c, v] : z.terms()) {
    std::string term = module_->format(module_->element(c.word, v)) + "|" +
                       generators_[c.generator].name;
    if (out.empty())
      out = term;
    else if (term[0] == '-')
      out += " - " + term.substr(1);
    else
      out += " + " + term;
  }
  return out;
}

TwistedComplex TwistedComplex::restrict_to(
    const std::vector<std::size_t>& kept) const {
  std::vector<Generator> gens;
  std::map<std::size_t, std::size_t> new_index;
  for (std::size_t i : kept) {
    new_index[i] = gens.size();
    gens.push_back(generators_.at(i));
  }
  CocycleEntries entries;
  for (const auto& [xy, m] : cocycle_) {
    auto x = new_index.find(xy.first), y = new_index.find(xy.second);
    if (x != new_index.end() && y != new_index.end())
      entries.emplace(std::pair{x->second, y->second}, m);
  }
  return TwistedComplex(module_, std::move(gens), std::move(entries));
}

TwistedComplex TwistedComplex::twisted(const Rank1LocalSystem& l) const {
  return TwistedComplex(module_->twisted(l), generators_, cocycle_);
}

// ---------------------------------------------------------------------------
// Validation

std::optional<AlgebraElement> maurer_cartan_residual(const TwistedComplex& c,
                                                     std::size_t x,
                                                     std::size_t y) {
  const Dga& a = *c.algebra();
  AlgebraElement r = a.differential(c.entry(x, y));
  const int dx = c.generator(x).degree;
  for (const auto& [xz, mxz] : c.cocycle()) {
    if (xz.first != x) continue;
    const std::size_t z = xz.second;
    auto it = c.cocycle().find({z, y});
    if (it == c.cocycle().end()) continue;
    auto p = a.try_multiply(mxz, it->second);
    if (!p) return std::nullopt;
    r -= sign_of(dx - c.generator(z).degree) * *p;
  }
  return r;
}

ValidationReport validate_cocycle(const TwistedComplex& c) {
  ValidationReport report;
  const Dga& a = *c.algebra();
  for (const auto& [xy, m] : c.cocycle()) {
    const Generator& x = c.generator(xy.first);
    const Generator& y = c.generator(xy.second);
    const int expected = x.degree - y.degree - 1;
    if (expected < 0)
      report.add("degree", {x.name, y.name},
                 "entry " + a.format(m) + " where |x| - |y| - 1 = " +
                     std::to_string(expected) + " < 0");
    else if (!a.is_homogeneous_of_degree(m, expected))
      report.add("degree", {x.name, y.name},
                 "entry " + a.format(m) + " is not homogeneous of degree " +
                     std::to_string(expected));
    if (x.class_label != y.class_label)
      report.add("class label", {x.name, y.name},
                 "entry joins generators of different classes");
  }
  const std::size_t n = c.generators().size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      auto r = maurer_cartan_residual(c, x, y);
      if (r && !r->is_zero())
        report.add("Maurer-Cartan", {c.generator(x).name, c.generator(y).name},
                   a.format(*r));
    }
  return report;
}

// ---------------------------------------------------------------------------
// Assembly

const ChainBasis& AssembledComplex::basis(int k) const {
  auto it = bases_.find(k);
  if (it == bases_.end())
    throw DimensionMismatch("degree " + std::to_string(k) +
                            " is outside the assembled window");
  return it->second;
}

const IntMatrix& AssembledComplex::differential(int k) const {
  auto it = differentials_.find(k);
  if (it == differentials_.end())
    throw DimensionMismatch("no differential from degree " + std::to_string(k) +
                            " in the assembled window");
  return it->second;
}

IntVector AssembledComplex::to_vector(const Chain& z, int k) const {
  const ChainBasis& b = basis(k);
  IntVector v(b.cells.size(), Integer(0));
  for (const auto& [c, x] : z.terms()) {
    auto it = b.index.find(c);
    if (it == b.index.end())
      throw TruncationExceeded(
          "chain involves a cell outside the assembled degree-" +
          std::to_string(k) + " basis");
    v[it->second] = x;
  }
  return v;
}

Chain AssembledComplex::to_chain(const IntVector& v, int k) const {
  const ChainBasis& b = basis(k);
  if (v.size() != b.cells.size())
    throw DimensionMismatch("vector length does not match the basis");
  Chain z;
  for (std::size_t i = 0; i < v.size(); ++i) z.add_term(b.cells[i], v[i]);
  return z;
}

std::optional<int> certified_max_degree(const TwistedComplex& x) {
  auto bound = x.module()->degree_bound();
  if (!bound || x.generators().empty()) return std::nullopt;
  return *bound + x.min_generator_degree() - 1;
}

AssembledComplex assemble(const TwistedComplex& x, int lo, int hi,
                          bool require_complete) {
  AssembledComplex out =
      AssembledComplex::assemble_cells(x, lo, hi, require_complete);
  const DgModule& f = *x.module();
  if (!f.box_radius()) return out;
  ModulePtr wide = f.with_box_radius(2 * *f.box_radius());
  TwistedComplex outer(wide, x.generators(), x.cocycle());
  auto o = std::make_shared<AssembledComplex>(
      AssembledComplex::assemble_cells(outer, lo, hi, false));
  for (int k = lo - 1; k <= hi; ++k) {
    std::vector<std::size_t>& index = out.outer_index_[k];
    for (const Cell& c : out.basis(k).cells) {
      Cell wide_cell{*wide->find_word(f.word(c.word).name), c.generator};
      index.push_back(o->basis(k).index.at(wide_cell));
    }
  }
  out.outer_ = std::move(o);
  return out;
}

AssembledComplex AssembledComplex::assemble_cells(const TwistedComplex& x,
                                                 int lo, int hi,
                                                 bool require_complete) {
  const DgModule& f = *x.module();
  if (require_complete) {
    auto cert = certified_max_degree(x);
    if (cert && hi > *cert + 1)
      throw TruncationExceeded(
          "degree window up to " + std::to_string(hi) +
          " needs module words beyond the truncation bound " +
          std::to_string(*f.degree_bound()) + "; degrees up to " +
          std::to_string(*cert) + " are certified");
  }
  AssembledComplex out;
  out.lo_ = lo;
  out.hi_ = hi;
  const auto& gens = x.generators();
  int k_min = lo - 1;
  for (const auto& g : gens) k_min = std::min(k_min, f.min_degree() + g.degree);

  std::set<Cell> previous;
  for (int k = k_min; k <= hi; ++k) {
    ChainBasis basis;
    std::set<Cell> kept;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (f.degree_bound() && k - gens[g].degree > *f.degree_bound())
        basis.complete = false;
      for (std::size_t w : f.words_of_degree(k - gens[g].degree)) {
        Cell c{w, g};
        auto d = x.try_differential(x.cell(w, g));
        bool ok = d.has_value();
        if (ok)
          for (const auto& [t, v] : d->terms())
            if (!previous.count(t)) {
              ok = false;
              break;
            }
        if (!ok) {
          if (!f.box_radius()) basis.complete = false;
          continue;
        }
        kept.insert(c);
        if (k >= lo - 1) {
          basis.index.emplace(c, basis.cells.size());
          basis.cells.push_back(c);
        }
      }
    }
    if (k >= lo - 1) {
      if (require_complete && !basis.complete)
        throw TruncationExceeded("degree " + std::to_string(k) +
                                 " of the window is cut by the module range");
      out.bases_.emplace(k, std::move(basis));
    }
    previous = std::move(kept);
  }
  for (int k = lo; k <= hi; ++k) {
    const ChainBasis& src = out.bases_.at(k);
    const ChainBasis& dst = out.bases_.at(k - 1);
    IntMatrix m(dst.cells.size(), src.cells.size());
    for (std::size_t j = 0; j < src.cells.size(); ++j) {
      Chain d = x.differential(x.cell(src.cells[j].word, src.cells[j].generator));
      for (const auto& [t, v] : d.terms()) m(dst.index.at(t), j) = v;
    }
    out.differentials_.emplace(k, std::move(m));
  }
  return out;
}

IntMatrix AssembledComplex::boundaries(int k, const GeneratorFilter& source,
                                       const GeneratorFilter& target) const {
  const AssembledComplex& w = outer_ ? *outer_ : *this;
  const IntMatrix& d = w.differential(k + 1);
  const auto& from = w.basis(k + 1).cells;
  const auto& to = w.basis(k).cells;
  const std::size_t n = basis(k).cells.size();
  // Row r of d is kept at inner position inner[r], or dropped.
  std::vector<std::optional<std::size_t>> inner(to.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = outer_ ? outer_index_.at(k)[i] : i;
    if (!target || target(to[r].generator)) inner[r] = i;
  }
  std::vector<std::size_t> cols, forbidden;
  for (std::size_t j = 0; j < from.size(); ++j)
    if (!source || source(from[j].generator)) cols.push_back(j);
  for (std::size_t r = 0; r < to.size(); ++r)
    if (!inner[r]) forbidden.push_back(r);
  IntMatrix kernel = IntMatrix::identity(cols.size());
  if (!forbidden.empty() && !cols.empty()) {
    IntMatrix a(forbidden.size(), cols.size());
    for (std::size_t i = 0; i < forbidden.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) a(i, j) = d(forbidden[i], cols[j]);
    kernel = kernel_lattice(a);
  }
  IntMatrix out(n, kernel.cols());
  for (std::size_t r = 0; r < to.size(); ++r) {
    if (!inner[r]) continue;
    for (std::size_t c = 0; c < kernel.cols(); ++c) {
      Integer v = 0;
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (kernel(j, c) != 0) v += d(r, cols[j]) * kernel(j, c);
      out(*inner[r], c) = v;
    }
  }
  return out;
}

std::vector<IntMatrix> assemble_differential(const TwistedComplex& x, int lo,
                                             int hi) {
  AssembledComplex w = assemble(x, lo, hi);
  std::vector<IntMatrix> out;
  for (int k = lo; k <= hi; ++k) out.push_back(w.differential(k));
  return out;
}

void check_square_zero(const TwistedComplex& x, const AssembledComplex& w) {
  for (int k = w.lo() + 1; k <= w.hi(); ++k) {
    IntMatrix p = w.differential(k - 1) * w.differential(k);
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j)
        if (p(i, j) != 0)
          throw DifferentialNotSquareZero(
              "D(D(" + x.cell_name(w.basis(k).cells[j]) + ")) has coefficient " +
              p(i, j).get_str() + " on " + x.cell_name(w.basis(k - 2).cells[i]));
  }
}

Subquotient homology_presentation(const AssembledComplex& w, int k) {
  return Subquotient(kernel_lattice(w.differential(k)), w.boundaries(k));
}

std::vector<HomologyGroup> homology(const TwistedComplex& x, int lo, int hi) {
  AssembledComplex w = assemble(x, lo, hi + 1);
  check_square_zero(x, w);
  std::vector<HomologyGroup> out;
  for (int k = lo; k <= hi; ++k)
    out.push_back(x.module()->box_radius()
                      ? homology_presentation(w, k).group()
                      : homology_at(w.differential(k + 1), w.differential(k)));
  return out;
}

// ---------------------------------------------------------------------------
// Filtration

void require_action_monotone(const TwistedComplex& x) {
  for (const auto& g : x.generators())
    if (!g.action)
      throw ActionsMissing("generator '" + g.name + "' has no action value");
  for (const auto& [xy, m] : x.cocycle()) {
    const Generator& a = x.generator(xy.first);
    const Generator& b = x.generator(xy.second);
    if (!(*b.action < *a.action))
      throw NotActionMonotone("m(" + a.name + ", " + b.name +
                              ") is nonzero but action(" + b.name + ") = " +
                              rational_to_string(*b.action) + " >= action(" +
                              a.name + ") = " + rational_to_string(*a.action));
  }
}

TwistedComplex filtered_subcomplex(const TwistedComplex& x,
                                   const ExtendedRational& b) {
  require_action_monotone(x);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < x.generators().size(); ++i)
    if (ExtendedRational(*x.generator(i).action) < b) kept.push_back(i);
  return x.restrict_to(kept);
}

namespace {

bool in_span(const IntMatrix& b, const IntVector& v, GroundRing ring) {
  IntMatrix with = b.hconcat(IntMatrix::from_columns({v}, b.rows()));
  if (ring == GroundRing::rationals) return rank_q(with) == rank_q(b);
  return lattice_contained(IntMatrix::from_columns({v}, b.rows()), b);
}

}  // namespace

ExtendedRational spectral_number(const TwistedComplex& x, const Chain& z,
                                 const Rational& b0, GroundRing ring) {
  require_action_monotone(x);
  if (z.is_zero()) return b0;
  auto k = x.degree(z);
  if (!k) throw NotACycle("chain is not homogeneous: " + x.format(z));
  for (const auto& [c, v] : z.terms())
    if (!(*x.generator(c.generator).action < b0))
      throw NotACycle("chain " + x.format(z) + " does not lie below level " +
                      rational_to_string(b0));
  if (!x.differential(z).is_zero())
    throw NotACycle("D(" + x.format(z) + ") = " +
                    x.format(x.differential(z)));

  AssembledComplex w = assemble(x, *k, *k + 1);
  const IntVector v = w.to_vector(z, *k);
  auto action = [&](std::size_t g) { return *x.generator(g).action; };
  if (in_span(w.boundaries(*k, [&](std::size_t g) { return action(g) < b0; }), v,
              ring))
    return b0;
  std::set<Rational> levels;
  for (const auto& g : x.generators())
    if (*g.action >= b0) levels.insert(*g.action);
  for (const Rational& a : levels)
    if (in_span(w.boundaries(*k, [&](std::size_t g) { return action(g) <= a; }),
                v, ring))
      return a;
  return ExtendedRational::infinity();
}

}  // namespace dgc
