#include "dgc/dga.hpp"

#include <atomic>
#include <sstream>

#include "dgc/errors.hpp"
#include "expression.hpp"

namespace dgc {
namespace {

std::uint64_t next_algebra_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter++;
}

}  // namespace

// ---------------------------------------------------------------------------
// AlgebraElement

AlgebraElement::AlgebraElement(std::uint64_t algebra_id, Terms terms)
    : algebra_id_(algebra_id) {
  for (auto& [w, c] : terms)
    if (sgn(c) != 0) terms_.emplace(w, std::move(c));
}

Integer AlgebraElement::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Integer(0) : it->second;
}

void AlgebraElement::adopt(std::uint64_t id) {
  if (id == 0 || id == algebra_id_) return;
  if (algebra_id_ != 0 && !terms_.empty())
    throw MixedAlgebra("elements belong to different algebras");
  algebra_id_ = id;
}

void AlgebraElement::add_term(const Word& w, const Integer& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  if (!other.terms_.empty()) adopt(other.algebra_id_);
  for (const auto& [w, c] : other.terms_) add_term(w, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  if (!other.terms_.empty()) adopt(other.algebra_id_);
  for (const auto& [w, c] : other.terms_) add_term(w, -c);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(const Integer& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, x] : terms_) x *= c;
  return *this;
}

// ---------------------------------------------------------------------------
// Dga

Dga::Dga() : id_(next_algebra_id()) {}

DgaPtr Dga::laurent(std::vector<std::string> generators) {
  for (const auto& g : generators)
    if (!detail::is_identifier(g))
      throw InvalidDefinition("invalid generator name '" + g + "'");
  std::shared_ptr<Dga> a(new Dga());
  a->backend_ = Backend::laurent;
  a->generators_ = std::move(generators);
  return a;
}

std::vector<Word> Dga::basis(int degree) const {
  std::vector<Word> out;
  if (backend_ == Backend::laurent) return out;
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i].degree == degree) out.push_back(Word::index(i));
  return out;
}

Word Dga::unit_word() const {
  if (backend_ == Backend::laurent)
    return Word{std::vector<std::int64_t>(generators_.size(), 0)};
  return Word::index(unit_);
}

AlgebraElement Dga::word(const Word& w, const Integer& c) const {
  AlgebraElement::Terms t;
  t.emplace(w, c);
  return AlgebraElement(id_, std::move(t));
}

AlgebraElement Dga::generator_power(std::size_t i, std::int64_t power) const {
  if (backend_ != Backend::laurent || i >= generators_.size())
    throw InvalidDefinition("generator_power needs a Laurent generator");
  Word w = unit_word();
  w.key[i] = power;
  return word(w);
}

int Dga::degree(const Word& w) const {
  if (backend_ == Backend::laurent) return 0;
  return words_.at(w.as_index()).degree;
}

std::optional<int> Dga::degree_of(const AlgebraElement& a) const {
  std::optional<int> d;
  for (const auto& [w, c] : a.terms()) {
    int dw = degree(w);
    if (d && *d != dw) return std::nullopt;
    d = dw;
  }
  return d;
}

bool Dga::is_homogeneous_of_degree(const AlgebraElement& a, int deg) const {
  for (const auto& [w, c] : a.terms())
    if (degree(w) != deg) return false;
  return true;
}

std::optional<Word> Dga::corner(const Word& w) const {
  if (backend_ == Backend::laurent) return w;
  const TableWord& tw = words_.at(w.as_index());
  if (tw.degree == 0) return w;
  if (!tw.corner) return std::nullopt;
  return Word::index(*tw.corner);
}

void Dga::check_member(const AlgebraElement& a) const {
  if (!a.is_zero() && a.algebra_id() != id_)
    throw MixedAlgebra("element does not belong to this algebra");
}

std::optional<AlgebraElement> Dga::multiply_words(const Word& a,
                                                  const Word& b) const {
  if (backend_ == Backend::laurent) {
    Word w = a;
    for (std::size_t i = 0; i < w.key.size(); ++i) w.key[i] += b.key[i];
    return word(w);
  }
  std::size_t ia = a.as_index(), ib = b.as_index();
  if (words_[ia].degree + words_[ib].degree > truncation_) return std::nullopt;
  if (auto it = products_.find({ia, ib}); it != products_.end())
    return it->second;
  if (ia == unit_) return word(b);
  if (ib == unit_) return word(a);
  return AlgebraElement(id_, {});
}

std::optional<AlgebraElement> Dga::try_multiply(const AlgebraElement& a,
                                                const AlgebraElement& b) const {
  check_member(a);
  check_member(b);
  AlgebraElement out(id_, {});
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) {
      auto p = multiply_words(wa, wb);
      if (!p) return std::nullopt;
      out += (ca * cb) * std::move(*p);
    }
  return out;
}

AlgebraElement Dga::multiply(const AlgebraElement& a,
                             const AlgebraElement& b) const {
  auto p = try_multiply(a, b);
  if (!p)
    throw TruncationExceeded("product " + format(a) + " * " + format(b) +
                             " exceeds truncation degree " +
                             std::to_string(truncation_));
  return *p;
}

AlgebraElement Dga::differential_of_word(const Word& w) const {
  if (backend_ == Backend::laurent) return AlgebraElement(id_, {});
  return differentials_.at(w.as_index());
}

AlgebraElement Dga::differential(const AlgebraElement& a) const {
  check_member(a);
  AlgebraElement out(id_, {});
  for (const auto& [w, c] : a.terms()) out += c * differential_of_word(w);
  return out;
}

std::string Dga::word_name(const Word& w) const {
  if (backend_ == Backend::table) return words_.at(w.as_index()).name;
  std::string s;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (w.key[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += generators_[i];
    if (w.key[i] != 1) s += '^' + std::to_string(w.key[i]);
  }
  return s.empty() ? "1" : s;
}

std::optional<Word> Dga::find_word(std::string_view name) const {
  if (backend_ == Backend::table) {
    auto it = word_index_.find(name);
    if (it == word_index_.end()) return std::nullopt;
    return Word::index(it->second);
  }
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i] == name) {
      Word w = unit_word();
      w.key[i] = 1;
      return w;
    }
  return std::nullopt;
}

namespace {

void append_term(std::string& out, const Integer& c, const std::string& name) {
  std::string term;
  if (name == "1") {
    term = c.get_str();
  } else if (c == 1) {
    term = name;
  } else if (c == -1) {
    term = "-" + name;
  } else {
    term = c.get_str() + "*" + name;
  }
  if (out.empty()) {
    out = term;
  } else if (term[0] == '-') {
    out += " - " + term.substr(1);
  } else {
    out += " + " + term;
  }
}

}  // namespace

std::string Dga::format(const AlgebraElement& a) const {
  if (a.is_zero()) return "0";
  std::string out;
  for (auto it = a.terms().rbegin(); it != a.terms().rend(); ++it) {
    bool is_unit = it->first == unit_word();
    append_term(out, it->second, is_unit ? "1" : word_name(it->first));
  }
  return out;
}

AlgebraElement Dga::parse(std::string_view text) const {
  AlgebraElement out(id_, {});
  for (const auto& m : detail::parse_monomials(text, false)) {
    AlgebraElement term = word(unit_word(), m.coefficient);
    for (const auto& f : m.factors) {
      AlgebraElement factor;
      if (backend_ == Backend::laurent) {
        std::size_t i = 0;
        while (i < generators_.size() && generators_[i] != f.name) ++i;
        if (i == generators_.size())
          throw ExpressionError("unknown generator '" + f.name + "'",
                                f.position);
        factor = generator_power(i, f.exponent);
      } else {
        auto w = find_word(f.name);
        if (!w)
          throw ExpressionError("unknown basis word '" + f.name + "'",
                                f.position);
        if (f.exponent < 1)
          throw ExpressionError("table words take positive exponents only",
                                f.position);
        factor = unit();
        for (std::int64_t k = 0; k < f.exponent; ++k)
          factor = multiply(factor, word(*w));
      }
      auto p = try_multiply(term, factor);
      if (!p)
        throw ExpressionError("monomial exceeds truncation degree",
                              f.position);
      term = std::move(*p);
    }
    out += term;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builders

TableDgaBuilder::TableDgaBuilder(int truncation) : truncation_(truncation) {
  if (truncation < 0) throw InvalidDefinition("negative truncation");
}

std::size_t TableDgaBuilder::add_word(std::string name, int degree) {
  if (degree < 0)
    throw InvalidDefinition("word '" + name + "' has negative degree");
  if (degree > truncation_)
    throw TruncationTooSmall("word '" + name + "' has degree " +
                             std::to_string(degree) + " above truncation " +
                             std::to_string(truncation_));
  if (find(name)) throw InvalidDefinition("duplicate word '" + name + "'");
  words_.push_back({std::move(name), degree, std::nullopt});
  return words_.size() - 1;
}

void TableDgaBuilder::set_unit(std::size_t w) { unit_ = w; }

void TableDgaBuilder::set_product(std::size_t a, std::size_t b, TermList v) {
  products_[{a, b}] = std::move(v);
}

void TableDgaBuilder::set_differential(std::size_t w, TermList v) {
  differentials_[w] = std::move(v);
}

void TableDgaBuilder::set_corner(std::size_t w, std::size_t corner) {
  words_.at(w).corner = corner;
}

void TableDgaBuilder::default_corners_to_unit() {
  if (!unit_) return;
  for (auto& w : words_)
    if (w.degree > 0 && !w.corner) w.corner = *unit_;
}

std::optional<std::size_t> TableDgaBuilder::find(std::string_view name) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i].name == name) return i;
  return std::nullopt;
}

DgaPtr TableDgaBuilder::build() const {
  std::shared_ptr<Dga> a(new Dga());
  a->backend_ = Backend::table;
  a->truncation_ = truncation_;
  a->words_ = words_;
  for (std::size_t i = 0; i < words_.size(); ++i)
    a->word_index_.emplace(words_[i].name, i);
  if (!unit_) {
    std::size_t i = 0;
    while (i < words_.size() && words_[i].degree != 0) ++i;
    if (i == words_.size()) throw InvalidDefinition("table DGA has no unit");
    a->unit_ = i;
  } else {
    a->unit_ = *unit_;
  }
  auto to_element = [&](const TermList& tl) {
    AlgebraElement e(a->id_, {});
    for (const auto& [w, c] : tl) {
      if (w >= words_.size()) throw InvalidDefinition("word index out of range");
      e.add_term(Word::index(w), c);
    }
    return e;
  };
  for (const auto& [key, tl] : products_) {
    if (key.first >= words_.size() || key.second >= words_.size())
      throw InvalidDefinition("product index out of range");
    a->products_.emplace(key, to_element(tl));
  }
  a->differentials_.assign(words_.size(), AlgebraElement(a->id_, {}));
  for (const auto& [w, tl] : differentials_) a->differentials_.at(w) = to_element(tl);
  return a;
}

DgaPtr free_tensor_algebra(
    const std::vector<std::pair<std::string, int>>& generators, int truncation,
    const std::vector<std::vector<std::pair<Integer, std::vector<std::size_t>>>>&
        generator_differentials) {
  if (truncation < 0) throw InvalidDefinition("negative truncation");
  for (const auto& [name, deg] : generators) {
    if (deg < 1)
      throw InvalidDefinition("free generator '" + name +
                              "' needs positive degree");
    if (!detail::is_identifier(name))
      throw InvalidDefinition("invalid generator name '" + name + "'");
  }
  if (!generator_differentials.empty() &&
      generator_differentials.size() != generators.size())
    throw InvalidDefinition("one differential per generator expected");

  std::shared_ptr<Dga> a(new Dga());
  a->backend_ = Backend::table;
  a->truncation_ = truncation;

  std::vector<std::vector<std::size_t>> letters;  // word -> letter sequence
  std::map<std::vector<std::size_t>, std::size_t> index;
  std::vector<std::vector<std::size_t>> by_degree(truncation + 1);

  auto name_of = [&](const std::vector<std::size_t>& seq) {
    if (seq.empty()) return std::string("1");
    std::string s;
    for (std::size_t i = 0; i < seq.size();) {
      std::size_t j = i;
      while (j < seq.size() && seq[j] == seq[i]) ++j;
      if (!s.empty()) s += '*';
      s += generators[seq[i]].first;
      if (j - i > 1) s += '^' + std::to_string(j - i);
      i = j;
    }
    return s;
  };
  auto add = [&](std::vector<std::size_t> seq, int deg) {
    std::size_t id = letters.size();
    a->words_.push_back({name_of(seq), deg, std::nullopt});
    index.emplace(seq, id);
    letters.push_back(std::move(seq));
    by_degree[deg].push_back(id);
  };
  add({}, 0);
  for (int d = 1; d <= truncation; ++d)
    for (std::size_t g = 0; g < generators.size(); ++g) {
      int dg = generators[g].second;
      if (dg > d) continue;
      for (std::size_t prev : std::vector<std::size_t>(by_degree[d - dg])) {
        auto seq = letters[prev];
        seq.push_back(g);
        add(std::move(seq), d);
      }
    }
  a->unit_ = 0;
  for (std::size_t i = 1; i < a->words_.size(); ++i) a->words_[i].corner = 0;
  for (std::size_t i = 0; i < a->words_.size(); ++i)
    a->word_index_.emplace(a->words_[i].name, i);

  for (std::size_t i = 1; i < letters.size(); ++i)
    for (std::size_t j = 1; j < letters.size(); ++j) {
      if (a->words_[i].degree + a->words_[j].degree > truncation) continue;
      auto seq = letters[i];
      seq.insert(seq.end(), letters[j].begin(), letters[j].end());
      a->products_.emplace(std::pair{i, j}, a->word(Word::index(index.at(seq))));
    }

  a->differentials_.assign(letters.size(), AlgebraElement(a->id_, {}));
  if (!generator_differentials.empty()) {
    for (std::size_t g = 0; g < generators.size(); ++g)
      for (const auto& [c, seq] : generator_differentials[g]) {
        int deg = 0;
        for (std::size_t l : seq) {
          if (l >= generators.size())
            throw InvalidDefinition("differential letter out of range");
          deg += generators[l].second;
        }
        if (deg != generators[g].second - 1)
          throw InvalidDefinition("differential of '" + generators[g].first +
                                  "' has the wrong degree");
      }
    for (std::size_t w = 1; w < letters.size(); ++w) {
      const auto& seq = letters[w];
      AlgebraElement d(a->id_, {});
      int prefix_degree = 0;
      for (std::size_t k = 0; k < seq.size(); ++k) {
        Integer sign = prefix_degree % 2 == 0 ? 1 : -1;
        for (const auto& [c, repl] : generator_differentials[seq[k]]) {
          std::vector<std::size_t> s(seq.begin(), seq.begin() + k);
          s.insert(s.end(), repl.begin(), repl.end());
          s.insert(s.end(), seq.begin() + k + 1, seq.end());
          d.add_term(Word::index(index.at(s)), sign * c);
        }
        prefix_degree += generators[seq[k]].second;
      }
      a->differentials_[w] = std::move(d);
    }
    FreePresentation fp{generators, generator_differentials};
    a->free_ = std::move(fp);
  } else {
    a->free_ = FreePresentation{
        generators,
        std::vector<std::vector<std::pair<Integer, std::vector<std::size_t>>>>(
            generators.size())};
  }
  return a;
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_dga(const Dga& a) {
  ValidationReport report;
  if (a.backend() == Backend::laurent) return report;

  const auto& words = a.words();
  const Word unit = a.unit_word();
  const int n = a.truncation();
  auto name = [&](std::size_t i) { return words[i].name; };

  if (a.degree(unit) != 0)
    report.add("unit degree", {name(unit.as_index())}, "unit must have degree 0");
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& c = words[i].corner;
    if (c && (*c >= words.size() || words[*c].degree != 0))
      report.add("corner degree", {name(i)}, "corner must be a degree-0 word");
  }
  for (const auto& [key, value] : a.explicit_products())
    if (!a.is_homogeneous_of_degree(
            value, words[key.first].degree + words[key.second].degree))
      report.add("product degree", {name(key.first), name(key.second)},
                 a.format(value));

  for (std::size_t i = 0; i < words.size(); ++i) {
    Word w = Word::index(i);
    AlgebraElement dw = a.differential_of_word(w);
    if (!a.is_homogeneous_of_degree(dw, words[i].degree - 1))
      report.add("differential degree", {name(i)}, a.format(dw));
    AlgebraElement ddw = a.differential(dw);
    if (!ddw.is_zero()) report.add("d^2 = 0", {name(i)}, a.format(ddw));
    auto left = a.multiply_words(unit, w);
    auto right = a.multiply_words(w, unit);
    AlgebraElement expected = a.word(w);
    if (left && *left != expected)
      report.add("unit law", {"unit*" + name(i)}, a.format(*left - expected));
    if (right && *right != expected)
      report.add("unit law", {name(i) + "*unit"}, a.format(*right - expected));
  }

  std::vector<std::vector<std::size_t>> by_degree(n + 1);
  for (std::size_t i = 0; i < words.size(); ++i) by_degree[words[i].degree].push_back(i);

  for (int da = 0; da <= n; ++da)
    for (int db = 0; da + db <= n; ++db)
      for (std::size_t ia : by_degree[da])
        for (std::size_t ib : by_degree[db]) {
          Word wa = Word::index(ia), wb = Word::index(ib);
          AlgebraElement ab = *a.multiply_words(wa, wb);
          AlgebraElement lhs = a.differential(ab);
          AlgebraElement rhs =
              a.multiply(a.differential_of_word(wa), a.word(wb)) +
              Integer(da % 2 == 0 ? 1 : -1) *
                  a.multiply(a.word(wa), a.differential_of_word(wb));
          if (lhs != rhs)
            report.add("Leibniz", {name(ia), name(ib)}, a.format(lhs - rhs));
          for (int dc = 0; da + db + dc <= n; ++dc)
            for (std::size_t ic : by_degree[dc]) {
              if (ia == unit.as_index() || ib == unit.as_index() ||
                  ic == unit.as_index())
                continue;
              Word wc = Word::index(ic);
              AlgebraElement l = a.multiply(ab, a.word(wc));
              AlgebraElement r =
                  a.multiply(a.word(wa), *a.multiply_words(wb, wc));
              if (l != r)
                report.add("associativity", {name(ia), name(ib), name(ic)},
                           a.format(l - r));
            }
        }
  return report;
}

// ---------------------------------------------------------------------------
// Rank-1 local systems

Rank1LocalSystem Rank1LocalSystem::on_generators(DgaPtr base,
                                                 std::vector<int> values) {
  if (base->backend() != Backend::laurent)
    throw InvalidDefinition("generator values need a Laurent group ring");
  if (values.size() != base->generators().size())
    throw InvalidDefinition("one monodromy value per generator expected");
  for (int v : values)
    if (v != 1 && v != -1)
      throw InvalidDefinition("monodromy values must be units (+1 or -1)");
  return Rank1LocalSystem(std::move(base), std::move(values));
}

Rank1LocalSystem Rank1LocalSystem::on_words(DgaPtr base,
                                            std::map<std::size_t, int> values) {
  if (base->backend() != Backend::table)
    throw InvalidDefinition("word values need a table DGA");
  std::vector<int> v(base->words().size(), 1);
  for (const auto& [w, x] : values) {
    if (w >= v.size()) throw InvalidDefinition("word index out of range");
    if (base->words()[w].degree != 0)
      throw InvalidDefinition("monodromy is defined on degree-0 words only");
    if (x != 1 && x != -1)
      throw InvalidDefinition("monodromy values must be units (+1 or -1)");
    v[w] = x;
  }
  return Rank1LocalSystem(std::move(base), std::move(v));
}

Rank1LocalSystem Rank1LocalSystem::trivial(DgaPtr base) {
  std::size_t n = base->backend() == Backend::laurent ? base->generators().size()
                                                      : base->words().size();
  return Rank1LocalSystem(std::move(base), std::vector<int>(n, 1));
}

int Rank1LocalSystem::rho(const Word& w) const {
  if (base_->backend() == Backend::laurent) {
    int r = 1;
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] == -1 && (w.key[i] % 2) != 0) r = -r;
    return r;
  }
  if (base_->degree(w) != 0)
    throw InvalidDefinition("monodromy queried on a positive-degree word");
  return values_.at(w.as_index());
}

bool Rank1LocalSystem::is_trivial() const {
  for (int v : values_)
    if (v != 1) return false;
  return true;
}

Rank1LocalSystem Rank1LocalSystem::tensor(const Rank1LocalSystem& other) const {
  if (other.base_ != base_)
    throw MixedAlgebra("local systems over different algebras");
  std::vector<int> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * other.values_[i];
  return Rank1LocalSystem(base_, std::move(v));
}

AlgebraElement phi_twist(const Rank1LocalSystem& l, const AlgebraElement& a) {
  const Dga& base = *l.base();
  base.check_member(a);
  AlgebraElement::Terms out;
  for (const auto& [w, c] : a.terms()) {
    auto corner = base.corner(w);
    if (!corner)
      throw MissingCorner("word '" + base.word_name(w) +
                          "' has no declared degree-0 corner");
    out.emplace(w, l.rho(*corner) * c);
  }
  return AlgebraElement(base.id(), std::move(out));
}

ValidationReport validate_local_system(const Rank1LocalSystem& l) {
  ValidationReport report;
  const Dga& a = *l.base();
  if (a.backend() == Backend::laurent) return report;
  const auto& words = a.words();
  if (phi_twist(l, a.unit()) != a.unit())
    report.add("twist fixes unit", {words[a.unit_word().as_index()].name},
               "monodromy of the unit must be 1");
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words[i].degree > 0 && !words[i].corner)
      report.add("corner declared", {words[i].name}, "missing degree-0 corner");
  if (!report.ok()) return report;

  for (std::size_t i = 0; i < words.size(); ++i) {
    Word wi = Word::index(i);
    AlgebraElement x = a.word(wi);
    AlgebraElement lhs = phi_twist(l, a.differential(x));
    AlgebraElement rhs = a.differential(phi_twist(l, x));
    if (lhs != rhs)
      report.add("twist commutes with d", {words[i].name}, a.format(lhs - rhs));
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (words[i].degree + words[j].degree > a.truncation()) continue;
      Word wj = Word::index(j);
      AlgebraElement y = a.word(wj);
      AlgebraElement p = phi_twist(l, *a.multiply_words(wi, wj));
      AlgebraElement q = a.multiply(phi_twist(l, x), phi_twist(l, y));
      if (p != q) {
        const bool degree_zero = words[i].degree == 0 && words[j].degree == 0;
        report.add(degree_zero ? "multiplicativity" : "twist is multiplicative",
                   {words[i].name, words[j].name}, a.format(p - q));
      }
    }
  }
  return report;
}

}  // namespace dgc
